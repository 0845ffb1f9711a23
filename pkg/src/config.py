# src/config.py

"""
This module handles configuration management for the Betti engine.

System-wide defaults live in DEFAULT_CONFIG and are overridden by config.ini
in the project root. Command-line flags override both; the CLI reads the merged
values through the typed accessors below.
"""

import os
import configparser
import logging
from typing import Dict
from .utils import get_project_root

logger = logging.getLogger(__name__)

SYSTEM_CONFIG_FILE = 'config.ini'

DEFAULT_CONFIG = {
    'General': {
        'log_dir': 'logs',
        'log_level': 'INFO'
    },
    'Output': {
        'default_format': 'table',
        'out_dir': 'output'
    },
    'Linalg': {
        'modular_screen': 'true',
        'modular_prime': '2147483647'
    },
    'Verify': {
        'max_n': '3',
        'max_m': '3',
        'max_p': '4',
        'max_kernel_n': '4'
    }
}

_TRUE_VALUES = {'1', 'true', 'yes', 'on'}
_FALSE_VALUES = {'0', 'false', 'no', 'off'}


def load_system_config(config_file: str = SYSTEM_CONFIG_FILE) -> Dict[str, Dict[str, str]]:
    """
    Load the system configuration.
    Falls back to DEFAULT_CONFIG when the file is missing.
    """
    config = configparser.ConfigParser()
    config.read_dict(DEFAULT_CONFIG)

    config_path = config_file if os.path.isabs(config_file) else os.path.join(get_project_root(), config_file)
    if os.path.exists(config_path):
        config.read(config_path, encoding='utf-8')
        logger.debug(f"Loaded configuration from {config_path}")
    else:
        logger.info(f"{config_path} not found, using built-in defaults")

    return {section: dict(config[section]) for section in config.sections()}


def get_int(config: Dict[str, Dict[str, str]], section: str, key: str) -> int:
    raw = config.get(section, {}).get(key, DEFAULT_CONFIG[section][key])
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"[{section}] {key} must be an integer, got {raw!r}")


def get_bool(config: Dict[str, Dict[str, str]], section: str, key: str) -> bool:
    raw = str(config.get(section, {}).get(key, DEFAULT_CONFIG[section][key])).strip().lower()
    if raw in _TRUE_VALUES:
        return True
    if raw in _FALSE_VALUES:
        return False
    raise ValueError(f"[{section}] {key} must be a boolean, got {raw!r}")
