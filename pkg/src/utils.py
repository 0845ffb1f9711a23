# src/utils.py

import os
import logging
from functools import wraps
from typing import Callable, Any, Dict, Optional

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(levelname)s - [%(name)s] - %(message)s'
LOG_DATEFMT = '%Y-%m-%d %H:%M:%S'


def exception_handler(func: Callable) -> Callable:
    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except Exception as e:
            logger.error(f"Error in {func.__name__}: {str(e)}", exc_info=True, extra={'config_module': func.__module__})
            raise
    return wrapper


def get_project_root() -> str:
    return os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def setup_logging(config: Dict[str, Dict[str, str]], verbose: bool = False, log_file: Optional[str] = None) -> str:
    """Configure the root logger from the [General] section and return the log file path."""
    general = config.get('General', {})
    log_dir = general.get('log_dir', 'logs')
    if not os.path.isabs(log_dir):
        log_dir = os.path.join(get_project_root(), log_dir)
    os.makedirs(log_dir, exist_ok=True)

    level_name = 'DEBUG' if verbose else general.get('log_level', 'INFO').upper()
    path = log_file or os.path.join(log_dir, 'lie_betti.log')
    logging.basicConfig(
        filename=path,
        level=getattr(logging, level_name, logging.INFO),
        format=LOG_FORMAT,
        datefmt=LOG_DATEFMT,
        encoding='utf-8'
    )
    return path
