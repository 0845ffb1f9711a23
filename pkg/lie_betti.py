# lie_betti.py

from version import VERSION, AUTHOR, DATE

f"""
Lie Betti
Version: {VERSION}
Author: {AUTHOR}
Date: {DATE}
"""

import sys
import logging
from src.cli import main as cli_main
from src.config import load_system_config
from src.utils import setup_logging

logger = logging.getLogger(__name__)


def main(argv=None) -> int:
    """Load configuration, set up logging and dispatch to the CLI."""
    config = load_system_config()
    log_path = setup_logging(config, verbose='--verbose' in (argv if argv is not None else sys.argv[1:]))
    logger.info(f"lie_betti {VERSION} started, logging to {log_path}")
    try:
        return cli_main(argv, config)
    finally:
        logger.info("lie_betti finished")


if __name__ == "__main__":
    sys.exit(main())
