# src/status_manager.py

import sys
import logging
from typing import Optional, TextIO

logger = logging.getLogger(__name__)


class StatusManager:
    _instance: Optional['StatusManager'] = None

    @classmethod
    def set_instance(cls, instance: Optional['StatusManager']) -> None:
        cls._instance = instance

    @classmethod
    def update_status(cls, message: str) -> None:
        if cls._instance:
            cls._instance._update_status_impl(message)
        else:
            # stdout carries reports, so unclaimed status goes to the log only
            logger.debug(f"Status: {message}")

    def _update_status_impl(self, message: str) -> None:
        raise NotImplementedError("Subclasses must implement _update_status_impl method")


class ConsoleStatus(StatusManager):
    """Writes status lines to stderr; registered by the CLI under --verbose."""

    def __init__(self, stream: TextIO = None):
        self.stream = stream or sys.stderr
        self.messages = []

    def _update_status_impl(self, message: str) -> None:
        self.messages.append(message)
        self.stream.write(f"Status: {message}\n")
        self.stream.flush()
