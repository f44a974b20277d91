"""Logging configuration for tangle package."""
import os
import logging
from typing import Optional

_is_configured = False

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _resolve_level(level: Optional[str] = None) -> int:
    """Turn a level name (or LOG_LEVEL from the environment) into a logging constant."""
    log_level_str = (level or os.getenv('LOG_LEVEL', 'INFO')).upper()
    try:
        return getattr(logging, log_level_str)
    except AttributeError:
        print(f"Invalid LOG_LEVEL: {log_level_str}. Defaulting to INFO.")
        return logging.INFO


def configure_logging(level: Optional[str] = None) -> None:
    """Configure the root logger, overriding any earlier configuration.

    Args:
        level: Level name such as "DEBUG". If None, LOG_LEVEL from the
            environment is used (default INFO).
    """
    global _is_configured
    log_level = _resolve_level(level)

    logging.basicConfig(
        level=log_level,
        format=LOG_FORMAT,
        datefmt='%H:%M:%S',
        force=True  # Ensure we override any existing configuration
    )
    logging.getLogger().setLevel(log_level)

    # Numerical libraries are chatty at DEBUG
    for noisy in ('matplotlib', 'numexpr', 'weave', 'wandb'):
        logging.getLogger(noisy).setLevel(logging.WARNING)

    _is_configured = True


def _ensure_logging_configured():
    """Internal function to configure logging if not already configured."""
    if _is_configured:
        return
    configure_logging()


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Get a configured logger.

    This function ensures logging is configured with the appropriate level from
    the LOG_LEVEL environment variable before returning a logger. Configuration
    happens automatically the first time this function is called.

    Args:
        name: The name for the logger. If None, the package logger is returned.

    Returns:
        A configured logger instance.

    Usage:
        from tangle.utils.logging import get_logger
        logger = get_logger(__name__)
        logger.debug("Integrating %d grid points", n)
    """
    _ensure_logging_configured()
    return logging.getLogger(name or 'tangle')
