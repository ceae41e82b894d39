import logging
import os
from logging.handlers import RotatingFileHandler
from typing import Optional

from .config import config

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(level: Optional[str] = None) -> None:
    """Configure the root logger once per process from the [LOGGING] section."""
    settings = config.get_logging_config()
    level_name = (level or settings['log_level']).upper()

    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)

    # stdout carries results, so diagnostics go to stderr
    logging.basicConfig(level=level_name, format=LOG_FORMAT)

    if settings['log_to_file']:
        log_dir = os.path.dirname(settings['log_file'])
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = RotatingFileHandler(
            settings['log_file'],
            maxBytes=settings['max_log_size_mb'] * 1024 * 1024,
            backupCount=settings['backup_count']
        )
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(file_handler)

    # Reduce logging for modules that are too verbose
    logging.getLogger('uvicorn.access').setLevel(logging.WARNING)
    logging.getLogger('httpx').setLevel(logging.WARNING)
