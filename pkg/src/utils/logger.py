"""
Logging configuration for geocube

Console output goes to standard error so that command results on
standard output stay byte-identical; rotating file output is opt-in.
"""

import logging
import sys
from pathlib import Path
from logging.handlers import RotatingFileHandler
from typing import Optional

CONSOLE_HANDLER = "geocube-console"
FILE_HANDLER = "geocube-file"


def setup_logger(
    name: str = "geocube",
    log_dir: Optional[Path] = None,
    level: int = logging.WARNING,
    console: bool = True,
    to_file: bool = False
) -> logging.Logger:
    """
    Set up application logging with console and file handlers

    Handlers hang off the root logger so that the module loggers
    (core.*, utils.*, cli.*) reach them. Calling it again only updates
    levels and adds handlers that are still missing.

    Args:
        name: Application logger name, also the log file stem
        log_dir: Directory for log files (default: ./logs)
        level: Logging level
        console: Enable console output on stderr
        to_file: Also write a rotating log file

    Returns:
        The application logger
    """
    root = logging.getLogger()
    root.setLevel(level)
    existing = {handler.get_name(): handler for handler in root.handlers}

    if console and CONSOLE_HANDLER not in existing:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.set_name(CONSOLE_HANDLER)
        console_format = logging.Formatter(
            '%(levelname)s: %(message)s'
        )
        console_handler.setFormatter(console_format)
        root.addHandler(console_handler)

    if to_file and FILE_HANDLER not in existing:
        if log_dir is None:
            log_dir = Path.cwd() / "logs"
        log_dir.mkdir(parents=True, exist_ok=True)

        file_handler = RotatingFileHandler(
            log_dir / f"{name}.log",
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5,
            encoding='utf-8'
        )
        file_handler.set_name(FILE_HANDLER)
        file_format = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        file_handler.setFormatter(file_format)
        root.addHandler(file_handler)

    for handler in root.handlers:
        if handler.get_name() in (CONSOLE_HANDLER, FILE_HANDLER):
            handler.setLevel(level)

    return logging.getLogger(name)
