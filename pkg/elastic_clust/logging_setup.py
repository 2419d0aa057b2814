import logging
import os
from typing import Optional

import colorlog

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
LOG_COLORS = {
    "DEBUG": "cyan",
    "INFO": "green",
    "WARNING": "yellow",
    "ERROR": "red",
    "CRITICAL": "bold_red",
}


class ColorfulFormatter(logging.Formatter):
    """
    A logging formatter that applies color to log messages based on severity.

    Wraps `colorlog.ColoredFormatter` so console output shows each log level in
    a distinct color. File handlers use the plain formatter instead, so log
    files stay free of escape codes.
    """

    def __init__(self, fmt: str = LOG_FORMAT, datefmt: str = DATE_FORMAT) -> None:
        super().__init__(fmt, datefmt)
        self._colored = colorlog.ColoredFormatter(
            f"%(log_color)s{fmt}", datefmt=datefmt, log_colors=LOG_COLORS
        )

    def format(self, record: logging.LogRecord) -> str:
        return self._colored.format(record)


def configure_logging(
    log_level: str | int = "INFO", log_file: Optional[str] = None
) -> logging.Logger:
    """
    Configures the root logger with a console handler and an optional file handler.

    Calling this more than once only updates the level; handlers are added on
    the first call.

    Args:
        log_level (str | int): The logging level (e.g., "INFO", logging.DEBUG).
        log_file (str, optional): Path of a log file to append to.

    Returns:
        logging.Logger: The configured root logger.
    """
    logger = logging.getLogger()
    logger.setLevel(log_level)

    if not any(getattr(h, "_elastic_clust", False) for h in logger.handlers):
        stream_handler = logging.StreamHandler()
        stream_handler.setFormatter(ColorfulFormatter())
        stream_handler._elastic_clust = True
        logger.addHandler(stream_handler)

        if log_file:
            os.makedirs(os.path.dirname(os.path.abspath(log_file)), exist_ok=True)
            file_handler = logging.FileHandler(log_file, mode="a")
            file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
            file_handler._elastic_clust = True
            logger.addHandler(file_handler)

    return logger
