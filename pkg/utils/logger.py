import logging
import os
from logging.handlers import RotatingFileHandler


class Logger:
    LOG_DIR = os.getenv(
        "TROPICALKEX_LOG_DIR", os.path.expanduser("~/TropicalKex/logs")
    )
    LOG_FILE = os.path.join(LOG_DIR, "app.log")
    MAX_FILE_SIZE = 5 * 1024 * 1024  # 5MB per file
    BACKUP_COUNT = 3
    DEFAULT_LEVEL = logging.DEBUG if os.getenv("DEBUG_MODE") else logging.WARNING

    _instance = None

    def __new__(cls, log_file=None, level=None):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialize(
                log_file or cls.LOG_FILE, level or cls.DEFAULT_LEVEL
            )
        return cls._instance

    def _initialize(self, log_file, level):
        log_dir = os.path.dirname(os.path.abspath(log_file))
        os.makedirs(log_dir, exist_ok=True)

        self.log_file = log_file
        self.logger = logging.getLogger("TropicalKex")
        self.logger.setLevel(level)
        self.logger.propagate = False

        # Re-initialization replaces the handlers of the named logger.
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
            handler.close()

        console_handler = logging.StreamHandler()
        console_handler.setLevel(logging.INFO)

        file_handler = RotatingFileHandler(
            log_file, maxBytes=self.MAX_FILE_SIZE, backupCount=self.BACKUP_COUNT
        )
        file_handler.setLevel(logging.DEBUG)

        formatter = logging.Formatter(
            "%(asctime)s - %(levelname)s - %(module)s - %(message)s"
        )
        console_handler.setFormatter(formatter)
        file_handler.setFormatter(formatter)

        self.logger.addHandler(console_handler)
        self.logger.addHandler(file_handler)

    def set_level(self, level):
        self.logger.setLevel(level)

    def debug(self, message):
        self.logger.debug(message)

    def info(self, message):
        self.logger.info(message)

    def warning(self, message):
        self.logger.warning(message)

    def error(self, message):
        self.logger.error(message)

    def critical(self, message):
        self.logger.critical(message)


# Initialize a global logger instance
logger = Logger()
