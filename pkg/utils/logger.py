import logging
import os
from logging.handlers import RotatingFileHandler


class Logger:
    """Centralized logging utility for the semi-bandit simulator"""

    def __init__(self, name="semibandit", log_level=None):
        self.logger = logging.getLogger(name)

        # Set log level from environment or default to INFO
        if log_level is None:
            log_level = os.getenv('LOG_LEVEL', 'INFO')

        level = getattr(logging, log_level.upper(), logging.INFO)
        self.logger.setLevel(level)

        # Prevent duplicate handlers
        if not self.logger.handlers:
            self._setup_handlers()

    def _setup_handlers(self):
        """Setup console and file handlers"""
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

        # Console handler
        console_handler = logging.StreamHandler()
        console_handler.setLevel(logging.INFO)
        console_handler.setFormatter(formatter)
        self.logger.addHandler(console_handler)

        if os.getenv('LOG_TO_FILE', '1') == '0':
            return

        # File handler with rotation
        logs_dir = os.getenv('LOG_DIR', 'logs')
        os.makedirs(logs_dir, exist_ok=True)

        file_handler = RotatingFileHandler(
            os.path.join(logs_dir, "semibandit.log"),
            maxBytes=10*1024*1024,  # 10MB
            backupCount=5
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        self.logger.addHandler(file_handler)

    def info(self, message):
        """Log info message"""
        self.logger.info(message)

    def error(self, message):
        """Log error message"""
        self.logger.error(message)

    def warning(self, message):
        """Log warning message"""
        self.logger.warning(message)

    def debug(self, message):
        """Log debug message"""
        self.logger.debug(message)

    def log_replication_start(self, replication, seed, policy):
        """Log the start of a replication"""
        self.info(f"Replication {replication} started - policy: {policy}, seed: {seed}")

    def log_replication_end(self, replication, avg_regret):
        """Log the end of a replication with its final time-averaged regret"""
        self.info(f"Replication {replication} finished - avg regret: {avg_regret:.6g}")

    def log_round(self, replication, t, strategy, reward):
        """Log a single decision round"""
        if not self.logger.isEnabledFor(logging.DEBUG):
            return
        self.debug(f"Replication {replication} t={t}: played {strategy} reward {reward:.6g}")

    def log_oracle(self, variant, strategy, value, beta):
        """Log an oracle answer"""
        if not self.logger.isEnabledFor(logging.DEBUG):
            return
        self.debug(f"Oracle {variant}: {strategy} value {value} (beta {beta})")


# Global logger instance
logger = Logger()
