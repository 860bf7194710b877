# GloggerSL.py
# V1: Console on stderr plus optional file log; stdout stays numeric.
"""
Configures logging for the lab.
"""
import logging
import os
import sys
import GconfigSL

LOG_DIR = "logs"
LOG_FILE = os.path.join(LOG_DIR, "shallitlab.log")
FILE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
CONSOLE_FORMAT = '%(levelname)s: %(message)s'


def setup_logging(console_level=None):
    """
    Sets up the root logger: a stderr console handler at the configured
    level, plus a file handler when logging is enabled in config.
    ``console_level`` overrides the configured level (e.g. "INFO" for -v).
    """
    try:
        config = GconfigSL.load_config()
    except Exception:
        config = dict(GconfigSL.DEFAULT_CONFIG)
    level_name = console_level or config.get("console_level", "WARNING")
    level = getattr(logging, str(level_name).upper(), logging.WARNING)

    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    handlers = [console_handler]
    root_level = level

    if config.get("logging", False):
        try:
            os.makedirs(LOG_DIR, exist_ok=True)
            file_handler = logging.FileHandler(LOG_FILE, mode='a')
            file_handler.setLevel(logging.INFO)
            file_handler.setFormatter(logging.Formatter(FILE_FORMAT))
            handlers.append(file_handler)
            root_level = min(level, logging.INFO)
        except OSError as e:
            logging.basicConfig(level=level, format=CONSOLE_FORMAT, stream=sys.stderr, force=True)
            logging.error(f"Could not create log directory '{LOG_DIR}': {e}. File logging disabled.")
            return

    root.setLevel(root_level)
    for handler in handlers:
        root.addHandler(handler)
    logging.getLogger(__name__).info("Logging setup complete.")

# === End of GloggerSL.py ===
