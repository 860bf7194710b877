# GconfigSL.py
# V1: JSON settings merged with defaults, .env overrides for digits and workers.
"""
Handles loading the lab's configuration.

Non-sensitive settings live in config.json at the project root (or wherever
SHALLIT_CONFIG points). Environment variables, optionally from a .env file,
override the default digit count and the worker count.
"""
import json
import os
import logging
from dotenv import load_dotenv

import GnumericsSL
import GconstantsSL

log = logging.getLogger(__name__)

CONFIG_FILE = "config.json"
CONSOLE_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

MINIMUMS = {
    "default_digits": GnumericsSL.MIN_DIGITS,
    "guard_digits": GnumericsSL.MIN_GUARD,
    "workers": 1,
    "planner_margin": GconstantsSL.MIN_PLANNER_MARGIN,
}

DEFAULT_CONFIG = {
    "default_digits": 50,
    "guard_digits": 10,
    "workers": 1,
    "logging": False,
    "console_level": "WARNING",
    "planner_margin": 4,
}


def _project_root():
    current_dir = os.path.dirname(os.path.abspath(__file__))
    return os.path.dirname(current_dir)


# --- Environment Variable Loading ---
def load_env():
    """Loads .env file from the project root if it exists."""
    dotenv_path = os.path.join(_project_root(), '.env')
    if os.path.exists(dotenv_path):
        load_dotenv(dotenv_path=dotenv_path)


def _env_int(name, minimum):
    load_env()
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        log.warning(f"Ignoring {name}={raw!r}: not an integer.")
        return None
    if value < minimum:
        log.warning(f"Ignoring {name}={value}: must be >= {minimum}.")
        return None
    return value


# --- Configuration File Handling ---

def _get_config_path():
    """Config path: SHALLIT_CONFIG if set, else config.json in the project root."""
    override = os.environ.get("SHALLIT_CONFIG")
    if override:
        return override
    return os.path.join(_project_root(), CONFIG_FILE)


def _valid(key, value):
    default = DEFAULT_CONFIG[key]
    if isinstance(default, bool):
        return isinstance(value, bool)
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            return False
        return value >= MINIMUMS.get(key, 0)
    if key == "console_level":
        return value in CONSOLE_LEVELS
    return isinstance(value, type(default))


def load_config():
    """Loads configuration from JSON, merging defaults for missing or invalid keys."""
    config_path = _get_config_path()
    if not os.path.exists(config_path):
        log.debug(f"No configuration file at {config_path}; using defaults.")
        return DEFAULT_CONFIG.copy()

    try:
        with open(config_path, 'r') as f:
            config = json.load(f)
        if not isinstance(config, dict):
            raise ValueError("top level must be a JSON object")

        needs_saving = False
        for key in DEFAULT_CONFIG:
            if key not in config or not _valid(key, config[key]):
                config[key] = DEFAULT_CONFIG[key]
                needs_saving = True

        if needs_saving:
            log.warning("Config updated with defaults. Saving.")
            save_config(config)
        return config
    except json.JSONDecodeError as e:
        log.error(f"Error decoding JSON from config file {config_path}: {e}. Returning default config.", exc_info=True)
        return DEFAULT_CONFIG.copy()
    except Exception as e:
        log.error(f"Failed to load configuration from {config_path}: {e}. Returning default config.", exc_info=True)
        return DEFAULT_CONFIG.copy()


def save_config(data):
    """Saves configuration data to JSON."""
    config_path = _get_config_path()
    for key, value in DEFAULT_CONFIG.items():
        data.setdefault(key, value)
    try:
        with open(config_path, 'w') as f:
            json.dump(data, f, indent=4, sort_keys=True)
        log.info(f"Configuration saved successfully to {config_path}")
    except IOError as e:
        log.error(f"Could not write configuration file to {config_path}: {e}", exc_info=True)


# --- Helper Functions ---

def get_default_digits():
    """SHALLIT_DIGITS if valid, else the config value."""
    env = _env_int("SHALLIT_DIGITS", MINIMUMS["default_digits"])
    if env is not None:
        return env
    return load_config().get("default_digits", DEFAULT_CONFIG["default_digits"])


def get_workers():
    env = _env_int("SHALLIT_WORKERS", MINIMUMS["workers"])
    if env is not None:
        return env
    return load_config().get("workers", DEFAULT_CONFIG["workers"])


def get_guard_digits():
    return load_config().get("guard_digits", DEFAULT_CONFIG["guard_digits"])


def get_planner_margin():
    return load_config().get("planner_margin", DEFAULT_CONFIG["planner_margin"])


def is_logging_enabled():
    return load_config().get("logging", DEFAULT_CONFIG["logging"])


def get_console_level():
    return load_config().get("console_level", DEFAULT_CONFIG["console_level"])

# === End of GconfigSL.py ===
