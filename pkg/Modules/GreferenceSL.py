# GreferenceSL.py
# V1: Published decimal expansions of C and p0*, for digit-match checks.
"""
Loads and provides access to the shipped reference constants.

reference_constants.txt at the project root holds ``name = decimal`` lines;
blank lines and lines starting with '#' are ignored.
"""
import os
import logging

import GnumericsSL

log = logging.getLogger(__name__)

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
REFERENCE_FILE = os.path.join(PROJECT_ROOT, "reference_constants.txt")

_reference_cache = None


def _parse_line(line):
    """(name, decimal) for a data line, None for comments and blanks."""
    line = line.strip()
    if not line or line.startswith("#"):
        return None
    name, sep, value = line.partition("=")
    name, value = name.strip(), value.strip()
    if not sep or not name:
        log.warning(f"Skipping malformed reference line: {line[:40]!r}")
        return None
    if not GnumericsSL.is_decimal(value):
        log.warning(f"Skipping reference {name}: value is not a plain decimal.")
        return None
    return name, value


def load_reference_constants(path=None):
    """Loads the reference constants; cached after the first successful read."""
    global _reference_cache
    if path is None and _reference_cache is not None:
        return _reference_cache

    path = path or REFERENCE_FILE
    constants = {}
    if not os.path.exists(path):
        log.error(f"Reference constants file not found: {path}")
        return constants
    try:
        with open(path, 'r') as f:
            for line in f:
                parsed = _parse_line(line)
                if parsed:
                    constants[parsed[0]] = parsed[1]
        log.info(f"Loaded {len(constants)} reference constants from {path}")
    except IOError as e:
        log.error(f"Error reading reference constants {path}: {e}", exc_info=True)
        return {}
    if path == REFERENCE_FILE:
        _reference_cache = constants
    return constants


def get_reference(name):
    """Decimal string for ``name`` ("C" or "p0_star"), or None if absent."""
    value = load_reference_constants().get(name)
    if value is None:
        log.warning(f"No reference value named {name!r}.")
    return value


def reference_places(name):
    """Number of decimals shipped for ``name``, 0 if absent."""
    value = get_reference(name)
    if value is None:
        return 0
    _, _, frac = value.partition(".")
    return len(frac)


def reference_prefix(name, places):
    """The reference truncated to ``places`` decimals, as printed by the CLI."""
    value = get_reference(name)
    if value is None:
        return None
    if places > reference_places(name):
        raise GnumericsSL.PrecisionError(
            f"reference {name} has {reference_places(name)} decimals, {places} requested")
    head, _, frac = value.partition(".")
    return f"{head}.{frac[:places]}" if places else head


def reference_value(name, ctx):
    value = get_reference(name)
    if value is None:
        return None
    return GnumericsSL.real_from_decimal(value, ctx)

# === End of GreferenceSL.py ===
