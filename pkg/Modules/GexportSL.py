# GexportSL.py
# V1: text / CSV / JSON rendering of result rows and records.
"""
Output formatting for the CLI. Every numeric field reaching this module is
already a decimal string from `real_to_decimal`, so rendering never touches
float formatting and repeated runs produce identical bytes.
"""
import json
import logging
import sys

import pandas as pd

log = logging.getLogger(__name__)

FORMATS = ("text", "csv", "json")


def _frame(rows, columns=None):
    if isinstance(rows, dict):
        rows = [rows]
    return pd.DataFrame(list(rows), columns=columns)


def render_table(rows, fmt, columns=None):
    """A list of row dicts as a table (text), CSV with header, or a JSON array."""
    if fmt == "json":
        return json.dumps(list(rows), indent=2, sort_keys=True) + "\n"
    frame = _frame(rows, columns)
    if fmt == "csv":
        return frame.to_csv(index=False, lineterminator="\n")
    if fmt == "text":
        if frame.empty:
            return "(no rows)\n"
        return frame.to_string(index=False) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def render_record(record, fmt, headline=None):
    """
    A single result. In text form only ``headline`` (a key of ``record``) is
    printed when given, otherwise ``key: value`` lines.
    """
    if fmt == "json":
        return json.dumps(record, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return _frame(record).to_csv(index=False, lineterminator="\n")
    if fmt == "text":
        if headline is not None:
            return f"{record[headline]}\n"
        width = max((len(k) for k in record), default=0)
        return "".join(f"{k.ljust(width)} : {v}\n" for k, v in record.items())
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def emit(text, output_path=None):
    """Write rendered output to ``output_path`` or standard output."""
    if output_path:
        with open(output_path, "w", newline="\n", encoding="utf-8") as f:
            f.write(text)
        log.info(f"Wrote {len(text)} characters to {output_path}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()

# === End of GexportSL.py ===
