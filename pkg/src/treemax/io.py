"""Deterministic CSV/JSON emission: fixed float formatting, stable ordering."""

import csv
import json
import math


def format_float(x):
    """Format a float with 12 significant digits, locale independent."""
    if isinstance(x, float):
        if x == 0.0:
            x = 0.0  # normalize -0.0
        return format(x, ".12g")
    return str(x)


def format_cell(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format_float(x)
    return str(x)


def round_floats(obj):
    """Recursively round floats to 12 significant digits for stable JSON bytes."""
    if isinstance(obj, float):
        if math.isfinite(obj):
            return float(format(obj, ".12g")) + 0.0  # +0.0 normalizes -0.0
        return repr(obj)  # inf/nan are not valid JSON numbers
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    return obj


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(c) for c in row])


def dump_json(obj):
    return json.dumps(round_floats(obj), sort_keys=True, indent=2) + "\n"


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(dump_json(obj))
