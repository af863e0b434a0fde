"""Deterministic JSON / CSV emission.

Floats are written with 17 significant digits.  Non-finite floats become
the string "inf" (or "nan"); callers add the companion boolean flag.
Files are written to a temporary sibling and renamed, so a failed run
never leaves partial output behind.
"""

import csv
import io
import json
import math
import os
import sys
import tempfile

SCHEMA_VERSION = 1


def fmt_float(x):
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _json(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        s = fmt_float(obj)
        return s if math.isfinite(obj) else json.dumps(s)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_json(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _json(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_json(obj, indent=2):
    return _json(obj, indent, 0) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def dumps_csv(rows):
    if not rows:
        return ""
    header = list(rows[0])
    for row in rows[1:]:
        for key in row:
            if key not in header:
                header.append(key)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row.get(k)) for k in header])
    return buf.getvalue()


def write_text(text, path):
    """Atomically write ``text`` to ``path``; ``None`` or '-' means stdout."""
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def num(x, prefix, row):
    """Store a real-or-infinite value under ``prefix`` with its ``_inf`` flag."""
    if x is None:
        row[prefix] = None
        row[f"{prefix}_inf"] = False
        return row
    x = float(x)
    row[prefix] = x
    row[f"{prefix}_inf"] = math.isinf(x)
    return row


def cplx(z, prefix, row):
    """Split a complex value into ``prefix_re`` / ``prefix_im`` fields."""
    if z is None:
        row[f"{prefix}_re"] = None
        row[f"{prefix}_im"] = None
    else:
        row[f"{prefix}_re"] = float(z.real)
        row[f"{prefix}_im"] = float(z.imag)
    return row
