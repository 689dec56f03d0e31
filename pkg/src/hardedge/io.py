"""Self-describing CSV and JSON report files.

CSV layout::

    # format: hardedge/1
    # config: {...}          resolved run configuration (JSON)
    # verdict: pass
    # summary: {...}         summary statistics and checks (JSON)
    col_a,col_b,...
    ...

Reals are written with 17 significant digits so that parsing a written value
returns the identical double.  JSON files hold one object with keys
``config``, ``results``, ``verdict`` and ``version``; non-finite reals become
``null`` there.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

FORMAT_VERSION = "hardedge/1"
_PREFIX = "# "


def format_real(x) -> str:
    """Shortest-safe decimal text for one value (17 significant digits for reals)."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if x is None:
        return ""
    return str(x)


def parse_value(text: str):
    """Inverse of :func:`format_real` for one CSV cell."""
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    if text == "-0":
        # only a negative zero real prints this way; integers print "0"
        return -0.0
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _plain(obj):
    """Convert numpy scalars/arrays and non-finite floats into JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def _dumps(obj) -> str:
    return json.dumps(_plain(obj), allow_nan=False, separators=(",", ":"))


def columns_of(rows, columns=None):
    if columns:
        return list(columns)
    cols = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols


def render_csv(config: dict, rows: list, summary: dict, verdict: str, columns=None) -> str:
    buf = io.StringIO()
    buf.write(f"{_PREFIX}format: {FORMAT_VERSION}\n")
    buf.write(f"{_PREFIX}config: {_dumps(config)}\n")
    buf.write(f"{_PREFIX}verdict: {verdict}\n")
    buf.write(f"{_PREFIX}summary: {_dumps(summary)}\n")
    cols = columns_of(rows, columns)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([format_real(r.get(c)) for c in cols])
    return buf.getvalue()


def render_json(config: dict, results: dict, verdict: str) -> str:
    doc = {"config": config, "results": results, "verdict": verdict, "version": FORMAT_VERSION}
    return json.dumps(_plain(doc), allow_nan=False, indent=1) + "\n"


def render_report(report, config: dict, fmt: str) -> str:
    """Text of ``report`` (an :class:`~hardedge.harness.ExperimentReport`) in format ``fmt``."""
    results = report.results()
    if fmt == "csv":
        summary = {k: v for k, v in results.items() if k != "rows"}
        return render_csv(config, report.rows, summary, report.verdict, getattr(report, "columns", None))
    if fmt == "json":
        return render_json(config, results, report.verdict)
    raise ValueError(f"unknown format {fmt!r}")


def write_report(report, config: dict, path, fmt: str = "csv") -> str:
    """Write ``report`` to ``path`` (``None`` or ``"-"`` for stdout) and return the text."""
    text = render_report(report, config, fmt)
    if path in (None, "-"):
        import sys
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def parse_report(text: str) -> dict:
    """Parse report text of either format into ``{config, results, verdict, version}``."""
    if not text.startswith(f"{_PREFIX}format:"):
        doc = json.loads(text)
        return {"config": doc["config"], "results": doc["results"], "verdict": doc["verdict"],
                "version": doc["version"]}
    lines = text.splitlines(keepends=True)
    meta = {}
    body_start = 0
    for i, line in enumerate(lines):
        if not line.startswith(_PREFIX):
            body_start = i
            break
        key, _, value = line[len(_PREFIX):].rstrip("\n").partition(": ")
        meta[key] = value
    else:
        body_start = len(lines)
    reader = csv.reader(io.StringIO("".join(lines[body_start:])))
    table = list(reader)
    header = table[0] if table else []
    rows = [{c: parse_value(v) for c, v in zip(header, r)} for r in table[1:]]
    results = {"rows": rows}
    results.update(json.loads(meta.get("summary", "{}")))
    return {"config": json.loads(meta["config"]), "results": results, "verdict": meta.get("verdict"),
            "version": meta.get("format"), "columns": header}


def read_report(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return parse_report(fh.read())
