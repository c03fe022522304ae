"""Point-set readers (TSPLIB node coordinates, CSV) and run-report files.

Report format
-------------
A report is line-oriented UTF-8 text::

    # bilevel-dca report v1
    key: value            (one per line, fixed key order)
    ...
    [trace]               (TSV: outer, lambda, mu, inner_iterations, smoothed_cost)
    ...
    [centers]             (TSV: final continuous centers, one row per line)
    ...
    [profile]             (TSV: probe, radius, snapped_cost; radial search only)

Floats are written with ``repr`` so that parsing the report back yields the
exact values.
"""

import csv
import io
import math
from importlib import resources
from pathlib import Path

import numpy as np

from .exceptions import ParseError

__all__ = [
    "parse_tsplib",
    "parse_csv",
    "format_csv",
    "load_points",
    "load_dataset",
    "format_report",
    "emit_report",
    "parse_report",
    "format_profile",
]

_SUPPORTED_EDGE_TYPES = {"EUC_2D", "CEIL_2D", "ATT", "EUC_3D"}


def parse_tsplib(text):
    """Parse a TSPLIB file with a ``NODE_COORD_SECTION``.

    Returns an ``(m, n)`` array in file order. Node indices must run
    ``1..m`` without gaps.
    """
    header = {}
    lines = text.splitlines()
    start = None
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        if line.upper().startswith("NODE_COORD_SECTION"):
            start = lineno
            break
        if ":" in line:
            key, _, value = line.partition(":")
            header[key.strip().upper()] = value.strip()
    if start is None:
        raise ParseError("missing NODE_COORD_SECTION")

    edge = header.get("EDGE_WEIGHT_TYPE", "EUC_2D").upper()
    if edge not in _SUPPORTED_EDGE_TYPES:
        raise ParseError(f"unsupported EDGE_WEIGHT_TYPE {edge!r}; only node-coordinate Euclidean files are read")

    rows = []
    for lineno in range(start + 1, len(lines) + 1):
        line = lines[lineno - 1].strip()
        if not line:
            continue
        if line.upper() == "EOF" or line.upper().endswith("_SECTION"):
            break
        parts = line.split()
        if len(parts) < 3:
            raise ParseError("expected 'index x y'", lineno)
        try:
            idx = int(parts[0])
            coords = [float(p) for p in parts[1:]]
        except ValueError:
            raise ParseError(f"non-numeric entry in {line!r}", lineno) from None
        if not all(math.isfinite(c) for c in coords):
            raise ParseError("non-finite coordinate", lineno)
        if idx != len(rows) + 1:
            raise ParseError(f"node index {idx} out of sequence (expected {len(rows) + 1})", lineno)
        if rows and len(coords) != len(rows[0]):
            raise ParseError("inconsistent coordinate count", lineno)
        rows.append(coords)

    if not rows:
        raise ParseError("NODE_COORD_SECTION is empty", start)
    if "DIMENSION" in header:
        try:
            declared = int(header["DIMENSION"])
        except ValueError:
            raise ParseError(f"bad DIMENSION {header['DIMENSION']!r}") from None
        if declared != len(rows):
            raise ParseError(f"DIMENSION is {declared} but {len(rows)} nodes were read")
    return np.array(rows, dtype=float)


def parse_csv(text):
    """Parse rectangular numeric CSV; a non-numeric first row is a header."""
    reader = csv.reader(io.StringIO(text))
    rows = []
    width = None
    for lineno, record in enumerate(reader, 1):
        if not record or all(not c.strip() for c in record):
            continue
        try:
            values = [float(c) for c in record]
        except ValueError:
            if not rows and width is None:
                width = len(record)
                continue
            raise ParseError(f"non-numeric value in {record!r}", lineno) from None
        if width is not None and len(values) != width:
            raise ParseError(f"ragged row: expected {width} columns, got {len(values)}", lineno)
        if not all(math.isfinite(v) for v in values):
            raise ParseError("non-finite value", lineno)
        width = len(values)
        rows.append(values)
    if not rows:
        raise ParseError("no data rows")
    return np.array(rows, dtype=float)


def format_csv(A, header=None):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(header)
    for row in np.asarray(A, dtype=float):
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def load_points(path):
    """Read a ``.tsp`` (TSPLIB) or CSV point file from disk."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".tsp" or "NODE_COORD_SECTION" in text:
        return parse_tsplib(text)
    return parse_csv(text)


def load_dataset(name):
    """Load a bundled data set: ``"eil76"`` or ``"ds18"``."""
    files = {"eil76": "eil76.tsp", "ds18": "ds18.csv"}
    try:
        fname = files[name.lower()]
    except KeyError:
        raise KeyError(f"unknown bundled data set {name!r}; choose from {sorted(files)}") from None
    text = resources.files("bilevel_dca.datasets").joinpath(fname).read_text()
    return parse_tsplib(text) if fname.endswith(".tsp") else parse_csv(text)


_REPORT_KEYS = [
    "model",
    "k",
    "seed",
    "start_radius",
    "snapped_cost",
    "true_cost",
    "cluster_centers",
    "total_center",
    "outer_iterations",
    "total_inner_iterations",
    "descent_monotone",
    "wall_time",
]


def _fmt(v):
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (tuple, list)):
        return " ".join(str(int(i)) for i in v)
    return str(v)


def format_report(report, profile=None, include_time=True):
    """Render a :class:`~bilevel_dca.continuation.SolveReport` as text.

    ``include_time=False`` writes ``wall_time: omitted`` so that reruns of
    the same configuration are byte-identical.
    """
    values = {
        "model": report.model,
        "k": report.k,
        "seed": report.seed,
        "start_radius": None if report.start_radius is None else float(report.start_radius),
        "snapped_cost": float(report.snapped_cost),
        "true_cost": float(report.true_cost),
        "cluster_centers": report.snapped_centers,
        "total_center": report.total_center,
        "outer_iterations": len(report.inner_iterations),
        "total_inner_iterations": report.total_inner_iterations,
        "descent_monotone": report.monotone,
        "wall_time": float(report.wall_time) if include_time else "omitted",
    }
    out = ["# bilevel-dca report v1"]
    out += [f"{key}: {_fmt(values[key])}" for key in _REPORT_KEYS]
    out.append("[trace]")
    out.append("outer\tlambda\tmu\tinner_iterations\tsmoothed_cost")
    for i, ((lam, mu), n, c) in enumerate(
        zip(report.parameter_trace, report.inner_iterations, report.smoothed_cost_trace)
    ):
        out.append(f"{i}\t{lam!r}\t{mu!r}\t{n}\t{float(c)!r}")
    out.append("[centers]")
    for row in np.asarray(report.final_centers, dtype=float):
        out.append("\t".join(repr(float(v)) for v in row))
    if profile:
        out.append("[profile]")
        out.append(format_profile(profile).rstrip("\n"))
    return "\n".join(out) + "\n"


def format_profile(profile):
    """TSV of ``(probe, radius, snapped_cost)`` rows for plotting."""
    lines = ["probe\tradius\tsnapped_cost"]
    for i, (radius, cost) in enumerate(profile, 1):
        lines.append(f"{i}\t{float(radius)!r}\t{float(cost)!r}")
    return "\n".join(lines) + "\n"


def emit_report(report, path, profile=None, include_time=True):
    """Write :func:`format_report` output to ``path``.

    When ``profile`` is given, a sibling ``<stem>.profile.tsv`` is written too.
    """
    path = Path(path)
    try:
        path.write_text(format_report(report, profile, include_time))
        if profile:
            path.with_suffix(".profile.tsv").write_text(format_profile(profile))
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc
    return path


def _parse_value(key, raw):
    if raw == "none":
        return None
    if raw in ("true", "false"):
        return raw == "true"
    if key == "model" or raw == "omitted":
        return raw
    if key == "cluster_centers":
        return tuple(int(t) for t in raw.split())
    if key in ("k", "total_center", "outer_iterations", "total_inner_iterations", "seed"):
        return int(raw)
    return float(raw)


def parse_report(text):
    """Inverse of :func:`format_report`; returns a plain dict."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# bilevel-dca report"):
        raise ParseError("not a bilevel-dca report", 1)
    out = {"trace": [], "centers": [], "profile": []}
    section = None
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1]
            if section not in ("trace", "centers", "profile"):
                raise ParseError(f"unknown section {line}", lineno)
            continue
        if section is None:
            key, sep, raw = line.partition(": ")
            if not sep:
                raise ParseError(f"expected 'key: value', got {line!r}", lineno)
            try:
                out[key] = _parse_value(key, raw)
            except ValueError:
                raise ParseError(f"bad value for {key}: {raw!r}", lineno) from None
            continue
        cells = line.split("\t")
        if section == "trace":
            if cells[0] == "outer":
                continue
            out["trace"].append((int(cells[0]), float(cells[1]), float(cells[2]), int(cells[3]), float(cells[4])))
        elif section == "centers":
            out["centers"].append([float(c) for c in cells])
        else:
            if cells[0] == "probe":
                continue
            out["profile"].append((float(cells[1]), float(cells[2])))
    out["centers"] = np.array(out["centers"], dtype=float)
    return out
