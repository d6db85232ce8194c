"""CSV export of value surfaces and convergence reports."""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .convergence import ConvergenceReport
from .dp import ValueTable
from .errors import SinkFailure

SURFACE_HEADER = ("x_budget", "y_budget", "value")
CONVERGENCE_HEADER = ("epsilon", "value", "delta", "bound")


def fmt(v: float) -> str:
    """12 significant digits, no trailing noise."""
    s = f"{v:.12g}"
    return "0" if s == "-0" else s


def _write(text: str, sink) -> int:
    data = text.encode()
    try:
        if isinstance(sink, (str, Path)):
            with open(sink, "wb") as fh:
                fh.write(data)
        elif isinstance(sink, io.TextIOBase):
            sink.write(text)
        else:
            sink.write(data)
    except OSError as exc:
        raise SinkFailure(str(exc)) from exc
    return len(data)


def surface_csv(table: ValueTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SURFACE_HEADER)
    xs, ys = table.x_mesh.points, table.y_mesh.points
    for a, x in enumerate(xs):
        row = table.values[a]
        for b, y in enumerate(ys):
            w.writerow((fmt(x), fmt(y), fmt(row[b])))
    return buf.getvalue()


def export_surface(table: ValueTable, sink) -> int:
    """Write ``x_budget,y_budget,value`` rows (row-major) to a path or stream; return bytes written."""
    return _write(surface_csv(table), sink)


def read_surface(text: str) -> list[tuple[float, float, float]]:
    rows = csv.reader(io.StringIO(text))
    header = next(rows)
    if tuple(header) != SURFACE_HEADER:
        raise ValueError(f"unexpected header {header}")
    return [(float(x), float(y), float(v)) for x, y, v in rows]


def convergence_csv(report: ConvergenceReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CONVERGENCE_HEADER)
    for e, v, d, b in report.rows():
        w.writerow((fmt(e), fmt(v), "" if d != d else fmt(d), fmt(b)))
    return buf.getvalue()


def export_convergence(report: ConvergenceReport, sink) -> int:
    return _write(convergence_csv(report), sink)
