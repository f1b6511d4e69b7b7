"""Grid evaluation and CSV output."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..fields import FieldKind
from ..quadrature import integrate_momentum_oracle
from ..twodetector import ELEMENT_FIELDS, PROTOCOL_ELEMENTS, MatrixElements, compute_detailed
from .config import ConfigError, SweepSpec


@dataclass(frozen=True)
class ResultRow:
    params: tuple            # swept values, in axis order
    elements: MatrixElements  # divided by the squared coupling
    negativity: float         # per lambda^2 (scalars) or lambda^2 Delta^2 / T (fermion)
    error_estimate: float
    converged: bool
    wall_ms: float
    oracle_deviation: float | None = None


def header(spec: SweepSpec) -> list:
    cols = [a.path for a in spec.axes]
    for name in ELEMENT_FIELDS:
        cols += [f"re_{name}", f"im_{name}"]
    cols += ["negativity", "error_estimate", "converged"]
    if spec.verify:
        cols.append("oracle_deviation")
    cols.append("wall_ms")
    return cols


def _fmt(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def row_values(row: ResultRow, spec: SweepSpec) -> list:
    out = [_fmt(v) for v in row.params]
    for name in ELEMENT_FIELDS:
        z = complex(getattr(row.elements, name))
        out += [_fmt(z.real), _fmt(z.imag)]
    out += [_fmt(row.negativity), _fmt(row.error_estimate), "true" if row.converged else "false"]
    if spec.verify:
        dev = row.oracle_deviation
        out.append("" if dev is None else _fmt(dev))
    out.append(format(row.wall_ms, ".3f"))
    return out


def oracle_deviation(spec: SweepSpec, model, d1, d2, me: MatrixElements, protocol) -> float:
    """Largest relative deviation between the radial and 3D momentum routes."""
    worst = 0.0
    for name, element in PROTOCOL_ELEMENTS[protocol].items():
        radial = complex(getattr(me, name))
        if model.kind is not FieldKind.REAL_SCALAR and radial == 0:
            continue
        ref = integrate_momentum_oracle(model, d1, d2, element,
                                        normalization=spec.normalization).value
        scale = max(abs(ref), abs(radial))
        if scale > 0:
            worst = max(worst, abs(radial - ref) / scale)
    return worst


def evaluate_point(spec: SweepSpec, point: tuple, strict: bool = False) -> ResultRow:
    model, (d1, d2) = spec.configure(point)
    t0 = time.perf_counter()
    c = compute_detailed(model, d1, d2, spec.settings, 1.0, spec.normalization, strict=strict)
    dev = oracle_deviation(spec, model, d1, d2, c.elements, c.protocol) if spec.verify else None
    ms = 1e3 * (time.perf_counter() - t0)
    return ResultRow(tuple(point), c.elements, float(c.negativity), c.error_estimate,
                     c.converged, ms, dev)


def _worker(args):
    spec, point = args
    return evaluate_point(spec, point)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list:
    """Evaluate every grid point; rows come back in row-major grid order."""
    if spec.verify and any(d.sigma <= 0 for d in spec.base):
        raise ConfigError("--verify needs extended detectors (sigma > 0)")
    points = spec.points()
    if workers <= 1 or len(points) == 1:
        return [evaluate_point(spec, p) for p in points]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map keeps submission order whatever the completion order
        return list(pool.map(_worker, [(spec, p) for p in points], chunksize=1))


def write_csv(rows, spec: SweepSpec, stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header(spec))
    for r in rows:
        w.writerow(row_values(r, spec))


def csv_text(rows, spec: SweepSpec) -> str:
    buf = io.StringIO()
    write_csv(rows, spec, buf)
    return buf.getvalue()


def save_csv(rows, spec: SweepSpec, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_csv(rows, spec, fh)


def negativity_grid(rows, spec: SweepSpec) -> np.ndarray:
    n = np.array([r.negativity for r in rows], dtype=float)
    shape = tuple(len(a.values) for a in spec.axes)
    return n.reshape(shape) if shape else n
