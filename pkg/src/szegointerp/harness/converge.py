"""Mean-convergence experiments for interpolation and Szegő quadrature."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .. import __version__
from ..lagrange import error_resolution, interp_error, interpolate
from ..measure import integrate
from ..opuc import DegenerateMeasure, build_basis
from ..paraorth import NodeFindingFailure, find_nodes, szego_quadrature
from .catalog import get_function
from .config import ExperimentConfig, render_config
from .grammar import parse_measure_spec

log = logging.getLogger(__name__)

CSV_HEADER = ("n", "p", "interp_error", "quad_error", "measure", "f", "w_strategy", "seed")
REFERENCE_RESOLUTION = 2**15


@dataclass
class ConvergenceRow:
    n: int
    p: float
    interp_error: float
    quad_error: float
    wall_time: float
    w_angle: float = math.nan
    # ||L_n(f)||_2 two ways, and the bound sqrt(c0) * ||f||_inf
    parseval_norm: float = math.nan
    direct_norm: float = math.nan
    norm_bound: float = math.nan
    failure: str | None = None

    @property
    def failed(self) -> bool:
        return self.failure is not None


@dataclass
class ConvergenceReport:
    config: ExperimentConfig
    rows: list[ConvergenceRow] = field(default_factory=list)
    integral: complex = complex("nan")
    version: str = __version__

    @property
    def any_failed(self) -> bool:
        return any(r.failed for r in self.rows)

    def series(self, p: float, column: str = "interp_error") -> list[float]:
        return [getattr(r, column) for r in self.rows if r.p == p]

    def to_csv(self, timing: bool = False) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER + (("wall_time",) if timing else ()))
        cfg = self.config
        seed = "" if cfg.seed is None else cfg.seed
        for r in self.rows:
            row = [r.n, repr(float(r.p)), repr(r.interp_error), repr(r.quad_error),
                   cfg.measure, cfg.f, cfg.w.render(), seed]
            if timing:
                row.append(f"{r.wall_time:.6f}")
            writer.writerow(row)
        return buf.getvalue()

    def to_json(self, timing: bool = False) -> str:
        rows = []
        for r in self.rows:
            d = asdict(r)
            if not timing:
                del d["wall_time"]
            rows.append({k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in d.items()})
        doc = {
            "version": self.version,
            "config": render_config(self.config),
            "integral": [self.integral.real, self.integral.imag],
            "rows": rows,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def render(self, timing: bool = False) -> str:
        return self.to_json(timing) if self.config.format == "json" else self.to_csv(timing)


def run_convergence(cfg: ExperimentConfig) -> ConvergenceReport:
    """Interpolation errors for each ``(n, p)`` and the quadrature error per ``n``.

    A degree whose basis or nodes cannot be computed yields rows marked as
    failed (errors NaN); later degrees are still attempted.
    """
    m = parse_measure_spec(cfg.measure)
    f = get_function(cfg.f)
    report = ConvergenceReport(cfg)
    report.integral = integrate(m, f, REFERENCE_RESOLUTION, f.kinks)
    c0 = m.total_mass

    try:
        basis = build_basis(m, max(cfg.degrees) + 1)
    except DegenerateMeasure as exc:
        basis = None
        log.warning("basis to degree %d failed (%s); building per degree", max(cfg.degrees) + 1, exc)

    for n in cfg.degrees:
        start = time.perf_counter()
        w = cfg.w.point(n, cfg.seed)
        try:
            b = basis if basis is not None else build_basis(m, n + 1)
            ns = find_nodes(b, n, w)
            lag = interpolate(ns, b, f)
            quad_error = abs(szego_quadrature(ns, f) - report.integral)
            resolution = cfg.resolution or error_resolution(n)
            errors = [interp_error(ns, b, m, f, p, resolution, f.kinks, interpolant=lag) for p in cfg.p]
            direct = lag.norm(m, 2.0, resolution)
        except (DegenerateMeasure, NodeFindingFailure) as exc:
            log.warning("n = %d failed: %s", n, exc)
            elapsed = time.perf_counter() - start
            for p in cfg.p:
                report.rows.append(ConvergenceRow(n, p, math.nan, math.nan, elapsed,
                                                  failure=f"{type(exc).__name__}: {exc}"))
            continue
        elapsed = time.perf_counter() - start
        for p, err in zip(cfg.p, errors):
            report.rows.append(ConvergenceRow(
                n, p, err, quad_error, elapsed,
                w_angle=float(np.angle(w)) % (2 * math.pi),
                parseval_norm=lag.parseval_norm(),
                direct_norm=direct,
                norm_bound=math.sqrt(c0) * f.sup_norm,
            ))
    return report
