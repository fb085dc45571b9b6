"""Residual checks of the kernel, node and interpolation identities.

The node identities (delta property, partition of unity, projection) are
gated on a multiprecision re-evaluation of the computed basis and nodes;
their double-precision residuals are listed as informational rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..lagrange import error_resolution, fundamental_eval, interpolate
from ..measure import Measure, moments, quadrature_rule
from ..opuc import OpucBasis, build_basis, cd_kernel, kernel_direct, phi_pair, phi_table
from ..paraorth import find_nodes, para_eval
from ..extended import node_identity_residuals
from .catalog import CATALOG
from .grammar import parse_measure_spec

MAX_NMAX = 64
SMALL_DEGREE = 8


@dataclass
class Check:
    """One invariant: ``value <= tol`` for residuals, ``value > tol`` for lower bounds.

    A check without a tolerance is informational and never fails.
    """

    name: str
    tol: float | None
    lower_bound: bool = False
    value: float = math.nan
    samples: int = 0

    def update(self, value: float):
        value = float(value)
        if math.isnan(self.value):
            self.value = value
        else:
            self.value = min(self.value, value) if self.lower_bound else max(self.value, value)
        self.samples += 1

    @property
    def passed(self) -> bool:
        if self.tol is None:
            return True
        if self.samples == 0 or math.isnan(self.value):
            return False
        return self.value > self.tol if self.lower_bound else self.value <= self.tol

    @property
    def status(self) -> str:
        return "info" if self.tol is None else ("PASS" if self.passed else "FAIL")


@dataclass
class VerifyReport:
    measure: str
    n_values: tuple[int, ...]
    seed: int
    checks: dict[str, Check] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def table(self) -> str:
        lines = [f"{'invariant':<34} {'value':>11} {'tolerance':>11}  status"]
        for c in self.checks.values():
            rel = ">" if c.lower_bound else "<="
            tol = f"{rel}{c.tol:>9.1e}" if c.tol is not None else f"{'-':>11}"
            lines.append(f"{c.name:<34} {c.value:>11.3e} {tol}  {c.status}")
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {
            "measure": self.measure,
            "n_values": list(self.n_values),
            "seed": self.seed,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "value": c.value, "tol": c.tol, "status": c.status}
                for c in self.checks.values()
            ],
        }


def _degrees(n_max: int) -> tuple[int, ...]:
    out, n = [], 1
    while n <= n_max:
        out.append(n)
        n *= 2
    if out[-1] != n_max:
        out.append(n_max)
    return tuple(out)


def _unit_points(rng: np.random.Generator, size) -> np.ndarray:
    return np.exp(1j * rng.uniform(0.0, 2 * math.pi, size))


def _register(report: VerifyReport, *checks: Check):
    for c in checks:
        report.checks[c.name] = c


def _opuc_checks(report, m: Measure, b: OpucBasis, rng, c0: float, resolution: int):
    ortho = report.checks["orthonormality"]
    top = min(SMALL_DEGREE, b.max_degree)
    z, wq = quadrature_rule(m, resolution)
    table = phi_table(b, top, z)
    gram = (table * wq) @ np.conj(table).T
    ortho.update(np.max(np.abs(gram - np.eye(top + 1))))

    kappas = b.kappas
    report.checks["kappa_monotone"].update(max(0.0, float(np.max(kappas[:-1] - kappas[1:]))))

    zs = _unit_points(rng, 64)
    sym = report.checks["modulus_symmetry"]
    for n in range(b.max_degree + 1):
        p, ps = phi_pair(b, n, zs)
        sym.update(np.max(np.abs(np.abs(p) - np.abs(ps)) / (1 + np.abs(p))))


def _degree_checks(report, m: Measure, b: OpucBasis, n: int, rng, c0: float, cvals: np.ndarray):
    ck = report.checks
    resolution = error_resolution(n)
    z, wq = quadrature_rule(m, resolution)
    w = complex(_unit_points(rng, 1)[0])

    if n <= SMALL_DEGREE:
        coeffs = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
        poly = np.polynomial.polynomial.polyval
        kern = kernel_direct(b, n, w, z)
        lhs = np.sum(wq * poly(z, coeffs) * np.conj(kern))
        pw = poly(w, coeffs)
        ck["reproducing_kernel"].update(abs(lhs - pw) / (1 + abs(pw)))

    # CD quotient against the direct sum, separations from 1e-6 to 2
    ws = _unit_points(rng, 32)
    gaps = 10 ** rng.uniform(-6, 0, 32) * rng.choice([-1, 1], 32)
    zs = ws * np.exp(1j * gaps)
    zs = np.concatenate([zs, _unit_points(rng, 32)])
    ws = np.concatenate([ws, _unit_points(rng, 32)])
    keep = np.abs(1 - np.conj(ws) * zs) > 1e-6
    for wv, zv in zip(ws[keep], zs[keep]):
        quotient = cd_kernel(b, n, wv, zv)
        direct = complex(kernel_direct(b, n, wv, zv))
        scale = math.sqrt(float(np.sum(np.abs(phi_table(b, n, wv)) ** 2) * np.sum(np.abs(phi_table(b, n, zv)) ** 2)))
        ck["cd_consistency"].update(abs(quotient - direct) / scale)

    ns = find_nodes(b, n, w)
    nodes, weights = ns.nodes, ns.weights

    pw, psw = phi_pair(b, n + 1, w)
    scale = abs(pw) ** 2 + abs(psw) ** 2
    ck["node_zero_residual"].update(np.max(np.abs(para_eval(b, n, w, nodes))) / scale)
    ck["node_modulus"].update(np.max(np.abs(np.abs(nodes) - 1)))
    ck["w_is_node"].update(0.0 if np.any(nodes == ns.w) else 1.0)

    table = phi_table(b, n, nodes)
    kmat = np.conj(table).T @ table  # kmat[j, m] = K_n(zeta_j, zeta_m)
    diag = np.sqrt(ns.kernel_diags)
    off = np.abs(kmat) / np.outer(diag, diag)
    np.fill_diagonal(off, 0.0)
    ck["offdiag_kernel"].update(np.max(off))

    j_list = range(n + 1) if n <= 32 else rng.choice(n + 1, 8, replace=False)
    for j in j_list:
        other = find_nodes(b, n, nodes[j])
        diff = np.abs(np.angle(np.exp(1j * (other.angles - ns.angles))))
        ck["node_set_symmetry"].update(np.max(diff))

    k = np.arange(-n, n + 1)
    laurent = np.exp(1j * np.outer(k, ns.angles)) @ weights
    expected = np.concatenate([cvals[n:0:-1], np.conj(cvals[: n + 1])])
    ck["laurent_exactness"].update(np.max(np.abs(laurent - expected)) / c0)
    ck["mass_identity"].update(abs(np.sum(weights) - c0) / c0)
    ck["min_weight"].update(np.min(weights))
    gaps = np.diff(np.concatenate([ns.angles, [ns.angles[0] + 2 * math.pi]]))
    ck["min_node_gap"].update(np.min(gaps))

    # node identities in double precision (informational: ill-conditioned off the support)
    delta = np.array([fundamental_eval(ns, b, j, nodes) for j in range(n + 1)])
    ck["fundamental_delta[double]"].update(np.max(np.abs(delta - np.eye(n + 1))))
    zr = _unit_points(rng, 50)
    unity = sum(fundamental_eval(ns, b, j, zr) for j in range(n + 1))
    ck["partition_of_unity[double]"].update(np.max(np.abs(unity - 1)))

    # ||l_j||_2^2 against mu, each should equal weights[j]
    grid = phi_table(b, n, z)
    ell = (np.conj(table).T @ grid) / ns.kernel_diags[:, None]
    ell_sq = np.abs(ell) ** 2 @ wq
    ck["fundamental_norms"].update(np.max(np.abs(ell_sq - weights)) / c0)
    ck["fundamental_mass"].update(abs(np.sum(ell_sq) - c0) / c0)

    zp = _unit_points(rng, 64)
    for f in CATALOG.values():
        lag = interpolate(ns, b, f)
        values = lag(z)
        direct_sq = float(np.sum(wq * np.abs(values) ** 2))
        parseval_sq = lag.parseval_norm() ** 2
        ck["parseval"].update(abs(direct_sq - parseval_sq) / max(parseval_sq, 1e-300))
        bound = math.sqrt(c0) * float(np.max(np.abs(lag.samples)))
        ck["boundedness"].update(max(0.0, lag.parseval_norm() / bound - 1))
        ck["boundedness_sup"].update(max(0.0, lag.parseval_norm() / (math.sqrt(c0) * f.sup_norm) - 1))
        again = interpolate(ns, b, lag)
        ref = lag(zp)
        ck["projection[double]"].update(np.max(np.abs(again(zp) - ref)) / (1 + np.max(np.abs(ref))))

    ext = node_identity_residuals(b, ns, np.concatenate([zr, zp]),
                                  [f(nodes) for f in CATALOG.values()])
    for name in ("fundamental_delta", "partition_of_unity", "projection"):
        ck[name].update(ext[name])
    ck["working_digits"].update(ext["dps"])


def run_verify(measure: str | Measure, n_max: int, seed: int) -> VerifyReport:
    """Evaluate every invariant for n in {1, 2, 4, ..., n_max}; report max residuals."""
    if not 1 <= n_max <= MAX_NMAX:
        raise ValueError(f"n_max must lie in 1..{MAX_NMAX}")
    m = parse_measure_spec(measure) if isinstance(measure, str) else measure
    rng = np.random.default_rng(seed)
    n_values = _degrees(n_max)
    report = VerifyReport(m.label, n_values, seed)
    _register(
        report,
        Check("orthonormality", 1e-8),
        Check("reproducing_kernel", 1e-8),
        Check("modulus_symmetry", 1e-12),
        Check("cd_consistency", 1e-10),
        Check("kappa_monotone", 0.0),
        Check("node_modulus", 1e-12),
        Check("node_zero_residual", 1e-9),
        Check("w_is_node", 0.0),
        Check("offdiag_kernel", 1e-8),
        Check("node_set_symmetry", 1e-9),
        Check("laurent_exactness", 1e-8),
        Check("mass_identity", 1e-10),
        Check("min_weight", 0.0, lower_bound=True),
        Check("min_node_gap", 1e-10, lower_bound=True),
        Check("fundamental_delta", 1e-9),
        Check("partition_of_unity", 1e-9),
        Check("fundamental_norms", 1e-8),
        Check("fundamental_mass", 1e-8),
        Check("parseval", 1e-8),
        Check("boundedness", 1e-8),
        Check("boundedness_sup", 1e-8),
        Check("projection", 1e-8),
        Check("fundamental_delta[double]", None),
        Check("partition_of_unity[double]", None),
        Check("projection[double]", None),
        Check("working_digits", None),
    )
    b = build_basis(m, n_max + 1)
    c0 = m.total_mass
    cvals = moments(m, n_max).values
    _opuc_checks(report, m, b, rng, c0, error_resolution(SMALL_DEGREE))
    for n in n_values:
        _degree_checks(report, m, b, n, rng, c0, cvals)
    return report
