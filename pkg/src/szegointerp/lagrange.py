"""Lagrange interpolation at the zeros of para-orthogonal polynomials."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .measure import DEFAULT_RESOLUTION, Measure, lp_norm
from .opuc import OpucBasis, cd_kernel, phi_table
from .paraorth import NodeSystem


class ExponentOutsideTheory(UserWarning):
    """Mean convergence is only established for 0 < p <= 2."""


def fundamental_eval(ns: NodeSystem, b: OpucBasis, j: int, z):
    """Fundamental polynomial ``l_j(z) = K_n(zeta_j, z) / K_n(zeta_j, zeta_j)``.

    The kernel is taken with the node in its first (conjugated) slot so
    that ``l_j`` is a polynomial in ``z``.
    """
    if not 0 <= j <= ns.n:
        raise IndexError(f"node index {j} outside 0..{ns.n}")
    return cd_kernel(b, ns.n, ns.nodes[j], z) / ns.kernel_diags[j]


def error_resolution(n: int) -> int:
    return max(DEFAULT_RESOLUTION, 32 * (n + 1))


@dataclass(frozen=True)
class Interpolant:
    """``L_n(f)`` stored through its samples at the nodes.

    Internally ``L_n(f) = sum_k d_k phi_k`` with
    ``d_k = sum_j weights_j f(zeta_j) conj(phi_k(zeta_j))``, which is the
    kernel form regrouped so a batch of points costs one recursion sweep.
    """

    node_system: NodeSystem
    basis: OpucBasis
    samples: np.ndarray
    coefficients: np.ndarray

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        table = phi_table(self.basis, self.node_system.n, z)
        return np.tensordot(self.coefficients, table, axes=1)

    def parseval_norm(self) -> float:
        """``||L_n(f)||_2`` from the discrete weights alone."""
        return float(np.sqrt(np.sum(self.node_system.weights * np.abs(self.samples) ** 2)))

    def norm(self, m: Measure, p: float = 2.0, resolution: int | None = None) -> float:
        return lp_norm(m, self, p, resolution or error_resolution(self.node_system.n))


def interpolate(ns: NodeSystem, b: OpucBasis, f: Callable) -> Interpolant:
    samples = np.asarray(f(ns.nodes), dtype=complex)
    if samples.shape != ns.nodes.shape:
        raise ValueError("f must map the node array to an array of the same shape")
    table = phi_table(b, ns.n, ns.nodes)
    coefficients = np.conj(table) @ (ns.weights * samples)
    return Interpolant(ns, b, samples, coefficients)


def interp_error(ns: NodeSystem, b: OpucBasis, m: Measure, f: Callable, p: float,
                 resolution: int | None = None, breakpoints: Sequence[float] = (),
                 interpolant: Interpolant | None = None) -> float:
    """``||f - L_n(f)||_p`` against ``m``.

    ``breakpoints`` lists angles where ``f`` has kinks, so the quadrature can
    split there.  Exponents above 2 are computed but draw an
    ``ExponentOutsideTheory`` warning.
    """
    if p > 2:
        warnings.warn(f"p = {p} lies outside (0, 2]", ExponentOutsideTheory, stacklevel=2)
    interpolant = interpolant or interpolate(ns, b, f)
    resolution = resolution or error_resolution(ns.n)
    return lp_norm(m, lambda z: f(z) - interpolant(z), p, resolution, breakpoints)
