"""Para-orthogonal polynomials, their zeros, and Szegő quadrature."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measure import TWO_PI
from .opuc import OpucBasis, kernel_diag, phi_pair

BISECTION_TOL = 1e-13
NEWTON_STEP = 1e-7
SNAP_TOL = 1e-10
DEDUP_TOL = 1e-10
GRID_FACTOR = 8
MAX_GRID_FACTOR = 128


class NodeFindingFailure(RuntimeError):
    """The zero count of B_{n+1}(w, .) on the circle came out wrong."""


@dataclass(frozen=True)
class NodeSystem:
    """Zeros of ``B_{n+1}(w, .)`` with their Szegő weights, sorted by angle."""

    n: int
    w: complex
    nodes: np.ndarray
    angles: np.ndarray
    kernel_diags: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        for name in ("nodes", "angles", "kernel_diags", "weights"):
            getattr(self, name).flags.writeable = False

    @property
    def size(self) -> int:
        return self.n + 1

    @property
    def w_index(self) -> int:
        return int(np.flatnonzero(self.nodes == self.w)[0])


def _unit(w: complex) -> complex:
    w = complex(w)
    if not math.isclose(abs(w), 1.0, abs_tol=1e-12):
        raise ValueError(f"w must be unimodular, got |w| = {abs(w)!r}")
    return w / abs(w)


def para_eval(b: OpucBasis, n: int, w: complex, z):
    """``B_{n+1}(w, z) = conj(phi*_{n+1}(w)) phi*_{n+1}(z) - conj(phi_{n+1}(w)) phi_{n+1}(z)``."""
    w = _unit(w)
    pw, psw = phi_pair(b, n + 1, w)
    pz, psz = phi_pair(b, n + 1, z)
    val = np.conj(psw) * psz - np.conj(pw) * pz
    return complex(val) if np.ndim(val) == 0 else val


def _phase_function(b: OpucBasis, n: int, w: complex):
    """Real function of the angle sharing its zeros with ``B_{n+1}(w, e^{i theta})``.

    ``B_{n+1}(w, .)`` is self-inversive, so ``exp(-i (n+1) theta / 2) B``
    has constant phase on the circle; rotating that phase to the real axis
    leaves a real-analytic function.
    """
    pw, psw = phi_pair(b, n + 1, w)
    cw, csw = np.conj(pw), np.conj(psw)
    half = 0.5 * (n + 1)

    def rotated(theta):
        p, ps = phi_pair(b, n + 1, np.exp(1j * theta))
        return np.exp(-1j * half * theta) * (csw * ps - cw * p)

    return rotated


def _bisect(h, lo: np.ndarray, hi: np.ndarray, h_lo: np.ndarray) -> np.ndarray:
    while np.max(hi - lo) > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        h_mid = h(mid)
        left = np.signbit(h_mid) != np.signbit(h_lo)
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        h_lo = np.where(left, h_lo, h_mid)
    return 0.5 * (lo + hi)


def _newton_polish(h, theta: np.ndarray) -> np.ndarray:
    value = h(theta)
    slope = (h(theta + NEWTON_STEP) - h(theta - NEWTON_STEP)) / (2 * NEWTON_STEP)
    with np.errstate(divide="ignore", invalid="ignore"):
        step = np.where(slope != 0, value / slope, 0.0)
    candidate = theta - step
    # keep a step only if it stays inside the bisection bracket and helps
    ok = (np.abs(step) <= BISECTION_TOL) & (np.abs(h(candidate)) <= np.abs(value))
    return np.where(ok, candidate, theta)


def _circular_dedup(angles: np.ndarray) -> np.ndarray:
    angles = np.sort(np.mod(angles, TWO_PI))
    if angles.size == 0:
        return angles
    keep = np.concatenate([[True], np.diff(angles) > DEDUP_TOL])
    angles = angles[keep]
    if angles.size > 1 and angles[0] + TWO_PI - angles[-1] <= DEDUP_TOL:
        angles = angles[:-1]
    return angles


def _zeros_on_grid(h, period: float, points: int) -> np.ndarray:
    theta = period * np.arange(points) / points
    vals = h(theta)
    nxt = np.roll(vals, -1)
    # period is a full period of h, so the last interval wraps to the first point
    hi_theta = np.append(theta[1:], period)
    exact = vals == 0
    bracket = (np.signbit(vals) != np.signbit(nxt)) & ~exact & (nxt != 0)
    roots = _bisect(h, theta[bracket], hi_theta[bracket], vals[bracket])
    roots = _newton_polish(h, roots)
    return np.concatenate([theta[exact], roots])


def find_nodes(b: OpucBasis, n: int, w: complex) -> NodeSystem:
    """Locate the ``n + 1`` zeros of ``B_{n+1}(w, .)`` on the unit circle.

    The sign changes of the real phase function are bracketed on a uniform
    grid of ``8 (n + 1)`` points per turn (doubled up to ``128 (n + 1)`` if
    the zero count is off), bisected to 1e-13 and polished by one Newton
    step.  The computed zero nearest ``w`` is replaced by ``w`` itself.
    """
    if n < 0 or n + 1 > b.max_degree:
        raise ValueError(f"need 0 <= n and n + 1 <= {b.max_degree}, got n = {n}")
    w = _unit(w)
    rotated = _phase_function(b, n, w)
    odd = (n + 1) % 2 == 1
    period = 2 * TWO_PI if odd else TWO_PI
    turns = 2 if odd else 1

    probe = rotated(TWO_PI * np.arange(GRID_FACTOR * (n + 1)) / (GRID_FACTOR * (n + 1)))
    biggest = probe[np.argmax(np.abs(probe))]
    if biggest == 0:
        raise NodeFindingFailure("para-orthogonal polynomial vanishes on the whole probe grid")
    sigma = np.conj(biggest) / abs(biggest)

    def h(theta):
        return (sigma * rotated(theta)).real

    factor = GRID_FACTOR
    while True:
        angles = _circular_dedup(_zeros_on_grid(h, period, turns * factor * (n + 1)))
        if angles.size == n + 1:
            break
        if factor >= MAX_GRID_FACTOR:
            raise NodeFindingFailure(
                f"found {angles.size} zeros of B_{n + 1}(w, .) instead of {n + 1} "
                f"at grid factor {factor}"
            )
        factor *= 2

    theta_w = math.atan2(w.imag, w.real) % TWO_PI
    dist = np.abs(np.angle(np.exp(1j * (angles - theta_w))))
    k = int(np.argmin(dist))
    if dist[k] > SNAP_TOL:
        raise NodeFindingFailure(f"no zero within {SNAP_TOL:g} of w (closest {dist[k]:.3g})")
    angles[k] = theta_w
    order = np.argsort(angles)
    angles = angles[order]
    nodes = np.exp(1j * angles)
    nodes[np.flatnonzero(order == k)[0]] = w
    diags = np.atleast_1d(kernel_diag(b, n, nodes))
    return NodeSystem(n, w, nodes, angles, diags, 1.0 / diags)


def szego_quadrature(ns: NodeSystem, f) -> complex:
    """``Q_n(f) = sum_j f(zeta_j) / K_n(zeta_j, zeta_j)``."""
    return complex(np.sum(ns.weights * np.asarray(f(ns.nodes))))
