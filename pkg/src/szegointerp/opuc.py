"""Orthonormal polynomials on the unit circle.

Conventions: monic polynomials satisfy ``Phi_{n+1} = z Phi_n - conj(a_n) Phi_n^*``
and ``Phi_{n+1}^* = Phi_n^* - a_n z Phi_n`` (Simon's sign), and
``phi_n = kappa_n Phi_n`` with ``kappa_n > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import mpmath
import numpy as np

from .measure import DEFAULT_RESOLUTION, Measure, MomentTable, moments, quadrature_rule

DEGENERACY_TOL = 1e-12
CD_SWITCH = 1e-8
DEFAULT_MAX_DEGREE = 256


class DegenerateMeasure(ArithmeticError):
    """A Verblunsky coefficient reached the unit circle (numerically finite support)."""

    def __init__(self, index: int, modulus: float):
        super().__init__(
            f"|alpha_{index}| = {modulus:.17g} >= 1 - {DEGENERACY_TOL:g}; "
            f"measure is numerically supported on at most {index + 1} points"
        )
        self.index = index
        self.modulus = modulus


@dataclass(frozen=True)
class OpucBasis:
    alphas: np.ndarray
    monic_norms_sq: np.ndarray
    kappas: np.ndarray

    def __post_init__(self):
        for name in ("alphas", "monic_norms_sq", "kappas"):
            arr = np.array(getattr(self, name))
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def max_degree(self) -> int:
        return len(self.alphas)

    @property
    def rhos(self) -> np.ndarray:
        return np.sqrt(1.0 - np.abs(self.alphas) ** 2)

    @classmethod
    def from_alphas(cls, alphas, c0: float) -> "OpucBasis":
        alphas = np.asarray(alphas, dtype=complex)
        if np.any(np.abs(alphas) >= 1) or not c0 > 0:
            raise ValueError("need |alpha_n| < 1 and c0 > 0")
        norms = c0 * np.concatenate([[1.0], np.cumprod(1.0 - np.abs(alphas) ** 2)])
        kappas = np.concatenate([[c0 ** -0.5], c0 ** -0.5 / np.cumprod(np.sqrt(1.0 - np.abs(alphas) ** 2))])
        return cls(alphas, norms, kappas)


class PhiPair(NamedTuple):
    value_phi: complex
    value_phi_star: complex
    degree: int
    point: complex


# -- construction --------------------------------------------------------------

def _levinson(c: np.ndarray, n_max: int) -> list[complex]:
    """Szegő recursion on monic coefficient vectors driven by moments.

    ``A`` holds the coefficients of Phi_n in increasing powers of z.
    """
    A = np.ones(1, dtype=complex)
    norm = c[0].real
    conj_c = np.conj(c[1 : n_max + 1])
    alphas = []
    for n in range(n_max):
        # <z Phi_n, Phi_n^*> = <z Phi_n, 1> = sum_j A_j conj(c_{j+1})
        alpha_bar = np.dot(A, conj_c[: n + 1]) / norm
        alpha = np.conj(alpha_bar)
        if abs(alpha) >= 1 - DEGENERACY_TOL:
            raise DegenerateMeasure(n, abs(alpha))
        alphas.append(complex(alpha))
        A = np.concatenate([[0], A]) - alpha_bar * np.concatenate([np.conj(A[::-1]), [0]])
        norm *= 1 - abs(alpha) ** 2
    return alphas


def _levinson_mp(c: list, n_max: int) -> list:
    """Same recursion as ``_levinson`` on mpmath numbers at the ambient precision."""
    A = [mpmath.mpc(1)]
    norm = c[0].real
    conj_c = [x.conjugate() for x in c[1 : n_max + 1]]
    alphas = []
    for n in range(n_max):
        alpha_bar = mpmath.fsum(a * b for a, b in zip(A, conj_c)) / norm
        alpha = alpha_bar.conjugate()
        if abs(alpha) >= 1 - DEGENERACY_TOL:
            raise DegenerateMeasure(n, float(abs(alpha)))
        alphas.append(alpha)
        rev = [x.conjugate() for x in reversed(A)]
        A = [x - alpha_bar * y for x, y in zip([0] + A, rev + [0])]
        norm *= 1 - abs(alpha) ** 2
    return alphas


def verblunsky_from_moments(t: MomentTable, max_degree: int | None = None) -> OpucBasis:
    """Verblunsky coefficients via the Levinson-type recursion, O(N^2).

    Runs in double precision, or in the table's mpmath precision when it
    carries extended-precision moments.
    """
    n_max = t.order if max_degree is None else max_degree
    if n_max > t.order:
        raise ValueError(f"degree {n_max} needs moments through order {n_max}, have {t.order}")
    c0 = t.values[0].real
    if not c0 > 0:
        raise ValueError("c_0 must be positive")
    if t.exact is None:
        alphas = _levinson(np.asarray(t.values, dtype=complex), n_max)
    else:
        with mpmath.workdps(t.dps):
            alphas = [complex(a) for a in _levinson_mp(list(t.exact), n_max)]
    return OpucBasis.from_alphas(alphas, float(c0))


def verblunsky_from_measure(m: Measure, max_degree: int,
                            resolution: int | None = None) -> OpucBasis:
    """Verblunsky coefficients by running the recursion on sampled values.

    The measure is replaced by a fine discretization (composite
    Gauss-Legendre per density piece plus exact atoms), and
    ``conj(alpha_n) = <z phi_n, phi_n^*> / ||phi_n^*||^2`` is evaluated on
    it with renormalization at every step.  Unlike the moment route this
    stays accurate at high degree for measures with gaps.
    """
    resolution = resolution or max(DEFAULT_RESOLUTION, 32 * (max_degree + 1))
    z, w = quadrature_rule(m, resolution)
    c0 = float(np.sum(w))
    phi = np.full(z.shape, c0 ** -0.5, dtype=complex)
    phi_star = phi.copy()
    alphas = []
    for n in range(max_degree):
        alpha_bar = np.sum(w * z * phi * np.conj(phi_star)) / np.sum(w * np.abs(phi_star) ** 2)
        alpha = complex(np.conj(alpha_bar))
        if abs(alpha) >= 1 - DEGENERACY_TOL:
            raise DegenerateMeasure(n, abs(alpha))
        alphas.append(alpha)
        phi, phi_star = z * phi - alpha_bar * phi_star, phi_star - alpha * z * phi
        scale = math.sqrt(float(np.sum(w * np.abs(phi) ** 2)))
        phi /= scale
        phi_star /= scale
    return OpucBasis.from_alphas(alphas, c0)


def build_basis(m: Measure, max_degree: int, method: str = "auto") -> OpucBasis:
    """Orthonormal basis of ``m`` through degree ``max_degree``.

    ``method``:
      ``"exact-moments"``  Levinson on closed-form moments with mpmath,
                           raising the working precision until two runs
                           agree to 1e-15;
      ``"moments"``        Levinson on double-precision moments;
      ``"discretized"``    recursion on a fine discretization of ``m``;
      ``"auto"``           exact moments when available, else discretized.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    if method == "auto":
        method = "exact-moments" if m.has_closed_moments else "discretized"
    if method == "moments":
        return verblunsky_from_moments(moments(m, max_degree))
    if method == "discretized":
        return verblunsky_from_measure(m, max_degree)
    if method != "exact-moments":
        raise ValueError(f"unknown method {method!r}")
    dps = 30 + max_degree
    prev = verblunsky_from_moments(moments(m, max_degree, dps=dps))
    while dps < 20000:
        dps *= 2
        cur = verblunsky_from_moments(moments(m, max_degree, dps=dps))
        if np.all(np.abs(cur.alphas - prev.alphas) <= 1e-15):
            return cur
        prev = cur
    raise ArithmeticError("extended-precision recursion did not settle")


# -- evaluation ----------------------------------------------------------------

def _check_degree(b: OpucBasis, n: int):
    if not 0 <= n <= b.max_degree:
        raise ValueError(f"degree {n} outside 0..{b.max_degree}")


def phi_pair(b: OpucBasis, n: int, z) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``(phi_n(z), phi_n^*(z))`` by the forward recursion."""
    _check_degree(b, n)
    z = np.asarray(z, dtype=complex)
    phi = np.full(z.shape, b.kappas[0], dtype=complex)
    phi_star = phi.copy()
    for alpha, rho in zip(b.alphas[:n], b.rhos[:n]):
        phi, phi_star = (z * phi - np.conj(alpha) * phi_star) / rho, (phi_star - alpha * z * phi) / rho
    return phi, phi_star


def phi_table(b: OpucBasis, n: int, z) -> np.ndarray:
    """Array of shape ``(n + 1,) + z.shape`` holding ``phi_0(z) .. phi_n(z)``."""
    _check_degree(b, n)
    z = np.asarray(z, dtype=complex)
    out = np.empty((n + 1,) + z.shape, dtype=complex)
    phi = np.full(z.shape, b.kappas[0], dtype=complex)
    phi_star = phi.copy()
    out[0] = phi
    for k in range(n):
        alpha, rho = b.alphas[k], b.rhos[k]
        phi, phi_star = (z * phi - np.conj(alpha) * phi_star) / rho, (phi_star - alpha * z * phi) / rho
        out[k + 1] = phi
    return out


def eval_phi(b: OpucBasis, n: int, z: complex) -> PhiPair:
    phi, phi_star = phi_pair(b, n, z)
    return PhiPair(complex(phi), complex(phi_star), n, complex(z))


def kernel_direct(b: OpucBasis, n: int, w, z) -> np.ndarray:
    """``K_n(w, z) = sum_j conj(phi_j(w)) phi_j(z)`` by direct summation.

    ``w`` and ``z`` broadcast against each other.
    """
    w, z = np.broadcast_arrays(np.asarray(w, dtype=complex), np.asarray(z, dtype=complex))
    return np.sum(np.conj(phi_table(b, n, w)) * phi_table(b, n, z), axis=0)


def _cd_numerator(b: OpucBasis, n: int, w: complex, z: np.ndarray) -> np.ndarray:
    """``-(conj(phi*(w)) phi*(z) - conj(phi(w)) phi(z)) / conj(w)`` divided by ``z - w``.

    Runs the recursion on the differences ``phi_k(z) - phi_k(w)`` so that
    the factor ``z - w`` shared by numerator and denominator never has to
    be recovered from a cancelling subtraction.
    """
    d = z - w
    phi_w = star_w = complex(b.kappas[0])
    diff = np.zeros(z.shape, dtype=complex)
    diff_star = np.zeros(z.shape, dtype=complex)
    for alpha, rho in zip(b.alphas[: n + 1], b.rhos[: n + 1]):
        # z phi_k(z) - w phi_k(w) = z diff + d phi_k(w)
        shift = z * diff + d * phi_w
        diff, diff_star = (shift - np.conj(alpha) * diff_star) / rho, (diff_star - alpha * shift) / rho
        phi_w, star_w = (w * phi_w - np.conj(alpha) * star_w) / rho, (star_w - alpha * w * phi_w) / rho
    numer = np.conj(star_w) * diff_star - np.conj(phi_w) * diff
    # 1 - conj(w) z = -conj(w) (z - w) on the circle
    return numer / (-np.conj(w) * d)


def cd_kernel(b: OpucBasis, n: int, w: complex, z):
    """Christoffel kernel ``K_n(w, z)`` for unimodular ``w``.

    Uses the Christoffel-Darboux quotient away from ``z = w`` and the direct
    sum where ``|1 - conj(w) z| <= 1e-8``.  Within ``1 / (n + 1)`` of ``w``
    the quotient is formed from differences ``phi_k(z) - phi_k(w)``, which
    keeps full relative accuracy as the denominator shrinks.  ``z`` may be
    an array.
    """
    if not 0 <= n < b.max_degree:
        raise ValueError(f"degree {n} needs phi_{n + 1}; basis stops at {b.max_degree}")
    scalar = np.ndim(z) == 0
    w = complex(w)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    denom = 1.0 - np.conj(w) * z
    gap = np.abs(denom)
    out = np.empty(z.shape, dtype=complex)
    plain = gap >= 1.0 / (n + 1)
    if np.any(plain):
        pw, psw = phi_pair(b, n + 1, w)
        pz, psz = phi_pair(b, n + 1, z[plain])
        out[plain] = (np.conj(psw) * psz - np.conj(pw) * pz) / denom[plain]
    near = ~plain & (gap > CD_SWITCH)
    if np.any(near):
        out[near] = _cd_numerator(b, n, w, z[near])
    direct = gap <= CD_SWITCH
    if np.any(direct):
        out[direct] = kernel_direct(b, n, w, z[direct])
    return complex(out[0]) if scalar else out


def kernel_diag(b: OpucBasis, n: int, w):
    """``K_n(w, w) = sum_j |phi_j(w)|^2``; vectorized over ``w``."""
    val = np.sum(np.abs(phi_table(b, n, w)) ** 2, axis=0)
    return float(val) if np.ndim(val) == 0 else val
