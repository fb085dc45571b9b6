"""Independent reference computations used by the tests.

Nothing here calls the recursions under test: orthogonal polynomials come
from Gram-Schmidt on the moment Gram matrix in mpmath, and node sets from
polynomial rootfinding on explicit coefficient vectors.
"""

import mpmath
import numpy as np


def _moment(c, k):
    return c[k] if k >= 0 else mpmath.conj(c[-k])


def _inner(c, a, b):
    # <sum a_j z^j, sum b_k z^k> = sum a_j conj(b_k) c_{k-j}
    return mpmath.fsum(a[j] * mpmath.conj(b[k]) * _moment(c, k - j)
                       for j in range(len(a)) for k in range(len(b)))


def gram_schmidt(c, n_max):
    """Monic orthogonal coefficient vectors (ascending) and squared norms, degree 0..n_max."""
    monic, norms = [], []
    for n in range(n_max + 1):
        v = [mpmath.mpc(0)] * n + [mpmath.mpc(1)]
        for p, nrm in zip(monic, norms):
            proj = _inner(c, v, p) / nrm
            v = [vi - proj * (p[i] if i < len(p) else 0) for i, vi in enumerate(v)]
        monic.append(v)
        norms.append(mpmath.re(_inner(c, v, v)))
    return monic, norms


def gs_alphas(c, n_max):
    """Verblunsky coefficients from Phi_{n+1}(0) = -conj(alpha_n)."""
    monic, _ = gram_schmidt(c, n_max + 1)
    return [complex(-mpmath.conj(monic[n + 1][0])) for n in range(n_max + 1)]


def gs_orthonormal(c, n_max):
    monic, norms = gram_schmidt(c, n_max)
    return [[x / mpmath.sqrt(nrm) for x in p] for p, nrm in zip(monic, norms)]


def poly_eval(coeffs, z):
    return mpmath.polyval(list(reversed(coeffs)), z)


def reversed_poly(coeffs):
    """Coefficients of z^n conj(p(1/conj z))."""
    return [mpmath.conj(x) for x in reversed(coeffs)]


def companion_nodes(c, n, w, dps=60):
    """Zeros of conj(phi*(w)) phi*(z) - conj(phi(w)) phi(z), degree n + 1, sorted by angle."""
    with mpmath.workdps(dps):
        phi = gs_orthonormal(c, n + 1)[-1]
        star = reversed_poly(phi)
        w = mpmath.mpc(w)
        a, bcoef = mpmath.conj(poly_eval(star, w)), mpmath.conj(poly_eval(phi, w))
        coeffs = [a * s - bcoef * p for s, p in zip(star, phi)]
        roots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=400, extraprec=4 * dps)
        angles = np.sort(np.array([float(mpmath.arg(r)) for r in roots]) % (2 * np.pi))
    return angles


def circular_match(a, b):
    """Largest angular distance from a point of one set to the nearest point of the other."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    d = np.abs(np.angle(np.exp(1j * (a[:, None] - b[None, :]))))
    return float(max(d.min(axis=1).max(), d.min(axis=0).max())) if len(a) == len(b) else np.inf


def brute_force_norm(g, m_density, a, p, points=200000):
    """L^p norm against density on [-a, a] (normalized by 2 pi) by midpoint sums."""
    theta = -a + (np.arange(points) + 0.5) * (2 * a / points)
    vals = np.abs(g(np.exp(1j * theta))) ** p * m_density(theta)
    return float((np.sum(vals) * (2 * a / points) / (2 * np.pi)) ** (1 / p))
