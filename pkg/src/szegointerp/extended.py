"""Multiprecision evaluation of a double-precision basis and node system.

Off the support of the measure ``|phi_n|`` grows geometrically, and the
node identities (``l_j(zeta_k) = delta_jk``, partition of unity) become
ill-conditioned there: a node rounded to double precision already moves
``l_j`` by about ``eps * |phi_{n+1}|``.  This module treats the double
Verblunsky coefficients as exact, refines the nodes with mpmath and
evaluates kernels at a working precision chosen from that growth.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np

from .opuc import OpucBasis, phi_pair
from .paraorth import NodeSystem


def digits_needed(b: OpucBasis, n: int, grid: int = 2048) -> int:
    """Working precision covering ``log10 max |phi_{n+1}|`` on the circle, twice over."""
    z = np.exp(2j * np.pi * np.arange(grid) / grid)
    growth = float(np.max(np.abs(phi_pair(b, n + 1, z)[0])))
    return 30 + 2 * max(0, math.ceil(math.log10(max(growth, 1.0))))


class ExtendedBasis:
    """The recursion of ``b`` in mpmath arithmetic (use inside ``mpmath.workdps``)."""

    def __init__(self, b: OpucBasis):
        self.alphas = [mpmath.mpc(complex(a)) for a in b.alphas]
        self.rhos = [mpmath.sqrt(1 - abs(a) ** 2) for a in self.alphas]
        self.kappa0 = 1 / mpmath.sqrt(mpmath.mpf(float(b.monic_norms_sq[0])))

    def pair(self, n: int, z):
        phi = star = self.kappa0
        for alpha, rho in zip(self.alphas[:n], self.rhos[:n]):
            phi, star = (z * phi - alpha.conjugate() * star) / rho, (star - alpha * z * phi) / rho
        return phi, star

    def column(self, n: int, z) -> list:
        """``[phi_0(z), ..., phi_n(z)]``."""
        phi = star = self.kappa0
        out = [phi]
        for alpha, rho in zip(self.alphas[:n], self.rhos[:n]):
            phi, star = (z * phi - alpha.conjugate() * star) / rho, (star - alpha * z * phi) / rho
            out.append(phi)
        return out


def refine_nodes(eb: ExtendedBasis, ns: NodeSystem) -> list:
    """Node angles of ``ns`` polished to the ambient mpmath precision.

    The generating point keeps its (exact binary) angle; every other angle
    is re-solved on the real phase function inside a 1e-11 bracket around
    its double-precision value.
    """
    n = ns.n
    theta_w = mpmath.mpf(float(np.angle(ns.w)))
    w = mpmath.expj(theta_w)
    pw, sw = eb.pair(n + 1, w)
    cw, csw = pw.conjugate(), sw.conjugate()
    half = mpmath.mpf(n + 1) / 2

    def rotated(theta):
        p, s = eb.pair(n + 1, mpmath.expj(theta))
        return mpmath.expj(-half * theta) * (csw * s - cw * p)

    bracket = mpmath.mpf("1e-11")
    angles = []
    for j, theta0 in enumerate(ns.angles):
        if ns.nodes[j] == ns.w:
            angles.append(theta_w)
            continue
        t0 = mpmath.mpf(float(theta0))
        lo, hi = rotated(t0 - bracket), rotated(t0 + bracket)
        ref = hi if abs(hi) > abs(lo) else lo
        sigma = ref.conjugate() / abs(ref) ** 2

        def h(theta):
            return (sigma * rotated(theta)).real

        if h(t0 - bracket) * h(t0 + bracket) > 0:
            raise ArithmeticError(f"node {j} is not isolated within {float(bracket):g} of its double value")
        root = mpmath.findroot(h, (t0 - bracket, t0 + bracket), solver="anderson", verify=False)
        if abs(h(root)) > mpmath.mpf(10) ** (-mpmath.mp.dps // 2):
            raise ArithmeticError(f"refinement of node {j} did not converge")
        angles.append(root)
    return angles


def kernel_matrix(eb: ExtendedBasis, n: int, left: list, right: list) -> list:
    """``[[K_n(a, z) for z in right] for a in left]`` by direct summation."""
    cols_l = [[x.conjugate() for x in eb.column(n, a)] for a in left]
    cols_r = [eb.column(n, z) for z in right]
    return [[mpmath.fdot(cl, cr) for cr in cols_r] for cl in cols_l]


def node_identity_residuals(b: OpucBasis, ns: NodeSystem, points, samples_list,
                            dps: int | None = None) -> dict[str, float]:
    """Residuals of the delta property, partition of unity and projection.

    ``points`` are unimodular test points; each entry of ``samples_list``
    is a vector of data at the nodes whose interpolant is re-interpolated
    for the projection check.
    """
    dps = dps or digits_needed(b, ns.n)
    n = ns.n
    with mpmath.workdps(dps):
        eb = ExtendedBasis(b)
        nodes = [mpmath.expj(t) for t in refine_nodes(eb, ns)]
        pts = [mpmath.mpc(complex(z)) for z in points]
        kmat = kernel_matrix(eb, n, nodes, nodes + pts)
        diag = [kmat[j][j] for j in range(n + 1)]
        # ell[j][k] = l_j(x_k) = K_n(zeta_j, x_k) / K_n(zeta_j, zeta_j)
        ell = [[v / diag[j] for v in row] for j, row in enumerate(kmat)]
        m = n + 1
        delta = max(abs(ell[j][k] - (1 if j == k else 0)) for j in range(m) for k in range(m))
        unity = max(abs(mpmath.fsum(ell[j][k] for j in range(m)) - 1) for k in range(m, m + len(pts)))
        projection = 0
        for samples in samples_list:
            s = [mpmath.mpc(complex(v)) for v in samples]
            at_nodes = [mpmath.fsum(s[j] * ell[j][k] for j in range(m)) for k in range(m)]
            at_points = [mpmath.fsum(s[j] * ell[j][k] for j in range(m)) for k in range(m, m + len(pts))]
            again = [mpmath.fsum(at_nodes[j] * ell[j][k] for j in range(m)) for k in range(m, m + len(pts))]
            scale = 1 + max(abs(v) for v in at_points)
            projection = max(projection, max(abs(a - v) for a, v in zip(again, at_points)) / scale)
        return {
            "fundamental_delta": float(delta),
            "partition_of_unity": float(unity),
            "projection": float(projection),
            "dps": dps,
        }
