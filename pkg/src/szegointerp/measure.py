"""Finite positive measures on the unit circle.

A measure is stored as an absolutely continuous part, given by density
pieces against the normalized arc length ``dtheta / (2 pi)``, plus a finite
list of point masses.  With this normalization the Lebesgue measure has
total mass one and the moments ``c_k`` are plain Fourier coefficients.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import mpmath
import numpy as np

TWO_PI = 2.0 * math.pi

#: Gauss-Legendre panel order used on non-periodic density pieces.
PANEL_ORDER = 16

DEFAULT_RESOLUTION = 4096
MOMENT_TOL = 1e-12
MAX_RESOLUTION = 2**20


class MeasureError(ValueError):
    """Invalid measure parameters."""


class QuadratureError(RuntimeError):
    """Numerical moments failed to settle before the resolution cap."""


class SzegoClass(str, enum.Enum):
    SZEGO = "szego"
    NON_SZEGO = "non_szego"
    UNKNOWN = "unknown"


def _one(theta: np.ndarray) -> np.ndarray:
    return np.ones_like(theta, dtype=float)


@dataclass(frozen=True)
class DensityPiece:
    """Smooth density on the closed angular interval ``[start, stop]``.

    ``func`` receives angles inside the interval (not reduced mod 2 pi).
    A ``periodic`` piece spans a full turn and is smooth across its ends,
    which lets it use the trapezoid rule.
    """

    start: float
    stop: float
    func: Callable[[np.ndarray], np.ndarray] = _one
    periodic: bool = False

    def __post_init__(self):
        width = self.stop - self.start
        if not 0.0 < width <= TWO_PI + 1e-15:
            raise MeasureError(f"piece width must lie in (0, 2pi], got {width!r}")
        if self.periodic and not math.isclose(width, TWO_PI, rel_tol=0, abs_tol=1e-14):
            raise MeasureError("a periodic piece must span a full turn")

    @property
    def width(self) -> float:
        return self.stop - self.start

    def contains(self, theta: np.ndarray) -> np.ndarray:
        if self.periodic:
            return np.ones(np.shape(theta), dtype=bool)
        offset = np.mod(np.asarray(theta, dtype=float) - self.start, TWO_PI)
        return offset <= self.width

    def lift(self, theta: np.ndarray) -> np.ndarray:
        """Map angles to their representative inside the piece."""
        return self.start + np.mod(np.asarray(theta, dtype=float) - self.start, TWO_PI)


@dataclass(frozen=True)
class Measure:
    pieces: tuple[DensityPiece, ...] = ()
    atoms: tuple[tuple[float, float], ...] = ()
    szego_class: SzegoClass = SzegoClass.UNKNOWN
    label: str = "custom"
    # Half width of the support arc for the built-in bases; ``None`` marks a
    # custom density without closed-form moments.
    arc_half_width: float | None = field(default=None, compare=False)

    def __post_init__(self):
        atoms = []
        for theta, mass in self.atoms:
            if not mass > 0 or not math.isfinite(mass):
                raise MeasureError(f"atom mass must be positive and finite, got {mass!r}")
            atoms.append((float(np.mod(theta, TWO_PI)), float(mass)))
        angles = sorted(t for t, _ in atoms)
        for a, b in zip(angles, angles[1:]):
            if b - a < 1e-14:
                raise MeasureError(f"duplicate atom angle {a!r}")
        if len(angles) > 1 and angles[0] + TWO_PI - angles[-1] < 1e-14:
            raise MeasureError(f"duplicate atom angle {angles[0]!r}")
        object.__setattr__(self, "atoms", tuple(atoms))
        object.__setattr__(self, "szego_class", SzegoClass(self.szego_class))
        for piece in self.pieces:
            sample = piece.func(np.linspace(piece.start, piece.stop, 257))
            if np.any(np.asarray(sample) < 0) or not np.all(np.isfinite(sample)):
                raise MeasureError("density must be finite and nonnegative")
        if not self.pieces and not self.atoms:
            raise MeasureError("measure has zero total mass")

    def density(self, theta) -> np.ndarray:
        """Evaluate the density (w.r.t. ``dtheta / 2pi``) at arbitrary angles."""
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape)
        for piece in self.pieces:
            inside = piece.contains(theta)
            if np.any(inside):
                out[inside] += piece.func(piece.lift(theta[inside]))
        return out

    @property
    def has_closed_moments(self) -> bool:
        return self.arc_half_width is not None

    @property
    def breakpoints(self) -> tuple[float, ...]:
        pts = set()
        for piece in self.pieces:
            if not piece.periodic:
                pts.update({float(np.mod(piece.start, TWO_PI)), float(np.mod(piece.stop, TWO_PI))})
        return tuple(sorted(pts))

    def with_atoms(self, atoms: Iterable[tuple[float, float]]) -> "Measure":
        atoms = list(atoms)
        label = self.label + "+atoms:" + ",".join(f"{t!r}:{m!r}" for t, m in atoms)
        return Measure(self.pieces, self.atoms + tuple(atoms), self.szego_class, label,
                       self.arc_half_width)

    @property
    def total_mass(self) -> float:
        return float(moments(self, 0).values[0].real)


def lebesgue() -> Measure:
    piece = DensityPiece(0.0, TWO_PI, _one, periodic=True)
    return Measure((piece,), (), SzegoClass.SZEGO, "lebesgue", arc_half_width=math.pi)


def arc(half_width: float) -> Measure:
    """Normalized arc length restricted to ``[-a, a]``."""
    a = float(half_width)
    if not 0.0 < a <= math.pi:
        raise MeasureError(f"arc half width must lie in (0, pi], got {half_width!r}")
    if a == math.pi:
        piece = DensityPiece(-math.pi, math.pi, _one, periodic=True)
        return Measure((piece,), (), SzegoClass.SZEGO, f"arc:{a!r}", arc_half_width=a)
    piece = DensityPiece(-a, a, _one)
    return Measure((piece,), (), SzegoClass.NON_SZEGO, f"arc:{a!r}", arc_half_width=a)


def make_builtin_measure(kind: str, half_width: float | None = None,
                         atoms: Sequence[tuple[float, float]] = ()) -> Measure:
    """Build ``lebesgue`` or ``arc`` (with ``half_width``), optionally plus atoms.

    The Szegő class flag is inherited from the base density; atoms do not
    change whether ``log mu'`` is integrable.
    """
    if kind == "lebesgue":
        if half_width is not None:
            raise MeasureError("lebesgue takes no half width")
        base = lebesgue()
    elif kind == "arc":
        if half_width is None:
            raise MeasureError("arc needs a half width")
        base = arc(half_width)
    else:
        raise MeasureError(f"unknown measure kind {kind!r}")
    return base.with_atoms(atoms) if atoms else base


# -- moments -----------------------------------------------------------------

@dataclass(frozen=True)
class MomentTable:
    """Trigonometric moments ``c_k = int exp(-i k theta) dmu`` for k = 0..order.

    ``exact`` optionally carries the same moments as mpmath numbers at
    ``dps`` decimal digits, for recursions that need more than double
    precision.
    """

    values: np.ndarray
    exact: tuple | None = None
    dps: int | None = None

    @property
    def order(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k: int) -> complex:
        if k < 0:
            return complex(np.conj(self.values[-k]))
        return complex(self.values[k])

    def toeplitz(self, size: int | None = None) -> np.ndarray:
        """The matrix ``[c_{j-k}]``; ``size`` defaults to ``order + 1``."""
        size = self.order + 1 if size is None else size
        idx = np.arange(size)
        diff = idx[:, None] - idx[None, :]
        vals = self.values[np.abs(diff)]
        return np.where(diff >= 0, vals, np.conj(vals))


def _closed_density_moments(a: float, order: int) -> np.ndarray:
    c = np.zeros(order + 1, dtype=complex)
    if a == math.pi:
        c[0] = 1.0
        return c
    k = np.arange(1, order + 1)
    c[0] = a / math.pi
    c[1:] = np.sin(k * a) / (math.pi * k)
    return c


def _closed_density_moments_mp(a: float, order: int) -> list:
    a = mpmath.mpf(a)
    if a == mpmath.mpf(math.pi):
        return [mpmath.mpc(1)] + [mpmath.mpc(0)] * order
    return [mpmath.mpc(a / mpmath.pi)] + [
        mpmath.mpc(mpmath.sin(k * a) / (mpmath.pi * k)) for k in range(1, order + 1)
    ]


def _atom_moments(atoms, order: int) -> np.ndarray:
    c = np.zeros(order + 1, dtype=complex)
    k = np.arange(order + 1)
    for theta, mass in atoms:
        c += mass * np.exp(-1j * k * theta)
    return c


def moments(m: Measure, order: int, resolution: int | None = None,
            dps: int | None = None) -> MomentTable:
    """Moments ``c_0..c_order`` of ``m``.

    Built-in densities use closed forms unless ``resolution`` is given, in
    which case the density part is integrated numerically at exactly that
    resolution.  Custom densities are integrated with grid doubling from
    the default resolution until two estimates agree to 1e-12.

    With ``dps`` set (closed forms only) the table also carries mpmath
    values at that many digits.
    """
    if order < 0:
        raise ValueError("moment order must be nonnegative")
    if resolution is not None:
        dens = _numeric_density_moments(m, order, resolution)
    elif m.has_closed_moments:
        dens = _closed_density_moments(m.arc_half_width, order)
    else:
        dens = _converged_density_moments(m, order)
    values = dens + _atom_moments(m.atoms, order)
    if dps is None:
        return MomentTable(values)
    if not m.has_closed_moments:
        raise ValueError("extended-precision moments need a closed-form density")
    with mpmath.workdps(dps):
        exact = _closed_density_moments_mp(m.arc_half_width, order)
        for theta, mass in m.atoms:
            t, ms = mpmath.mpf(theta), mpmath.mpf(mass)
            for k in range(order + 1):
                exact[k] += ms * mpmath.expj(-k * t)
    return MomentTable(values, tuple(exact), dps)


def _numeric_density_moments(m: Measure, order: int, resolution: int) -> np.ndarray:
    k = np.arange(order + 1)
    c = np.zeros(order + 1, dtype=complex)
    for piece in m.pieces:
        theta, weights = piece_rule(piece, resolution)
        dens = piece.func(theta) * weights
        c += np.exp(-1j * np.outer(k, theta)) @ dens
    return c


def _converged_density_moments(m: Measure, order: int) -> np.ndarray:
    res = DEFAULT_RESOLUTION
    prev = _numeric_density_moments(m, order, res)
    while res < MAX_RESOLUTION:
        res *= 2
        cur = _numeric_density_moments(m, order, res)
        if np.all(np.abs(cur - prev) <= MOMENT_TOL * (1 + np.abs(cur))):
            return cur
        prev = cur
    raise QuadratureError(f"moments did not settle by resolution {MAX_RESOLUTION}")


# -- quadrature on pieces ------------------------------------------------------

@lru_cache(maxsize=None)
def _gauss_panel(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def _panel_rule(start: float, stop: float, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    panels = max(1, -(-resolution // PANEL_ORDER))
    x, w = _gauss_panel(PANEL_ORDER)
    edges = np.linspace(start, stop, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    theta = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel() / TWO_PI
    return theta, weights


def piece_rule(piece: DensityPiece, resolution: int,
               breakpoints: Sequence[float] = ()) -> tuple[np.ndarray, np.ndarray]:
    """Nodes (angles) and weights integrating against ``dtheta / 2pi`` on a piece.

    Periodic pieces without interior breakpoints use the trapezoid rule;
    everything else is split at the breakpoints and integrated with
    composite Gauss-Legendre panels, ``resolution`` nodes per sub-interval.
    """
    cuts = sorted({float(t) for t in (piece.lift(np.asarray(breakpoints, float))
                                        if len(breakpoints) else ())})
    if piece.periodic:
        if not cuts:
            theta = piece.start + TWO_PI * np.arange(resolution) / resolution
            return theta, np.full(resolution, 1.0 / resolution)
        edges = cuts + [cuts[0] + TWO_PI]
    else:
        inner = [t for t in cuts if piece.start < t < piece.stop]
        edges = [piece.start] + inner + [piece.stop]
    nodes, weights = zip(*(_panel_rule(a, b, resolution) for a, b in zip(edges, edges[1:]) if b > a))
    return np.concatenate(nodes), np.concatenate(weights)


def quadrature_rule(m: Measure, resolution: int = DEFAULT_RESOLUTION,
                    breakpoints: Sequence[float] = ()) -> tuple[np.ndarray, np.ndarray]:
    """Unimodular nodes and positive weights discretizing ``m``.

    Atoms enter with their exact masses.  ``breakpoints`` adds angles where
    the integrand (not the density) may be non-smooth.
    """
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    thetas, weights = [], []
    for piece in m.pieces:
        theta, w = piece_rule(piece, resolution, breakpoints)
        thetas.append(theta)
        weights.append(w * piece.func(theta))
    if m.atoms:
        thetas.append(np.array([t for t, _ in m.atoms]))
        weights.append(np.array([w for _, w in m.atoms]))
    theta = np.concatenate(thetas)
    return np.exp(1j * theta), np.concatenate(weights)


def integrate(m: Measure, g: Callable, resolution: int = DEFAULT_RESOLUTION,
              breakpoints: Sequence[float] = ()) -> complex:
    """Integral of ``g`` against ``m``; ``g`` maps an array of points on T to values."""
    z, w = quadrature_rule(m, resolution, breakpoints)
    return complex(np.sum(w * np.asarray(g(z))))


def lp_norm(m: Measure, g: Callable, p: float, resolution: int = DEFAULT_RESOLUTION,
            breakpoints: Sequence[float] = ()) -> float:
    """``(int |g|^p dmu)^(1/p)``; also defined (as a quasi-norm) for 0 < p < 1."""
    if not p > 0:
        raise ValueError(f"exponent must be positive, got {p!r}")
    total = integrate(m, lambda z: np.abs(g(z)) ** p, resolution, breakpoints).real
    return max(total, 0.0) ** (1.0 / p)
