"""Test functions on the unit circle used by the experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

CONTINUOUS = "continuous"
DISK_ALGEBRA = "disk-algebra"

# sum_k z^k / (k + 1): positive coefficients, so the sup over T is the value at 1
_POLY7 = np.array([1.0 / (k + 1) for k in range(8)])


def _poly7(z):
    return np.polynomial.polynomial.polyval(z, _POLY7)


@dataclass(frozen=True)
class CatalogFunction:
    name: str
    func: Callable[[np.ndarray], np.ndarray]
    family: str
    sup_norm: float
    kinks: tuple[float, ...] = ()
    description: str = ""

    def __call__(self, z):
        return self.func(np.asarray(z, dtype=complex))


CATALOG: dict[str, CatalogFunction] = {
    f.name: f
    for f in (
        # 1/z equals conj(z) on the circle; conj avoids the division
        CatalogFunction("conj", np.conj, CONTINUOUS, 1.0, (), "1/z on T"),
        CatalogFunction("absim", lambda z: np.abs(z.imag).astype(complex), CONTINUOUS, 1.0,
                        (0.0, math.pi), "|Im z|"),
        CatalogFunction("dist1", lambda z: np.abs(z - 1).astype(complex), CONTINUOUS, 2.0,
                        (0.0,), "|z - 1|"),
        CatalogFunction("exp", np.exp, DISK_ALGEBRA, math.e, (), "exp(z)"),
        CatalogFunction("geom", lambda z: 1.0 / (2.0 - z), DISK_ALGEBRA, 1.0, (), "1/(2 - z)"),
        CatalogFunction("poly7", _poly7, DISK_ALGEBRA, float(_POLY7.sum()), (),
                        "sum_{k<=7} z^k/(k+1)"),
    )
}


def get_function(name: str) -> CatalogFunction:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown function {name!r}; choose from {', '.join(CATALOG)}") from None
