"""Lagrange interpolation and Szegő quadrature at zeros of para-orthogonal polynomials."""

__version__ = "0.1.0"

from .lagrange import Interpolant, fundamental_eval, interp_error, interpolate
from .measure import (
    Measure,
    MeasureError,
    MomentTable,
    SzegoClass,
    arc,
    integrate,
    lebesgue,
    lp_norm,
    make_builtin_measure,
    moments,
)
from .opuc import (
    DegenerateMeasure,
    OpucBasis,
    PhiPair,
    build_basis,
    cd_kernel,
    eval_phi,
    kernel_diag,
    verblunsky_from_measure,
    verblunsky_from_moments,
)
from .paraorth import NodeFindingFailure, NodeSystem, find_nodes, para_eval, szego_quadrature
