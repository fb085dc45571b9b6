import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sp_integrate

from szegointerp.measure import (
    DensityPiece,
    Measure,
    MeasureError,
    SzegoClass,
    arc,
    integrate,
    lebesgue,
    lp_norm,
    make_builtin_measure,
    moments,
    quadrature_rule,
)


def test_lebesgue_is_flat_and_szego():
    m = lebesgue()
    assert np.allclose(m.density(np.linspace(-3, 9, 50)), 1.0)
    assert m.atoms == ()
    assert m.szego_class is SzegoClass.SZEGO


def test_full_arc_equals_lebesgue():
    m = arc(math.pi)
    assert m.szego_class is SzegoClass.SZEGO
    assert np.allclose(m.density(np.linspace(-math.pi, math.pi, 41)), 1.0)
    np.testing.assert_allclose(moments(m, 6).values, moments(lebesgue(), 6).values, atol=1e-15)


def test_half_arc_indicator():
    m = arc(math.pi / 2)
    assert m.szego_class is SzegoClass.NON_SZEGO
    theta = np.array([-1.5, 0.0, 1.5, 1.6, 3.0, -2.0])
    np.testing.assert_array_equal(m.density(theta), [1, 1, 1, 0, 0, 0])


@pytest.mark.parametrize("bad", [0.0, -1.0, math.pi + 1e-9, math.nan])
def test_arc_rejects_bad_width(bad):
    with pytest.raises(MeasureError):
        arc(bad)


def test_atom_validation():
    with pytest.raises(MeasureError):
        make_builtin_measure("lebesgue", atoms=[(0.0, 0.0)])
    with pytest.raises(MeasureError):
        make_builtin_measure("lebesgue", atoms=[(0.0, 1.0), (2 * math.pi, 0.5)])
    with pytest.raises(MeasureError):
        make_builtin_measure("cantor")


def test_lebesgue_moments():
    np.testing.assert_allclose(moments(lebesgue(), 3).values, [1, 0, 0, 0], atol=1e-15)


def test_single_atom_moments():
    m = Measure(atoms=((0.0, 1.0),))
    np.testing.assert_allclose(moments(m, 2).values, [1, 1, 1], atol=1e-15)


@pytest.mark.parametrize("a", [0.3, math.pi / 2, 2.5])
def test_arc_moments_against_adaptive_quadrature(a):
    # oracle: scipy adaptive integration of cos(k theta) / 2pi over [-a, a]
    c = moments(arc(a), 8).values
    for k in range(9):
        ref, _ = sp_integrate.quad(lambda t: math.cos(k * t) / (2 * math.pi), -a, a,
                                   epsabs=1e-14, epsrel=1e-14)
        assert abs(c[k] - ref) < 1e-13
    assert c[0] == pytest.approx(a / math.pi, abs=1e-15)


def test_moments_resolution_stable():
    for m in (lebesgue(), arc(math.pi / 2), make_builtin_measure("arc", 1.0, [(0.5, 0.2)])):
        base = moments(m, 20, resolution=4096).values
        fine = moments(m, 20, resolution=8192).values
        assert np.all(np.abs(fine - base) <= 1e-12 * (1 + np.abs(base)))


def test_custom_density_moments_converge():
    m = Measure((DensityPiece(0.0, 2 * math.pi, lambda t: 1 + np.cos(t), periodic=True),))
    np.testing.assert_allclose(moments(m, 3).values, [1, 0.5, 0, 0], atol=1e-12)


def test_moment_additivity_with_atom():
    m = make_builtin_measure("lebesgue", atoms=[(0.0, 1.0)])
    c = moments(m, 4).values
    np.testing.assert_allclose(c, [2, 1, 1, 1, 1], atol=1e-15)


def test_integrate_examples():
    assert integrate(lebesgue(), lambda z: np.ones_like(z)) == pytest.approx(1.0, abs=1e-14)
    assert integrate(arc(math.pi / 2), lambda z: np.ones_like(z)) == pytest.approx(0.5, abs=1e-14)
    assert abs(integrate(lebesgue(), lambda z: z)) < 1e-15


def test_lp_norm_examples():
    one = lambda z: np.ones_like(z)
    for p in (0.5, 1, 2, 3.5):
        assert lp_norm(lebesgue(), one, p) == pytest.approx(1.0, abs=1e-13)
    assert lp_norm(arc(math.pi / 2), one, 2) == pytest.approx(0.7071067812, abs=1e-10)
    assert lp_norm(lebesgue(), lambda z: z - 1 / z, 2) == pytest.approx(math.sqrt(2), abs=1e-13)


def test_lp_norm_against_brute_force():
    from oracles import brute_force_norm
    g = lambda z: np.abs(z - 1)
    m = arc(1.2)
    for p in (1.0, 2.0):
        ref = brute_force_norm(g, lambda t: np.ones_like(t), 1.2, p)
        assert lp_norm(m, g, p, breakpoints=(0.0,)) == pytest.approx(ref, rel=1e-8)


def test_quadrature_rule_positive_and_unimodular():
    z, w = quadrature_rule(make_builtin_measure("arc", 1.0, [(2.0, 0.3)]), 64)
    assert np.all(w > 0)
    np.testing.assert_allclose(np.abs(z), 1.0, atol=1e-15)
    assert w.sum() == pytest.approx(1.0 / math.pi + 0.3, abs=1e-14)
    with pytest.raises(ValueError):
        quadrature_rule(lebesgue(), 8)


@settings(max_examples=30, deadline=None)
@given(a=st.floats(0.05, math.pi), k=st.integers(0, 30))
def test_arc_moment_bounded_by_mass(a, k):
    c = moments(arc(a), k).values
    assert abs(c[k]) <= c[0] + 1e-15
