from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from algebra_errors import ArityError, PreconditionError
from exact_core import Window
from graded_algebras import AlgebraElement, AlgebraSpec, CentralK, Family, GElem, degree_central, degree_derivation
from roots_weyl import (
    IntegralMatrix,
    RealRoot,
    Weight,
    apply_automorphism,
    coroot,
    delta_weight,
    finite_roots,
    order_compare,
    random_unimodular,
    reflect,
    shear_matrix,
    verify_automorphism,
    verify_kb_span,
    weight_pairing,
    weyl_orbit,
)
from simple_lie import Root, build_sl

ALPHA = Root(0, 1, 2)


@pytest.fixture
def fundamental():
    """sl_2 fundamental weight with level omega_1 = 3 and delta part (2, 0)."""
    return Weight((1,), (2, 0), (3, 0))


def test_weight_evaluation(fundamental):
    h = build_sl(2).cartan_indices[0]
    assert fundamental.evaluate(AlgebraElement.of(GElem(h, (0, 0)))) == 1
    assert fundamental.evaluate(AlgebraElement.of(degree_central(0, 2))) == 3
    assert fundamental.evaluate(AlgebraElement.of(degree_derivation(0, 2))) == 2
    with pytest.raises(PreconditionError):
        fundamental.evaluate(AlgebraElement.of(GElem(h, (1, 0))))


def test_weight_shapes_must_agree(fundamental):
    with pytest.raises(ArityError):
        fundamental + Weight.zero(1, 3)
    with pytest.raises(ArityError):
        Weight((1,), (0, 0), (0,))


def test_weight_text_and_dict(fundamental):
    assert fundamental.format() == "1*w1 + 2*delta1 + 3*omega1"
    assert Weight.from_dict(fundamental.to_dict()) == fundamental
    assert Weight.zero(1, 2).format() == "0"


def test_coroot_includes_level(fundamental):
    gamma = RealRoot(ALPHA, (1, 0))
    h = build_sl(2).cartan_indices[0]
    expected = AlgebraElement({GElem(h, (0, 0)): 1, CentralK((Fraction(1), Fraction(0)), (0, 0)): 1})
    assert coroot(gamma) == expected
    assert fundamental.evaluate(coroot(gamma)) == 4


def test_reflection_is_an_involution(fundamental):
    gamma = RealRoot(ALPHA, (1, 0))
    image = reflect(gamma, fundamental)
    assert image != fundamental
    assert reflect(gamma, image) == fundamental
    # gamma maps to -gamma
    assert reflect(gamma, gamma.weight()) == gamma.weight().scale(-1)


def test_finite_weyl_orbit():
    lam = Weight((1,), (0,), (0,))
    orbit, truncated = weyl_orbit(lam, finite_roots(build_sl(2), 1), bound=5)
    assert not truncated
    assert orbit == {lam, Weight((-1,), (0,), (0,))}


def test_affine_orbit_is_truncated():
    lam = Weight((1,), (0,), (1,))
    generators = [RealRoot(ALPHA, (0,)), RealRoot(ALPHA, (1,))]
    orbit, truncated = weyl_orbit(lam, generators, bound=3)
    assert truncated
    assert len(orbit) > 4
    with pytest.raises(PreconditionError):
        weyl_orbit(lam, generators, bound=0)


def test_weight_pairing():
    root = RealRoot(ALPHA, (0, 0)).weight()
    assert weight_pairing(root, root) == 2
    assert weight_pairing(delta_weight((1, 0), 1), Weight((0,), (0, 0), (1, 0))) == 1
    # delta is isotropic
    assert weight_pairing(delta_weight((1, 1), 1), delta_weight((1, 1), 1)) == 0


@pytest.mark.parametrize("diff, expected", [
    (Weight((0,), (1, 0), (0, 0)), "less"),
    (Weight((0,), (0, 1), (0, 0)), "greater"),
    (Weight((0,), (1, 1), (0, 0)), "less"),
    (Weight((2,), (0, 0), (0, 0)), "less"),
    (Weight((1,), (0, 0), (0, 0)), "incomparable"),
    (Weight((0,), (0, 0), (1, 0)), "incomparable"),
])
def test_order_compare(diff, expected):
    mu = Weight((1,), (0, 0), (0, 0))
    assert order_compare(mu + diff, mu, 1) == expected


def test_order_compare_preconditions():
    lam = Weight((0,), (0, 0), (0, 0))
    assert order_compare(lam, lam, 1) == "equal"
    with pytest.raises(PreconditionError):
        order_compare(lam, lam, 2)


def test_integral_matrix_validation():
    with pytest.raises(PreconditionError):
        IntegralMatrix(((2, 0), (0, 1)))
    with pytest.raises(PreconditionError):
        IntegralMatrix(((1, 0),))
    with pytest.raises(PreconditionError):
        shear_matrix(0, 1, 2)
    with pytest.raises(PreconditionError):
        shear_matrix(1, 2, 2)


def test_shear_matrix():
    b = shear_matrix(2, 1, 4)
    assert b.rows == ((2, 1, 0, 0), (1, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    assert b.inverse().apply(b.apply((1, 2, 3, 4))) == (1, 2, 3, 4)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 4))
def test_random_unimodular_has_unit_determinant(seed, n):
    b = random_unimodular(n, np.random.default_rng(seed))
    assert round(abs(np.linalg.det(b.array.astype(float)))) == 1


def test_apply_automorphism_on_symbols():
    b = shear_matrix(1, 1, 2)
    assert apply_automorphism(b, GElem(0, (1, 0))) == AlgebraElement.of(GElem(0, (1, 0)))
    assert apply_automorphism(b, GElem(0, (0, 1))) == AlgebraElement.of(GElem(0, (1, 1)))


@pytest.mark.parametrize("family", [Family.FULL_TOROIDAL, Family.TAU_S])
def test_automorphisms_preserve_brackets(family):
    spec = AlgebraSpec(family, 2, 2)
    window = Window(1, 2)
    matrices = [shear_matrix(1, 1, 2), shear_matrix(2, 1, 2), random_unimodular(2, np.random.default_rng(7))]
    for b in matrices:
        report = verify_automorphism(spec, b, window)
        assert report.status == "pass", report.witnesses[:3]


def test_automorphism_arity_mismatch():
    with pytest.raises(ArityError):
        verify_automorphism(AlgebraSpec(Family.TAU_S, 2, 2), shear_matrix(1, 1, 4), Window(1, 2))


def test_kb_span():
    b = shear_matrix(1, 1, 4)
    report = verify_kb_span(b, Window(1, 4))
    assert report.status in ("pass", "partial"), report.witnesses[:3]
    assert report.details["degrees_checked"] == 80
    with pytest.raises(PreconditionError):
        verify_kb_span(IntegralMatrix(((1, 0, 0), (0, 1, 0), (0, 0, 1))), Window(1, 3))
