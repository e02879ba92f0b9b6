from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from algebra_errors import InadmissibleElementError, PreconditionError
from exact_core import Window, add, bar, pair, unit_vector
from graded_algebras import (
    AlgebraElement,
    AlgebraSpec,
    CentralK,
    Deriv,
    Family,
    GElem,
    algebra_for,
    bracket,
    component_dimension,
    contact,
    degree_derivation,
    expected_part,
    format_symbol,
    hamiltonian,
    normal_form,
    parse_symbol,
    triangular_part,
    verify_closure,
    verify_jacobi,
)
from simple_lie import Root


@pytest.fixture
def tau_h():
    """tau(H_2) with g = sl_2"""
    return AlgebraSpec(Family.TAU_H, 2, 2)


@pytest.fixture
def sl2_indices(tau_h):
    datum = tau_h.datum
    return {
        "e": datum.root_vector(Root(0, 1, 2)),
        "f": datum.root_vector(Root(1, 0, 2)),
        "h": datum.cartan_indices[0],
    }


small_degrees = st.lists(st.integers(-2, 2), min_size=4, max_size=4).map(tuple)


@settings(max_examples=60, deadline=None)
@given(small_degrees, small_degrees)
def test_hamiltonian_relation(r, s):
    # [h_r, h_s] = (bar r, s) h_{r+s} in H_4
    assume(any(r) and any(s))
    spec = AlgebraSpec(Family.HN, 4)
    t = add(r, s)
    expected = AlgebraElement.of(hamiltonian(t), pair(bar(r), s)) if any(t) else AlgebraElement()
    assert bracket(spec, hamiltonian(r), hamiltonian(s)) == expected


def test_loop_bracket_with_central_term(sl2_indices):
    spec = AlgebraSpec(Family.TOROIDAL, 1, 2)
    e, f, h = sl2_indices["e"], sl2_indices["f"], sl2_indices["h"]
    result = bracket(spec, GElem(e, (1,)), GElem(f, (-1,)))
    # [e t, f t^-1] = h + (e|f) K(r, 0)
    assert result.coefficient(GElem(h, (0,))) == 1
    assert result.coefficient(CentralK((Fraction(1),), (0,))) == 1


def test_degree_derivation_acts_by_degree(sl2_indices):
    spec = AlgebraSpec(Family.TOROIDAL, 2, 2)
    x = GElem(sl2_indices["e"], (3, -2))
    assert bracket(spec, degree_derivation(0, 2), x) == AlgebraElement.of(x, 3)
    assert bracket(spec, degree_derivation(1, 2), x) == AlgebraElement.of(x, -2)


def test_antisymmetry_on_symbols(tau_h, sl2_indices):
    x = GElem(sl2_indices["e"], (1, 0))
    y = hamiltonian((0, 1))
    assert bracket(tau_h, x, y) == bracket(tau_h, y, x) * -1


def test_z_mod_k_normal_form(tau_h):
    # K(u, r) only keeps its bar(r) component
    r = (1, 2)
    assert normal_form(tau_h, CentralK((Fraction(1), Fraction(2)), r)) == AlgebraElement()
    result = normal_form(tau_h, CentralK((Fraction(2), Fraction(-1)), r))
    assert result == AlgebraElement.of(CentralK((Fraction(2), Fraction(-1)), r), 1)


def test_toroidal_central_relation():
    spec = AlgebraSpec(Family.TOROIDAL, 2, 2)
    r = (1, 2)
    # sum r_i K(e_i, r) = 0
    element = AlgebraElement.of(CentralK(unit_vector(2, 0), r), 1) + AlgebraElement.of(CentralK(unit_vector(2, 1), r), 2)
    assert normal_form(spec, element) == AlgebraElement()


@pytest.mark.parametrize("family, N, sym", [
    (Family.TAU_H, 2, Deriv((Fraction(1), Fraction(0)), (1, 0))),
    (Family.TOROIDAL, 2, Deriv((Fraction(1), Fraction(0)), (1, 0))),
    (Family.SN, 2, Deriv((Fraction(1), Fraction(0)), (1, 0))),
    (Family.HN, 2, Deriv((Fraction(1), Fraction(0)), (0, 0))),
    (Family.HN, 2, CentralK((Fraction(1), Fraction(0)), (1, 0))),
])
def test_inadmissible_symbols(family, N, sym):
    spec = AlgebraSpec(family, N, 2)
    with pytest.raises(InadmissibleElementError):
        normal_form(spec, sym)


@pytest.mark.parametrize("family, N", [
    (Family.TAU_H, 3),
    (Family.HN, 1),
    (Family.TAU_D, 2),
    (Family.DM, 4),
])
def test_parity_constraints(family, N):
    with pytest.raises(PreconditionError):
        AlgebraSpec(family, N, 2)


def test_g_free_families_drop_sl_n():
    assert AlgebraSpec(Family.HN, 2, 3).sl_n is None
    assert AlgebraSpec(Family.TAU_S, 2, 3).describe() == "tauS(N=2, g=sl3)"


@pytest.mark.parametrize("spec, tag, r, expected", [
    (AlgebraSpec(Family.TAU_H, 4), "Z/K", (1, 0, -1, 2), 1),
    (AlgebraSpec(Family.TAU_H, 4), "Z/K", (0, 0, 0, 0), 4),
    (AlgebraSpec(Family.TAU_H, 4), "H_N", (0, 1, 0, 0), 1),
    (AlgebraSpec(Family.TAU_H, 4), "H~_N", (0, 0, 0, 0), 4),
    (AlgebraSpec(Family.TOROIDAL, 2), "Z", (1, 0), 1),
    (AlgebraSpec(Family.TOROIDAL, 2), "Z", (0, 0), 2),
    (AlgebraSpec(Family.TAU_D, 3), "Z/K_M", (1, 0, 0), 1),
    (AlgebraSpec(Family.TAU_D, 3), "Z/K_M", (1, -1, 1), 0),
    (AlgebraSpec(Family.TAU_D, 3), "D_M", (1, -1, 1), 0),
    (AlgebraSpec(Family.TAU_D, 3), "D~_M", (0, 0, 0), 3),
])
def test_component_dimensions(spec, tag, r, expected):
    assert component_dimension(spec, tag, r) == expected


def test_component_dimension_rejects_foreign_tag():
    with pytest.raises(PreconditionError):
        component_dimension(AlgebraSpec(Family.TOROIDAL, 2), "Z/K", (1, 0))


def test_contact_generator_vanishes_on_G():
    spec = AlgebraSpec(Family.DM, 3)
    assert normal_form(spec, contact((1, -1, 1))) == AlgebraElement()
    assert normal_form(spec, contact((1, 0, 0)))


def test_symbol_text_round_trip(tau_h, sl2_indices):
    datum = tau_h.datum
    symbols = [
        GElem(sl2_indices["e"], (1, -1)),
        CentralK((Fraction(1, 2), Fraction(0)), (1, 0)),
        hamiltonian((2, -1)),
    ]
    for sym in symbols:
        assert parse_symbol(format_symbol(sym, datum), datum) == sym
    assert format_symbol(symbols[0], datum) == "X[E[1,2]](1,-1)"
    with pytest.raises(ValueError):
        parse_symbol("Y(1)")


def test_element_arithmetic():
    x = AlgebraElement.of(hamiltonian((1, 0)), 2)
    assert not (x - x)
    assert (x * Fraction(1, 2)).coefficient(hamiltonian((1, 0))) == 1
    assert (-x).coefficient(hamiltonian((1, 0))) == -2
    assert x.degrees() == [(1, 0)]
    assert AlgebraElement().format() == "0"


def test_generators_follow_window(tau_h):
    algebra = algebra_for(tau_h)
    generators = algebra.generators(Window(1, 2))
    # 8 nonzero degrees with 3 + 1 + 1 symbols, degree 0 with 3 + 2 + 2
    assert len(generators) == 8 * 5 + 7
    with pytest.raises(PreconditionError):
        algebra.generators(Window(1, 3))


def test_triangular_parts(tau_h, sl2_indices):
    e, f, h = sl2_indices["e"], sl2_indices["f"], sl2_indices["h"]
    assert triangular_part(tau_h, "levelzero", GElem(e, (1, 1))) == "+"
    assert triangular_part(tau_h, "levelzero", GElem(f, (1, 1))) == "-"
    assert triangular_part(tau_h, "levelzero", hamiltonian((1, 0))) == "0"
    assert triangular_part(tau_h, "generalN", GElem(h, (2, 1))) == "++"
    assert triangular_part(tau_h, "generalN", GElem(h, (0, 1))) == "--"
    assert triangular_part(tau_h, "generalN", GElem(h, (1, 1))) == "+"
    assert triangular_part(tau_h, "generalN", GElem(h, (-1, -1))) == "-"
    assert triangular_part(tau_h, "generalN", GElem(e, (0, 0))) == "+"
    assert triangular_part(tau_h, "rm-positive", GElem(f, (1, 5))) == "+"
    assert triangular_part(tau_h, "rm-positive", GElem(f, (0, 5))) == "-"


def test_triangular_part_preconditions(sl2_indices):
    with pytest.raises(InadmissibleElementError):
        triangular_part(AlgebraSpec(Family.TOROIDAL, 2), "levelzero", GElem(0, (0, 0)))
    with pytest.raises(PreconditionError):
        triangular_part(AlgebraSpec(Family.TAU_H, 4), "N2-healal", GElem(0, (0, 0, 0, 0)))
    with pytest.raises(PreconditionError):
        triangular_part(AlgebraSpec(Family.TAU_H, 2), "upper", GElem(0, (0, 0)))


@pytest.mark.parametrize("tag, p, q, expected", [
    ("generalN", "++", "+", "++"),
    ("generalN", "++", "-", "++"),
    ("generalN", "--", "+", "--"),
    ("generalN", "+", "-", None),
    ("generalN", "++", "--", None),
    ("levelzero", "0", "-", "-"),
    ("levelzero", "+", "-", None),
])
def test_expected_part(tag, p, q, expected):
    assert expected_part(tag, p, q) == expected


@pytest.mark.parametrize("spec", [
    AlgebraSpec(Family.TOROIDAL, 1, 2),
    AlgebraSpec(Family.HN, 2),
    AlgebraSpec(Family.MINIMAL_EALA, 2, 2),
    AlgebraSpec(Family.TAU_H, 2, 2),
])
def test_jacobi_passes(spec):
    report = verify_jacobi(spec, Window(1, spec.N))
    assert report.status == "pass", report.witnesses[:3]
    assert report.details["sampled"] is False


def test_jacobi_sample_is_partial():
    spec = AlgebraSpec(Family.HN, 2)
    report = verify_jacobi(spec, Window(1, 2), sample_limit=20, seed=3)
    assert report.status == "partial"
    assert report.details["sampled"] is True


@pytest.mark.parametrize("tag", ["levelzero", "generalN", "N2-healal", "rm-positive"])
def test_closure_passes(tau_h, tag):
    report = verify_closure(tau_h, tag, Window(1, 2))
    assert report.status == "pass", report.witnesses[:3]
    assert report.check == f"closure:{tag}"
