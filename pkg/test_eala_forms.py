from fractions import Fraction

import pytest

from algebra_errors import PreconditionError
from eala_forms import (
    FormSpec,
    form,
    form_agreement,
    h_tilde,
    toroidal_form,
    verify_ea_axioms,
    verify_invariance,
    verify_nondegeneracy,
    verify_symmetry,
    zero_sum_triples,
)
from exact_core import Window, add, bar, is_zero, rational_vector
from graded_algebras import AlgebraSpec, CentralK, Family, GElem, algebra_for, degree_central, degree_derivation, \
    hamiltonian
from simple_lie import Root


@pytest.fixture
def tau_h_form():
    return FormSpec(AlgebraSpec(Family.TAU_H, 2, 2))


@pytest.fixture
def tau_s_form():
    return FormSpec(AlgebraSpec(Family.TAU_S, 2, 2))


def test_form_requires_a_form_family():
    with pytest.raises(PreconditionError):
        FormSpec(AlgebraSpec(Family.TOROIDAL, 2, 2))


@pytest.mark.parametrize("r", [(1, 2), (0, 1), (-2, 1)])
def test_hamiltonian_pairing_witness(tau_h_form, r):
    # (D(bar r, r) | K(bar s, s)) = -(s, s) at s = -r
    s = tuple(-c for c in r)
    value = form(tau_h_form, hamiltonian(r), CentralK(rational_vector(bar(s)), s))
    assert value == -sum(c * c for c in s)


def test_form_is_graded(tau_h_form):
    datum = tau_h_form.algebra.datum
    e = datum.root_vector(Root(0, 1, 2))
    f = datum.root_vector(Root(1, 0, 2))
    assert form(tau_h_form, GElem(e, (1, 0)), GElem(f, (-1, 0))) == 1
    assert form(tau_h_form, GElem(e, (1, 0)), GElem(f, (0, 0))) == 0


def test_degree_zero_pairing(tau_s_form):
    n = tau_s_form.algebra.N
    assert form(tau_s_form, degree_derivation(0, n), degree_central(0, n)) == 1
    assert form(tau_s_form, degree_derivation(0, n), degree_central(1, n)) == 0
    assert form(tau_s_form, degree_derivation(0, n), degree_derivation(1, n)) == 0


def test_toroidal_form_on_raw_symbols(tau_s_form):
    spec = tau_s_form.algebra
    value = toroidal_form(spec, degree_derivation(1, 2), CentralK((Fraction(0), Fraction(3)), (0, 0)))
    assert value == 3


def test_zero_sum_triples(tau_h_form):
    generators = algebra_for(tau_h_form.algebra).generators(Window(1, 2))
    triples, sampled = zero_sum_triples(generators, 10 ** 6)
    assert not sampled
    assert triples
    for i, j, k in triples:
        assert i <= j <= k
        assert is_zero(add(add(generators[i].r, generators[j].r), generators[k].r))

    sample, sampled = zero_sum_triples(generators, 50, seed=1)
    assert sampled
    assert len(sample) <= 50


@pytest.mark.parametrize("family, N", [
    (Family.TAU_H, 2),
    (Family.TAU_S, 2),
    (Family.MINIMAL_EALA, 2),
])
def test_form_suite_passes(family, N):
    spec = FormSpec(AlgebraSpec(family, N, 2))
    window = Window(1, N)
    assert verify_symmetry(spec, window).status == "pass"
    invariance = verify_invariance(spec, window)
    assert invariance.status == "pass", invariance.witnesses[:3]
    assert verify_nondegeneracy(spec, window).status == "pass"
    assert form_agreement(spec, window).status == "pass"


def test_contact_family_nondegeneracy():
    spec = FormSpec(AlgebraSpec(Family.TAU_D, 3, 2))
    report = verify_nondegeneracy(spec, Window(1, 3))
    assert report.status == "pass", report.witnesses[:3]
    # d + 2N with d = 1, N = 3
    assert report.details["h_tilde_rank"] == 7


def test_h_tilde(tau_h_form):
    cartan = h_tilde(tau_h_form.algebra)
    assert len(cartan) == 1 + 2 + 2


def test_ea_axioms_are_partial(tau_h_form):
    report = verify_ea_axioms(tau_h_form, Window(1, 2))
    assert report.status == "partial", report.witnesses[:3]
    assert report.details["discreteness"] == "satisfied by construction"
    assert report.details["real_root_above_isotropic"] == "satisfied by construction"
    assert report.details["isotropic_degrees"] == 8
    assert report.witnesses == []


def test_windowed_checks_need_radius(tau_h_form):
    with pytest.raises(PreconditionError):
        verify_invariance(tau_h_form, Window(0, 2))
    with pytest.raises(PreconditionError):
        verify_nondegeneracy(tau_h_form, Window(0, 2))
