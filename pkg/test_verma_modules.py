from fractions import Fraction

import pytest

from algebra_errors import PreconditionError
from exact_core import Window
from graded_algebras import AlgebraSpec, Family, GElem, hamiltonian
from loop_modules import highest_weight_space, realization_module
from roots_weyl import Weight
from simple_lie import Root
from sp_jet_modules import sp_rep
from verma_modules import (
    QUOTIENT_LABEL,
    character_top,
    induced_module,
    negative_depth,
    simple_quotient_window,
    subspace_top,
)


@pytest.fixture
def tau_h():
    return AlgebraSpec(Family.TAU_H, 2, 2)


@pytest.fixture
def sl2(tau_h):
    datum = tau_h.datum
    return {
        "e": datum.root_vector(Root(0, 1, 2)),
        "f": datum.root_vector(Root(1, 0, 2)),
        "h": datum.cartan_indices[0],
    }


@pytest.fixture
def fundamental_top(tau_h):
    """Character top with label 1 at level 0."""
    return character_top(tau_h, "levelzero", (1,), window=Window(1, 2))


@pytest.fixture
def trivial_top(tau_h):
    return character_top(tau_h, "levelzero", (0,), window=Window(1, 2))


def test_character_top_values(tau_h, sl2, fundamental_top):
    assert fundamental_top.support == [(0, 0)]
    assert fundamental_top.dimension((0, 0)) == 1
    assert fundamental_top.dimension((1, 0)) == 0
    assert fundamental_top.operator(GElem(sl2["h"], (0, 0)), (0, 0))[0, 0] == 1
    # nonzero degrees leave the support
    assert fundamental_top.operator(GElem(sl2["h"], (1, 0)), (0, 0)) is None
    assert fundamental_top.weights_at((0, 0)) == [Weight((1,), (0, 0), (0, 0))]


def test_nonzero_level_is_not_closed(tau_h):
    with pytest.raises(PreconditionError):
        character_top(tau_h, "levelzero", (1,), level=(1, 0), window=Window(1, 2))


def test_top_shape_and_family(tau_h):
    with pytest.raises(PreconditionError):
        character_top(tau_h, "levelzero", (1, 1))
    with pytest.raises(PreconditionError):
        character_top(AlgebraSpec(Family.TOROIDAL, 2, 2), "levelzero", (1,))


def test_negative_depth(tau_h, sl2):
    assert negative_depth(tau_h, "levelzero", GElem(sl2["f"], (1, -1))) == 1
    assert negative_depth(tau_h, "rm-positive", GElem(sl2["h"], (-2, 0))) == 2
    assert negative_depth(tau_h, "generalN", GElem(sl2["h"], (0, 3))) == 3


def test_induced_basis(fundamental_top):
    module = induced_module(fundamental_top, 1, Window(1, 2))
    # the top plus f(s) v for each of the 9 window degrees s
    assert len(module.slice(0)) == 1
    assert len(module.slice(1)) == 9
    assert module.dimension((0, 0)) == 2
    assert module.dimension((1, 1)) == 1
    top_key = module.slice(0)[0]
    assert module.format_key(top_key) == "v[(0,0),0]"


def test_induced_action_by_straightening(sl2, fundamental_top):
    module = induced_module(fundamental_top, 1, Window(1, 2))
    f_key = ((GElem(sl2["f"], (1, 0)),), (0, 0), 0)
    top_key = ((), (0, 0), 0)
    # e(-1,0) f(1,0) v = [e, f](0) v = lambda(h) v
    assert module.act(GElem(sl2["e"], (-1, 0)), f_key) == {top_key: 1}
    assert module.act(GElem(sl2["e"], (1, 0)), top_key) == {}
    assert module.act(GElem(sl2["f"], (1, 0)), top_key) == {f_key: 1}
    assert module.key_grade(f_key) == (1, 0)
    assert module.key_depth(f_key) == 1


def test_induced_weights(sl2, fundamental_top):
    module = induced_module(fundamental_top, 1, Window(1, 2))
    weights = module.weights_at((1, 0))
    assert weights == [Weight((-1,), (1, 0), (0, 0))]


def test_induced_depth_must_be_positive(fundamental_top):
    with pytest.raises(PreconditionError):
        induced_module(fundamental_top, 0, Window(1, 2))


def test_trivial_top_radical_swallows_depth_one(trivial_top):
    module = induced_module(trivial_top, 1, Window(1, 2))
    quotient = simple_quotient_window(module)
    assert quotient.label == QUOTIENT_LABEL
    assert quotient.top_dimension() == 1
    assert quotient.radical_dimension((1, 0), depth=1) == 1
    assert quotient.dimension((0, 0)) == 1
    assert len(quotient.null_vectors()) == 9


def test_fundamental_top_has_no_depth_one_radical(fundamental_top):
    module = induced_module(fundamental_top, 1, Window(1, 2))
    quotient = simple_quotient_window(module)
    assert quotient.null_vectors() == []
    assert quotient.dimension((0, 0)) == 2
    summary = quotient.summary()
    assert summary["label"] == QUOTIENT_LABEL
    assert all(block["radical_dim"] == 0 for block in summary["blocks"])


def test_depth_two_quotient(fundamental_top):
    module = induced_module(fundamental_top, 2, Window(1, 2))
    assert module.slice(2)
    quotient = simple_quotient_window(module)
    # f(0)^2 v and f(r) f(-r) v for the 4 pairs {r, -r}
    assert quotient.dimension((0, 0), depth=2) == 5
    # e(p) f(a) f(-a) v = (delta_{p,a} + delta_{p,-a} - 2) f(p) v separates them
    assert quotient.radical_dimension((0, 0), depth=2) == 0
    assert quotient.radical_dimension((0, 0), depth=1) == 0


def test_subspace_top_from_realization():
    module = realization_module((1,), sp_rep(1, "defining"))
    space = highest_weight_space(module, "levelzero", Window(1, 2))
    top = subspace_top(space, Window(1, 2))
    assert top.dimension((0, 0)) == 2
    assert top.weights_at((0, 0)) == [Weight((1,), (0, 0), (0, 0))] * 2
    assert top.operator(hamiltonian((1, 0)), (0, 0)).shape == (2, 2)
    assert top.operator(GElem(module.spec.datum.cartan_indices[0], (0, 0)), (0, 0))[1, 1] == Fraction(1)
