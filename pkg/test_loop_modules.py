import json
from fractions import Fraction

import pandas as pd
import pytest

from algebra_errors import NotAssociativizableError, PreconditionError
from exact_core import Window, is_zero_matrix
from graded_algebras import AlgebraElement, AlgebraSpec, CentralK, Family, GElem, algebra_for, degree_derivation, \
    hamiltonian
from loop_modules import (
    RealizationModule,
    associativize,
    evaluation_action,
    evaluation_module,
    highest_weight_space,
    point_power,
    realization_module,
    verify_integrability,
    verify_representation,
)
from simple_lie import Root, irrep
from sp_jet_modules import jet_module, sp_rep

ALPHA = Root(0, 1, 2)


@pytest.fixture
def toroidal():
    """Toroidal algebra over sl_2 in one variable."""
    return AlgebraSpec(Family.TOROIDAL, 1, 2)


@pytest.fixture
def evaluation(toroidal):
    """V(1) (x) V(1) evaluated at the points 1 and 2."""
    return evaluation_module(toroidal, [(1,), (1,)], [(1,), (2,)])


@pytest.fixture
def realization():
    """V(1) (x) defining sp_2 fiber (x) A over tau(H_2)."""
    return realization_module((1,), sp_rep(1, "defining"))


def test_point_power():
    assert point_power((Fraction(2), Fraction(3)), (2, -1)) == Fraction(4, 3)
    assert point_power((Fraction(5),), (0,)) == 1


def test_evaluation_dimensions_and_weights(evaluation):
    assert evaluation.dimension((3,)) == 4
    weights = evaluation.weights_at((1,))
    assert sorted(w.alpha[0] for w in weights) == [-2, 0, 0, 2]
    assert all(w.delta == (1,) for w in weights)


def test_evaluation_preconditions(toroidal):
    with pytest.raises(PreconditionError):
        evaluation_module(toroidal, [(1,)], [(0,)])
    with pytest.raises(PreconditionError):
        evaluation_module(toroidal, [(1,), (1,)], [(1,), (1,)])
    with pytest.raises(PreconditionError):
        evaluation_module(toroidal, [(1,), (1,)], [(1,)])
    with pytest.raises(PreconditionError):
        evaluation_module(AlgebraSpec(Family.HN, 2), [(1,)], [(1, 1)])


def test_evaluation_action(toroidal, evaluation):
    datum = toroidal.datum
    h = datum.cartan_indices[0]
    # top vector v+ (x) v+ is an h-eigenvector with eigenvalue 1 * a_1^r + 1 * a_2^r
    image, grade = evaluation_action(evaluation, GElem(h, (2,)), [1, 0, 0, 0], (0,))
    assert grade == (2,)
    assert image == [5, 0, 0, 0]
    image, grade = evaluation_action(evaluation, CentralK((Fraction(1),), (0,)), [1, 0, 0, 0], (0,))
    assert image == [0, 0, 0, 0]
    image, grade = evaluation_action(evaluation, degree_derivation(0, 1), [1, 0, 0, 0], (3,))
    assert grade == (3,)
    assert image == [3, 0, 0, 0]


def test_evaluation_is_a_representation(toroidal, evaluation):
    window = Window(1, 1)
    generators = algebra_for(toroidal).generators(window)
    report = verify_representation(evaluation, generators, Window(2, 1), check="evaluation-representation")
    assert report.status == "pass", report.witnesses[:3]
    assert report.check == "evaluation-representation"
    assert report.details["checks"] > 0


def test_root_vectors_are_nilpotent(toroidal, evaluation):
    e = toroidal.datum.root_vector(ALPHA)
    x = evaluation.operator(GElem(e, (1,)), (0,))
    assert not is_zero_matrix(x @ x)
    assert is_zero_matrix(x @ x @ x)


def test_integrability(evaluation):
    report = verify_integrability(evaluation, Window(1, 1), bound=3, grades=Window(3, 1))
    assert report.status in ("pass", "inconclusive")
    assert report.witnesses == []
    assert report.details["non_integral"] == 0
    assert report.details["reflections_checked"] > 0


def test_integrability_bound_too_small(evaluation):
    report = verify_integrability(evaluation, Window(1, 1), bound=1, grades=Window(2, 1))
    assert report.status == "fail"
    with pytest.raises(PreconditionError):
        verify_integrability(evaluation, Window(1, 1), bound=0)


def test_irreducibility_certificate(toroidal):
    generic = evaluation_module(toroidal, [(1,), (1,)], [(1,), (2,)])
    assert generic.irreducibility_certificate(Window(2, 1))["vanishing_degrees"] == []
    opposite = evaluation_module(toroidal, [(1,), (1,)], [(1,), (-1,)])
    assert opposite.irreducibility_certificate(Window(2, 1))["vanishing_degrees"] == ["(-1)", "(1)"]


def test_element_operator_needs_homogeneous_elements(toroidal, evaluation):
    e = toroidal.datum.root_vector(ALPHA)
    mixed = AlgebraElement({GElem(e, (1,)): 1, GElem(e, (0,)): 1})
    with pytest.raises(PreconditionError):
        evaluation.element_operator(mixed, (0,))
    assert is_zero_matrix(evaluation.element_operator(AlgebraElement(), (0,)))


def test_associativize_single_point(toroidal):
    module = evaluation_module(toroidal, [(1,)], [(1,)])
    action = associativize(module, ALPHA, Window(1, 1))
    assert action.c == 1
    assert action.lambda_alpha == 1
    assert action.mu == 1
    assert action.verify(Window(1, 1)).status == "pass"


def test_associativize_rejects_non_unit_point(toroidal):
    module = evaluation_module(toroidal, [(1,)], [(2,)])
    with pytest.raises(NotAssociativizableError) as excinfo:
        associativize(module, ALPHA, Window(1, 1))
    assert excinfo.value.witness


def test_realization_is_a_representation(realization):
    generators = algebra_for(realization.spec).generators(Window(1, 2))
    report = verify_representation(realization, generators, Window(0, 2), check="realization-representation")
    assert report.status == "pass", report.witnesses[:3]


def test_realization_hamiltonian_matches_jet_module(realization):
    jet = jet_module(sp_rep(1, "defining"))
    grade = (1, -1)
    expected = jet.operator(hamiltonian((1, 1)), grade)
    actual = realization.operator(hamiltonian((1, 1)), grade)
    # V(1) (x) fiber with the jet action on the second factor
    assert is_zero_matrix(actual[:2, :2] - expected)
    assert is_zero_matrix(actual[2:, 2:] - expected)
    assert is_zero_matrix(actual[:2, 2:])


def test_realization_highest_weight_space(realization):
    space = highest_weight_space(realization, "levelzero", Window(1, 2))
    dims = space.graded_dims()
    assert len(dims) == 9
    assert set(dims.values()) == {realization.jet.fiber.dimension}


def test_realization_associativizes(realization):
    action = associativize(realization, ALPHA, Window(1, 2))
    assert action.c == 1
    assert action.lambda_alpha == action.c


def test_realization_needs_tau_h():
    spec = AlgebraSpec(Family.TOROIDAL, 2, 2)
    with pytest.raises(PreconditionError):
        RealizationModule(spec, irrep(spec.datum, (1,)), jet_module(sp_rep(1, "defining")))


def test_manifest_and_csv_export(tmp_path, toroidal, evaluation):
    manifest_path = tmp_path / "manifest.json"
    evaluation.save_manifest(str(manifest_path), Window(1, 1))
    with open(manifest_path, encoding="utf-8") as f:
        manifest = json.load(f)
    assert manifest["kind"] == "evaluation"
    assert manifest["graded_dims"] == {"(-1)": 4, "(0)": 4, "(1)": 4}
    assert manifest["parameters"]["points"] == [["1"], ["2"]]

    e = toroidal.datum.root_vector(ALPHA)
    csv_path = tmp_path / "action.csv"
    evaluation.export_action_csv(GElem(e, (1,)), (0,), str(csv_path))
    frame = pd.read_csv(csv_path, header=None)
    assert frame.shape == (4, 4)
