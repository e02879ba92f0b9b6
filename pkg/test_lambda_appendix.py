from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from algebra_errors import NotOfJetTypeError, PreconditionError, ReportFormatError, WindowOutOfRangeError
from exact_core import Window, bar, pair
from graded_algebras import AlgebraSpec, Family
from lambda_appendix import (
    GradeShiftAction,
    LambdaSystem,
    SpaceAction,
    construct_k,
    extract_lambda,
    family_category,
    lambda_equations,
    lambda_nullspace,
    lambda_residual,
    pair_key,
    parse_pair_key,
    verify_constant_family,
    verify_lemma_consequences,
)
from loop_modules import associativize, evaluation_module
from simple_lie import Root
from sp_jet_modules import jet_module, sp_rep


nonzero_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=4).filter(bool)


@pytest.fixture
def window():
    return Window(2, 2)


@pytest.mark.parametrize("x, y, expected", [
    ((0, 0), (1, 2), "zero"),
    ((1, 2), (0, 0), "zero"),
    ((1, -2), (-1, 2), "opposite"),
    ((1, 0), (1, 0), "generic"),
])
def test_family_category(x, y, expected):
    assert family_category(x, y) == expected


def test_pair_keys():
    assert pair_key((1, 0), (0, -1)) == "(1,0|0,-1)"
    assert parse_pair_key("(1,0|0,-1)") == ((1, 0), (0, -1))
    with pytest.raises(ReportFormatError):
        parse_pair_key("(1|0,1)")
    with pytest.raises(ReportFormatError):
        parse_pair_key("1,0,0,-1")


@pytest.mark.parametrize("lam, mu, c", [(1, 1, 1), (2, 4, 1), (Fraction(1, 2), Fraction(1, 4), 1)])
def test_constant_family_passes(window, lam, mu, c):
    report = verify_constant_family(lam, mu, c, window)
    assert report.status == "pass", report.witnesses[:3]
    assert report.details["associativity_factor"] == "1"
    assert report.details["triples_checked"] > 0


def test_constant_family_needs_lambda_squared_equal_mu_c(window):
    report = verify_constant_family(1, 1, 2, window)
    assert report.status == "fail"
    # every family solves the equation; only associativity fails
    assert report.details["residual_check"] == "pass"
    assert report.details["associativity_factor"] == "1/2"


def test_constant_family_preconditions(window):
    with pytest.raises(PreconditionError):
        verify_constant_family(1, 1, 1, Window(1, 2))
    with pytest.raises(PreconditionError):
        verify_constant_family(0, 1, 1, window)


def test_residual_of_family(window):
    system = LambdaSystem.family(2, 4, 1, window)
    assert lambda_residual(system, (1, 0), (0, 1), (1, 1)) == 0
    assert lambda_residual(system, (1, 0), (-1, 0), (0, 1)) == 0
    with pytest.raises(PreconditionError):
        lambda_residual(system, (0, 0), (1, 0), (0, 1))
    with pytest.raises(WindowOutOfRangeError):
        lambda_residual(LambdaSystem.family(1, 1, 1, Window(1, 2)), (1, 0), (1, 0), (1, 0))


def test_system_constants_and_report(window):
    system = LambdaSystem.family(2, 4, 1, window)
    assert system.constants() == {"generic": 2, "opposite": 4, "zero": 1}
    assert system.constancy_report().status == "pass"

    broken = LambdaSystem.family(1, 1, 2, window)
    report = broken.constancy_report()
    assert report.status == "fail"
    assert report.details["associativity_factor"] == "1/2"


def test_system_json_round_trip(tmp_path, window):
    system = LambdaSystem.family(2, 4, 1, window)
    path = tmp_path / "lambda.json"
    system.save_json(str(path))
    loaded = LambdaSystem.load_json(str(path))
    assert loaded.values == system.values
    assert (loaded.lam, loaded.mu, loaded.c) == (2, 4, 1)
    assert loaded.window == window


def test_system_from_malformed_dict():
    with pytest.raises(ReportFormatError):
        LambdaSystem.from_dict({"lambda": "1"})
    with pytest.raises(ReportFormatError):
        LambdaSystem.from_dict({"(1,0|0,1)": "x"})
    with pytest.raises(ReportFormatError):
        LambdaSystem.from_dict({"(1,0|0,1)": "1"})


def test_lambda_equations(window):
    unknowns, rows = lambda_equations(window)
    assert len(unknowns) == 25 * 25
    assert rows
    _, symmetric_rows = lambda_equations(window, symmetrize=True)
    assert len(symmetric_rows) == len(rows) + 25 * 24 // 2
    with pytest.raises(PreconditionError):
        lambda_equations(Window(1, 2))


def test_lambda_nullspace_contains_the_family(window):
    nullspace = lambda_nullspace(window)
    report = nullspace.report()
    assert report.status == "pass", report.witnesses
    assert nullspace.family_rank == 3
    assert nullspace.dimension >= 3
    assert len(nullspace.systems()) == nullspace.dimension


def test_lemma_consequences(window):
    family = LambdaSystem.family(2, 4, 1, window)
    assert verify_lemma_consequences([family]).status == "pass"

    values = dict(family.values)
    values[((1, 0), (1, 0))] = Fraction(5)
    report = verify_lemma_consequences([LambdaSystem(window, values)])
    assert report.status == "inconclusive"
    assert report.details["violations"] > 0

    with pytest.raises(PreconditionError):
        verify_lemma_consequences([])


@pytest.mark.parametrize("r, s, expected", [
    ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1)),
    ((1, 1, 0, 0), (1, 0, 0, 0), (0, 0, 0, -1)),
])
def test_construct_k(r, s, expected):
    assert construct_k(r, s) == expected


@pytest.mark.parametrize("r, s", [
    ((1, 0), (0, 1)),
    ((2, 0, 0, 0), (1, 0, 0, 0)),
    ((0, 0, 1, 0), (1, 0, 0, 0)),
    ((0, 0, 0, 0), (1, 0, 0, 0)),
])
def test_construct_k_preconditions(r, s):
    with pytest.raises(PreconditionError):
        construct_k(r, s)


def test_extract_lambda_from_jet_module():
    module = jet_module(sp_rep(1, "defining"))
    system = extract_lambda(module, Window(1, 2))
    assert set(system.values.values()) == {1}
    assert (system.lam, system.mu, system.c) == (1, 1, 1)
    assert system.constancy_report().status == "pass"


def test_extract_lambda_from_associativized_action():
    spec = AlgebraSpec(Family.TOROIDAL, 1, 2)
    module = evaluation_module(spec, [(1,)], [(1,)])
    action = associativize(module, Root(0, 1, 2), Window(1, 1))
    system = extract_lambda(SpaceAction(action), Window(1, 1))
    assert system.constancy_report().status == "pass"


def test_grade_shift_action_is_not_constant():
    system = extract_lambda(GradeShiftAction(2), Window(1, 2))
    # t^(1,0) t^(-1,1) = 4 t^(0,1)
    assert system.value((1, 0), (-1, 1)) == 4
    assert system.value((1, 0), (1, 0)) == 1
    assert system.lam is None
    report = system.constancy_report()
    assert report.status == "fail"


class _TwistedAction:
    """t^r t^s differs from t^{r+s} by a grade-dependent factor."""

    N = 1

    def t_operator(self, r, grade):
        return GradeShiftAction(1).t_operator(r, grade) * Fraction(grade[0] + 10)


def test_grade_dependent_products_are_rejected():
    with pytest.raises(NotOfJetTypeError) as excinfo:
        extract_lambda(_TwistedAction(), Window(1, 1))
    assert excinfo.value.witness["pair"]


def _admissible_triples(window):
    for l in window.nonzero():
        for r in window.nonzero():
            for s in window.nonzero():
                if tuple(a + b for a, b in zip(s, l)) in window and tuple(a + b for a, b in zip(r, l)) in window:
                    yield l, r, s


def test_constant_family_counts_match_a_direct_sweep(window):
    system = LambdaSystem.family(3, 9, 1, window)
    expected = {"s+l=0": 0, "r+l=0": 0, "r+s=0": 0, "l=-(r+s)": 0}
    checked = 0
    for l, r, s in _admissible_triples(window):
        checked += 1
        assert lambda_residual(system, l, r, s) == 0
        expected["s+l=0"] += all(a + b == 0 for a, b in zip(s, l))
        expected["r+l=0"] += all(a + b == 0 for a, b in zip(r, l))
        expected["r+s=0"] += all(a + b == 0 for a, b in zip(r, s))
        expected["l=-(r+s)"] += all(a + b + d == 0 for a, b, d in zip(r, s, l))

    details = verify_constant_family(3, 9, 1, window).details
    assert details["triples_checked"] == checked
    assert details["degenerate_triples"] == expected


@settings(max_examples=15, deadline=None)
@given(lam=nonzero_rationals, c=nonzero_rationals)
def test_constant_family_sweep(lam, c):
    report = verify_constant_family(lam, lam * lam / c, c, Window(2, 2))
    assert report.status == "pass", report.witnesses[:3]
    assert all(count > 0 for count in report.details["degenerate_triples"].values())


def test_constant_family_sweep_four_variables():
    rng = np.random.default_rng(7)
    lam, c = (Fraction(int(rng.integers(1, 6)) * int(rng.choice([-1, 1])), int(rng.integers(1, 4))) for _ in range(2))
    report = verify_constant_family(lam, lam * lam / c, c, Window(2, 4))
    assert report.status == "pass", report.witnesses[:3]
    assert all(count > 0 for count in report.details["degenerate_triples"].values())


def _random_admissible_pairs(rng, count, n=4):
    pairs = []
    while len(pairs) < count:
        r, s = (tuple(int(x) for x in rng.integers(-3, 4, size=n)) for _ in range(2))
        if not any(r) or not any(s):
            continue
        if all(r[i] * s[j] == r[j] * s[i] for i in range(n) for j in range(n)):
            continue
        if pair(r, bar(s)) == 0:
            pairs.append((r, s))
    return pairs


def test_construct_k_on_random_pairs():
    for r, s in _random_admissible_pairs(np.random.default_rng(2024), 1000):
        k = construct_k(r, s)
        assert all(isinstance(x, int) for x in k)
        assert pair(r, bar(k)) != 0
        assert pair(k, bar(s)) == 0
