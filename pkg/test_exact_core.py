from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from algebra_errors import ArityError
from exact_core import (
    Window,
    add,
    bar,
    commutator,
    exact_det,
    exact_inverse,
    exact_nullspace,
    exact_rank,
    format_degree,
    format_vector,
    frac_matrix,
    identity,
    in_G,
    independent_subset,
    is_zero_matrix,
    kron,
    lcm_of_denominators,
    matrix_unit,
    pair,
    parse_degree,
    parse_vector,
    scale,
    solve_left,
    sparse_nullspace,
    sparse_rank,
    to_scalar,
    underline,
)

even_vectors = st.integers(min_value=1, max_value=3).flatmap(
    lambda m: st.lists(st.integers(-5, 5), min_size=2 * m, max_size=2 * m).map(tuple))


@pytest.mark.parametrize("r, expected", [
    ((1, 2), (2, -1)),
    ((1, 0, 0, 1), (0, 1, -1, 0)),
    ((3, -1, 2, 5), (2, 5, -3, 1)),
])
def test_bar_examples(r, expected):
    assert bar(r) == expected


@pytest.mark.parametrize("r", [(), (1,), (1, 2, 3)])
def test_bar_rejects_odd_arity(r):
    with pytest.raises(ArityError):
        bar(r)


@given(even_vectors)
def test_bar_is_skew(r):
    # bar(bar(r)) = -r and (bar r, r) = 0
    assert bar(bar(r)) == tuple(-c for c in r)
    assert pair(bar(r), r) == 0


@given(even_vectors, st.data())
def test_bar_pairing_is_antisymmetric(r, data):
    s = data.draw(st.lists(st.integers(-5, 5), min_size=len(r), max_size=len(r)).map(tuple))
    assert pair(bar(r), s) == -pair(bar(s), r)


def test_underline_and_G():
    assert underline((1, 0, 0)) == (0, -1, -1)
    assert underline((1, -1, 1)) == (0, 0, 0)
    assert in_G((1, -1, 1))
    assert in_G((0, 0, 0))
    assert not in_G((1, 0, 0))
    with pytest.raises(ArityError):
        underline((1, 2))


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_underline_is_linear(r):
    doubled = underline(scale(2, r))
    assert doubled == tuple(2 * c for c in underline(r))


def test_pair_rejects_mixed_arity():
    with pytest.raises(ArityError):
        pair((1, 2), (1, 2, 3))


def test_window_enumeration():
    window = Window(1, 2)
    points = list(window)
    assert len(window) == 9
    assert points[0] == (-1, -1)
    assert points[-1] == (1, 1)
    assert (0, 0) not in window.nonzero()
    assert (2, 0) not in window
    assert (0, 0, 0) not in window
    assert window.points().shape == (9, 2)
    assert window.shrink(0) == Window(0, 2)


def test_window_rejects_negative_radius():
    with pytest.raises(ValueError):
        Window(-1, 2)


@pytest.mark.parametrize("text, expected", [
    ("(1,-2,0,3)", (1, -2, 0, 3)),
    ("( 4 , 5 )", (4, 5)),
    ("()", ()),
])
def test_parse_degree(text, expected):
    assert parse_degree(text) == expected
    assert parse_degree(format_degree(expected)) == expected


def test_parse_degree_rejects_garbage():
    with pytest.raises(ValueError):
        parse_degree("1,2")
    with pytest.raises(ValueError):
        parse_vector("1/2")


def test_vector_text_form():
    u = (Fraction(1, 2), Fraction(-3), Fraction(0))
    assert format_vector(u) == "(1/2,-3,0)"
    assert parse_vector("(1/2,-3,0)") == u


def test_to_scalar_rejects_floats():
    assert to_scalar("3/4") == Fraction(3, 4)
    with pytest.raises(TypeError):
        to_scalar(0.5)


def test_rank_and_nullspace():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert exact_rank(rows) == 2
    null = exact_nullspace(rows, 3)
    assert len(null) == 1
    v = null[0]
    for row in rows:
        assert sum(Fraction(a) * b for a, b in zip(row, v)) == 0


def test_sparse_kernels_agree_with_dense():
    rows = [{0: 1, 2: -1}, {1: Fraction(1, 2), 2: 1}]
    assert sparse_rank(rows, 3) == 2
    null = sparse_nullspace(rows, 3)
    assert len(null) == 1
    v = null[0]
    assert v[0] - v[2] == 0
    assert Fraction(1, 2) * v[1] + v[2] == 0


def test_empty_system_has_full_nullspace():
    assert len(exact_nullspace([], 3)) == 3
    assert exact_rank([]) == 0


def test_det_and_inverse():
    rows = [[2, 1], [1, 1]]
    assert exact_det(rows) == 1
    inverse = frac_matrix(exact_inverse(rows))
    assert is_zero_matrix(frac_matrix(rows) @ inverse - identity(2))


def test_solve_left():
    basis = frac_matrix([[1, 0], [0, 1], [1, 1]])
    target = frac_matrix([[2], [3], [5]])
    coords = solve_left(basis, target)
    assert coords is not None
    assert list(coords[:, 0]) == [2, 3]
    assert solve_left(basis, frac_matrix([[1], [0], [0]])) is None


def test_independent_subset():
    vectors = [[1, 0], [2, 0], [0, 1], [1, 1]]
    assert independent_subset(vectors, 2) == [0, 2]


def test_lcm_of_denominators():
    assert lcm_of_denominators([Fraction(1, 2), Fraction(1, 3), 4]) == 6
    assert lcm_of_denominators([]) == 1


def test_matrix_units_commutator():
    e12 = matrix_unit(2, 0, 1)
    e21 = matrix_unit(2, 1, 0)
    h = commutator(e12, e21)
    assert h[0, 0] == 1 and h[1, 1] == -1


def test_kron_matches_numpy_shape_and_entries():
    a = frac_matrix([[1, 2], [0, 1]])
    b = frac_matrix([[0, 1], [1, 0]])
    out = kron(a, b)
    assert out.shape == (4, 4)
    expected = np.kron(np.array([[1, 2], [0, 1]]), np.array([[0, 1], [1, 0]]))
    assert [[int(v) for v in row] for row in out] == expected.tolist()


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_add_is_commutative(r, s):
    assert add(r, s) == add(s, r)
