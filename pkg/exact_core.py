#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Exact Core
==========
Exact scalars, integer degree vectors, the bar and underline maps, the
standard pairing, degree windows and the exact linear algebra kernels used by
every other module.

Scalars are ``fractions.Fraction``. Degree vectors are plain tuples of ints.
Dense matrices are numpy object arrays holding Fractions; rank, nullspace,
inverse and determinant go through sympy's ``DomainMatrix`` over ``QQ``.
"""

import itertools
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from algebra_errors import ArityError

logger = logging.getLogger(__name__)

Scalar = Fraction
DegreeVector = Tuple[int, ...]
RationalVector = Tuple[Fraction, ...]

_DEGREE_PATTERN = re.compile(r"^\(\s*(-?\d+(\s*,\s*-?\d+)*)?\s*\)$")


def to_scalar(value: Union[int, str, Fraction]) -> Fraction:
    """Coerce an int, a ``p/q`` string or a Fraction to an exact scalar."""
    if isinstance(value, float):
        raise TypeError("floating point scalars are not accepted")
    return Fraction(value)


def degree(coords: Iterable[int]) -> DegreeVector:
    return tuple(int(c) for c in coords)


def rational_vector(coords: Iterable) -> RationalVector:
    return tuple(to_scalar(c) for c in coords)


def zero_degree(n: int) -> DegreeVector:
    return (0,) * n


def unit_vector(n: int, i: int) -> RationalVector:
    """Standard basis vector e_i (0-based index) as a rational vector."""
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))


def is_zero(r: Sequence) -> bool:
    return all(c == 0 for c in r)


def add(r: Sequence, s: Sequence) -> tuple:
    _check_same_arity(r, s)
    return tuple(a + b for a, b in zip(r, s))


def sub(r: Sequence, s: Sequence) -> tuple:
    _check_same_arity(r, s)
    return tuple(a - b for a, b in zip(r, s))


def neg(r: Sequence) -> tuple:
    return tuple(-a for a in r)


def scale(c, r: Sequence) -> tuple:
    return tuple(c * a for a in r)


def _check_same_arity(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ArityError(f"arity mismatch: {len(u)} != {len(v)}")


def pair(u: Sequence, v: Sequence) -> Fraction:
    """Standard symmetric pairing (u, v) = sum u_i v_i."""
    _check_same_arity(u, v)
    return Fraction(sum(a * b for a, b in zip(u, v)))


def bar(r: Sequence) -> tuple:
    """
    Symplectic partner of an even-arity vector.

    Args:
        r: vector of arity N = 2m

    Returns:
        (r_{m+1}, ..., r_{2m}, -r_1, ..., -r_m)
    """
    n = len(r)
    if n == 0 or n % 2:
        raise ArityError(f"bar is defined only for even arity, got {n}")
    m = n // 2
    return tuple(r[m:]) + tuple(-a for a in r[:m])


def underline(r: Sequence) -> tuple:
    """
    Contact partner of an odd-arity vector.

    Args:
        r: vector of arity M = 2m + 1, m >= 1

    Returns:
        bar(r_1..r_2m) + r_M * sum_{i<=2m} e_i - (sum_{i<=2m} r_i) * e_M
    """
    n = len(r)
    if n < 3 or n % 2 == 0:
        raise ArityError(f"underline is defined only for odd arity >= 3, got {n}")
    head = tuple(r[:-1])
    last = r[-1]
    return tuple(a + last for a in bar(head)) + (-sum(head),)


def in_G(r: Sequence) -> bool:
    """True iff underline(r) vanishes."""
    n = len(r)
    if n < 3 or n % 2 == 0:
        raise ArityError(f"G is defined only for odd arity >= 3, got {n}")
    m = (n - 1) // 2
    last = r[-1]
    return all(r[i] == last for i in range(m)) and all(r[i] == -last for i in range(m, 2 * m))


@dataclass(frozen=True)
class Window:
    """Finite truncation {r in Z^N : max_i |r_i| <= radius} of the grading."""

    radius: int
    arity: int

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError(f"window radius must be non-negative, got {self.radius}")
        if self.arity < 1:
            raise ArityError(f"window arity must be positive, got {self.arity}")

    def __iter__(self) -> Iterator[DegreeVector]:
        span = range(-self.radius, self.radius + 1)
        return iter(itertools.product(span, repeat=self.arity))

    def __len__(self) -> int:
        return (2 * self.radius + 1) ** self.arity

    def __contains__(self, r) -> bool:
        return len(r) == self.arity and all(abs(c) <= self.radius for c in r)

    def nonzero(self) -> List[DegreeVector]:
        return [r for r in self if not is_zero(r)]

    def points(self) -> np.ndarray:
        """All window degrees as an integer array of shape (len, arity)."""
        return np.array(list(self), dtype=np.int64).reshape(len(self), self.arity)

    def shrink(self, radius: int) -> "Window":
        return Window(min(radius, self.radius), self.arity)


# ---------------------------------------------------------------------------
# Text forms
# ---------------------------------------------------------------------------

def format_scalar(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_degree(r: Sequence[int]) -> str:
    """Serialize a degree vector as ``(1,-2,0,3)``."""
    return "(" + ",".join(str(int(c)) for c in r) + ")"


def format_vector(u: Sequence) -> str:
    """Serialize a rational vector as ``(p/q,...)``."""
    return "(" + ",".join(format_scalar(c) for c in u) + ")"


def parse_degree(text: str) -> DegreeVector:
    match = _DEGREE_PATTERN.match(text.strip())
    if not match:
        raise ValueError(f"not a degree vector: {text!r}")
    body = match.group(1)
    if not body:
        return ()
    return tuple(int(part) for part in body.split(","))


def parse_vector(text: str) -> RationalVector:
    stripped = text.strip()
    if not (stripped.startswith("(") and stripped.endswith(")")):
        raise ValueError(f"not a rational vector: {text!r}")
    body = stripped[1:-1].strip()
    if not body:
        return ()
    return tuple(Fraction(part.strip()) for part in body.split(","))


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------

def _qq(value) -> object:
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _from_sympy(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def domain_matrix(rows: Sequence[Sequence], ncols: Optional[int] = None) -> DomainMatrix:
    """Dense list-of-rows to a sparse DomainMatrix over QQ."""
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if nrows else 0
    entries: Dict[int, Dict[int, object]] = {}
    for i, row in enumerate(rows):
        row_entries = {j: _qq(v) for j, v in enumerate(row) if v != 0}
        if row_entries:
            entries[i] = row_entries
    return DomainMatrix(entries, (nrows, ncols), QQ)


def sparse_domain_matrix(rows: Sequence[Dict[int, object]], ncols: int) -> DomainMatrix:
    """Rows given as {column: value} dicts to a sparse DomainMatrix over QQ."""
    entries = {}
    for i, row in enumerate(rows):
        row_entries = {j: _qq(v) for j, v in row.items() if v != 0}
        if row_entries:
            entries[i] = row_entries
    return DomainMatrix(entries, (len(rows), ncols), QQ)


def exact_rank(rows: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    if not rows:
        return 0
    dm = domain_matrix(rows, ncols)
    if dm.shape[1] == 0:
        return 0
    return int(dm.rank())


def sparse_rank(rows: Sequence[Dict[int, object]], ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    return int(sparse_domain_matrix(rows, ncols).rank())


def _nullspace_of(dm: DomainMatrix, ncols: int) -> List[List[Fraction]]:
    if dm.shape[0] == 0:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    basis = dm.nullspace().to_Matrix()
    return [[_from_sympy(basis[i, j]) for j in range(basis.cols)] for i in range(basis.rows)]


def exact_nullspace(rows: Sequence[Sequence], ncols: int) -> List[List[Fraction]]:
    """Basis of {x : A x = 0} for the matrix with the given rows."""
    if ncols == 0:
        return []
    return _nullspace_of(domain_matrix(rows, ncols), ncols)


def sparse_nullspace(rows: Sequence[Dict[int, object]], ncols: int) -> List[List[Fraction]]:
    if ncols == 0:
        return []
    return _nullspace_of(sparse_domain_matrix(rows, ncols), ncols)


def exact_det(rows: Sequence[Sequence]) -> Fraction:
    return _from_qq(domain_matrix(rows).det())


def exact_inverse(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    inverse = domain_matrix(rows).to_dense().inv().to_Matrix()
    return [[_from_sympy(inverse[i, j]) for j in range(inverse.cols)] for i in range(inverse.rows)]


def solve_left(basis_columns: np.ndarray, target: np.ndarray) -> Optional[np.ndarray]:
    """
    Coordinates X with ``basis_columns @ X == target`` when they exist.

    The basis columns must be independent. Returns None when some column of
    target is outside their span.
    """
    n, k = basis_columns.shape
    if k == 0:
        return np.zeros((0, target.shape[1]), dtype=object) if is_zero_matrix(target) else None
    gram = basis_columns.T @ basis_columns
    left = frac_matrix(exact_inverse(gram.tolist())) @ basis_columns.T
    coords = left @ target
    if not is_zero_matrix(basis_columns @ coords - target):
        return None
    return coords


def independent_subset(vectors: Sequence[Sequence], ncols: int) -> List[int]:
    """Indices of a maximal independent prefix-greedy subset of the vectors."""
    chosen: List[int] = []
    rows: List[Sequence] = []
    rank = 0
    for index, vec in enumerate(vectors):
        trial = rows + [vec]
        trial_rank = exact_rank(trial, ncols)
        if trial_rank > rank:
            rows = trial
            rank = trial_rank
            chosen.append(index)
    return chosen


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    return reduce(lcm, (Fraction(v).denominator for v in values), 1)


# ---------------------------------------------------------------------------
# Dense object matrices
# ---------------------------------------------------------------------------

def frac_matrix(rows: Sequence[Sequence]) -> np.ndarray:
    data = [[Fraction(v) for v in row] for row in rows]
    if not data:
        return np.zeros((0, 0), dtype=object)
    out = np.empty((len(data), len(data[0])), dtype=object)
    for i, row in enumerate(data):
        for j, v in enumerate(row):
            out[i, j] = v
    return out


def zeros(nrows: int, ncols: int) -> np.ndarray:
    out = np.empty((nrows, ncols), dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def matrix_unit(n: int, i: int, j: int) -> np.ndarray:
    out = zeros(n, n)
    out[i, j] = Fraction(1)
    return out


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def is_zero_matrix(a: np.ndarray) -> bool:
    return a.size == 0 or all(v == 0 for v in a.flat)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact Kronecker product of object matrices."""
    out = zeros(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            if a[i, j] != 0:
                out[i * b.shape[0]:(i + 1) * b.shape[0], j * b.shape[1]:(j + 1) * b.shape[1]] = a[i, j] * b
    return out


def format_matrix(a: np.ndarray) -> str:
    return "[" + "; ".join(" ".join(format_scalar(v) for v in row) for row in a) + "]"


def nonzero_entries(a: np.ndarray) -> List[Tuple[int, int, Fraction]]:
    return [(i, j, Fraction(a[i, j])) for i in range(a.shape[0]) for j in range(a.shape[1]) if a[i, j] != 0]
