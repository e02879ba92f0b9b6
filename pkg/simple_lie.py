#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Simple Lie Algebras
===================
The finite-dimensional simple Lie algebra sl_n realized on traceless
matrices: basis, structure constants, trace form, roots and co-roots, plus the
finite-dimensional irreducible modules built as symmetric and exterior powers
of the defining module and their duals.

Basis order is the off-diagonal units E[i,j] (i != j, lexicographic) followed
by the Cartan elements H[k] = E[k,k] - E[k+1,k+1]. Labels are 1-based.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra_errors import CapabilityError, PreconditionError
from exact_core import (
    commutator,
    exact_inverse,
    format_scalar,
    identity,
    is_zero_matrix,
    matrix_unit,
    zeros,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Root:
    """Root eps_i - eps_j of sl_n (0-based i != j)."""

    i: int
    j: int
    n: int

    @property
    def positive(self) -> bool:
        return self.i < self.j

    @property
    def height(self) -> int:
        return self.j - self.i

    def negative(self) -> "Root":
        return Root(self.j, self.i, self.n)

    def simple_coefficients(self) -> Tuple[int, ...]:
        """Coefficients against the simple roots alpha_1..alpha_{n-1}."""
        lo, hi = sorted((self.i, self.j))
        sign = 1 if self.positive else -1
        return tuple(sign if lo <= k < hi else 0 for k in range(self.n - 1))

    def dynkin_labels(self) -> Tuple[int, ...]:
        """alpha(H_k) for k = 1..n-1, i.e. coordinates against fundamental weights."""
        return tuple(
            (k == self.i) - (k + 1 == self.i) - (k == self.j) + (k + 1 == self.j)
            for k in range(self.n - 1)
        )

    def label(self) -> str:
        return f"e{self.i + 1}-e{self.j + 1}"


@dataclass(eq=False)
class SimpleLieDatum:
    """Structure data of sl_n. Hashes by identity; build through build_sl."""

    n: int
    labels: List[str]
    matrices: List[np.ndarray]
    structure: List[List[Dict[int, Fraction]]]
    gram: List[List[Fraction]]
    roots: List[Root]
    root_index: Dict[Root, int]
    cartan_indices: List[int]

    @property
    def rank(self) -> int:
        return self.n - 1

    @property
    def dimension(self) -> int:
        return len(self.labels)

    @property
    def simple_roots(self) -> List[Root]:
        return [Root(k, k + 1, self.n) for k in range(self.n - 1)]

    @property
    def positive_roots(self) -> List[Root]:
        return [a for a in self.roots if a.positive]

    @property
    def highest_root(self) -> Root:
        return Root(0, self.n - 1, self.n)

    def bracket(self, a: int, b: int) -> Dict[int, Fraction]:
        return self.structure[a][b]

    def form(self, a: int, b: int) -> Fraction:
        """Trace form <x_a, x_b>."""
        return self.gram[a][b]

    def root_vector(self, alpha: Root) -> int:
        return self.root_index[alpha]

    def root_of(self, index: int) -> Optional[Root]:
        """Root of a basis element, None for Cartan elements."""
        if index >= len(self.roots):
            return None
        return self.roots[index]

    def coroot(self, alpha: Root) -> Dict[int, Fraction]:
        """h_alpha = E_ii - E_jj in the H basis."""
        lo, hi = sorted((alpha.i, alpha.j))
        sign = Fraction(1 if alpha.positive else -1)
        return {self.cartan_indices[k]: sign for k in range(lo, hi)}

    def coordinates(self, matrix: np.ndarray) -> Dict[int, Fraction]:
        """Expand a traceless n x n matrix in the basis."""
        coords: Dict[int, Fraction] = {}
        for index, root in enumerate(self.roots):
            value = Fraction(matrix[root.i, root.j])
            if value:
                coords[index] = value
        running = Fraction(0)
        for k, index in enumerate(self.cartan_indices):
            running += Fraction(matrix[k, k])
            if running:
                coords[index] = running
        return coords

    def matrix_of(self, element: Dict[int, Fraction]) -> np.ndarray:
        out = zeros(self.n, self.n)
        for index, coeff in element.items():
            out = out + coeff * self.matrices[index]
        return out

    def cartan_matrix(self) -> List[List[int]]:
        d = self.rank
        return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(d)] for i in range(d)]

    def inverse_cartan(self) -> List[List[Fraction]]:
        return inverse_cartan_a(self.rank)

    def format_element(self, element: Dict[int, Fraction]) -> str:
        parts = [f"{format_scalar(c)}*{self.labels[i]}" for i, c in sorted(element.items())]
        return " + ".join(parts) if parts else "0"


@lru_cache(maxsize=None)
def inverse_cartan_a(d: int) -> List[List[Fraction]]:
    cartan = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(d)] for i in range(d)]
    return exact_inverse(cartan)


@lru_cache(maxsize=None)
def build_sl(n: int) -> SimpleLieDatum:
    """
    Build sl_n with the trace form.

    Args:
        n: matrix size, n >= 2

    Returns:
        SimpleLieDatum with structure constants verified for antisymmetry and Jacobi
    """
    if n < 2:
        raise PreconditionError(f"sl_n requires n >= 2, got {n}")

    roots = [Root(i, j, n) for i in range(n) for j in range(n) if i != j]
    labels = [f"E[{a.i + 1},{a.j + 1}]" for a in roots]
    matrices = [matrix_unit(n, a.i, a.j) for a in roots]
    cartan_indices = []
    for k in range(n - 1):
        h = matrix_unit(n, k, k) - matrix_unit(n, k + 1, k + 1)
        cartan_indices.append(len(matrices))
        labels.append(f"H[{k + 1}]")
        matrices.append(h)

    datum = SimpleLieDatum(
        n=n,
        labels=labels,
        matrices=matrices,
        structure=[],
        gram=[],
        roots=roots,
        root_index={a: idx for idx, a in enumerate(roots)},
        cartan_indices=cartan_indices,
    )
    dim = len(matrices)
    datum.structure = [
        [datum.coordinates(commutator(matrices[a], matrices[b])) for b in range(dim)] for a in range(dim)
    ]
    datum.gram = [[Fraction(np.trace(matrices[a] @ matrices[b])) for b in range(dim)] for a in range(dim)]
    _verify_structure(datum)
    logger.debug("built sl_%d: dim %d, %d roots", n, dim, len(roots))
    return datum


def _verify_structure(datum: SimpleLieDatum):
    dim = datum.dimension
    for a in range(dim):
        for b in range(dim):
            neg = {k: -v for k, v in datum.structure[b][a].items()}
            if datum.structure[a][b] != neg:
                raise AssertionError(f"antisymmetry fails for {datum.labels[a]}, {datum.labels[b]}")
    for a, b, c in itertools.combinations(range(dim), 3):
        total: Dict[int, Fraction] = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            for k, v in datum.structure[y][z].items():
                for t, w in datum.structure[x][k].items():
                    total[t] = total.get(t, Fraction(0)) + v * w
        if any(total.values()):
            raise AssertionError(f"Jacobi fails for {datum.labels[a]}, {datum.labels[b]}, {datum.labels[c]}")


# ---------------------------------------------------------------------------
# Matrix representations from tensor constructions
# ---------------------------------------------------------------------------

def symmetric_power_basis(n: int, k: int) -> List[Tuple[int, ...]]:
    return list(itertools.combinations_with_replacement(range(n), k))


def exterior_power_basis(n: int, k: int) -> List[Tuple[int, ...]]:
    return list(itertools.combinations(range(n), k))


def symmetric_power_action(x: np.ndarray, k: int) -> np.ndarray:
    """Derivation action of an n x n matrix on Sym^k of its defining space."""
    n = x.shape[0]
    basis = symmetric_power_basis(n, k)
    position = {mono: idx for idx, mono in enumerate(basis)}
    out = zeros(len(basis), len(basis))
    for col, mono in enumerate(basis):
        for p, factor in enumerate(mono):
            for a in range(n):
                coeff = x[a, factor]
                if coeff == 0:
                    continue
                image = tuple(sorted(mono[:p] + (a,) + mono[p + 1:]))
                out[position[image], col] += coeff
    return out


def exterior_power_action(x: np.ndarray, k: int) -> np.ndarray:
    """Derivation action of an n x n matrix on the k-th exterior power."""
    n = x.shape[0]
    basis = exterior_power_basis(n, k)
    position = {mono: idx for idx, mono in enumerate(basis)}
    out = zeros(len(basis), len(basis))
    for col, mono in enumerate(basis):
        for p, factor in enumerate(mono):
            for a in range(n):
                coeff = x[a, factor]
                if coeff == 0:
                    continue
                replaced = mono[:p] + (a,) + mono[p + 1:]
                if len(set(replaced)) < k:
                    continue
                order = sorted(range(k), key=lambda t: replaced[t])
                sign = _permutation_sign(order)
                out[position[tuple(sorted(replaced))], col] += sign * coeff
    return out


def _permutation_sign(order: Sequence[int]) -> int:
    sign = 1
    seen = list(order)
    for i in range(len(seen)):
        for j in range(i + 1, len(seen)):
            if seen[i] > seen[j]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# Finite-dimensional irreducible modules
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class FiniteModule:
    """Finite-dimensional g-module with exact action matrices per basis element."""

    datum: SimpleLieDatum
    highest_weight: Tuple[int, ...]
    construction: str
    matrices: List[np.ndarray]
    weights: List[Tuple[Fraction, ...]] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return self.matrices[0].shape[0] if self.matrices else 0

    def action(self, index: int) -> np.ndarray:
        return self.matrices[index]

    def act(self, element: Dict[int, Fraction]) -> np.ndarray:
        out = zeros(self.dimension, self.dimension)
        for index, coeff in element.items():
            out = out + coeff * self.matrices[index]
        return out

    def highest_weight_vectors(self) -> List[int]:
        """Basis indices killed by every positive root vector."""
        positive = [self.datum.root_vector(a) for a in self.datum.positive_roots]
        return [
            v for v in range(self.dimension)
            if all(all(self.matrices[p][u, v] == 0 for u in range(self.dimension)) for p in positive)
        ]

    def bracket_failures(self) -> List[Tuple[str, str]]:
        failures = []
        dim = self.datum.dimension
        for a in range(dim):
            for b in range(a + 1, dim):
                lhs = commutator(self.matrices[a], self.matrices[b])
                if not is_zero_matrix(lhs - self.act(self.datum.bracket(a, b))):
                    failures.append((self.datum.labels[a], self.datum.labels[b]))
        return failures

    def nilpotency_degree(self, index: int) -> Optional[int]:
        power = identity(self.dimension)
        for k in range(1, self.dimension + 2):
            power = self.matrices[index] @ power
            if is_zero_matrix(power):
                return k
        return None


def weyl_dimension(highest_weight: Sequence[int]) -> int:
    """Weyl dimension formula for sl_n with Dynkin labels highest_weight."""
    n = len(highest_weight) + 1
    num = Fraction(1)
    for i in range(n):
        for j in range(i + 1, n):
            num *= Fraction(sum(highest_weight[k] + 1 for k in range(i, j)), j - i)
    return int(num)


def _module_from_defining_action(datum, highest_weight, construction, builder) -> FiniteModule:
    matrices = [builder(x) for x in datum.matrices]
    module = FiniteModule(datum, tuple(highest_weight), construction, matrices)
    dim = module.dimension
    module.weights = [
        tuple(Fraction(matrices[h][v, v]) for h in datum.cartan_indices) for v in range(dim)
    ]
    return module


def irrep(datum: SimpleLieDatum, highest_weight: Sequence[int]) -> FiniteModule:
    """
    Finite-dimensional irreducible module with the given Dynkin labels.

    Supported: every weight of sl_2; for sl_n the trivial, defining, dual,
    symmetric powers, duals of symmetric powers and exterior powers.

    Raises:
        CapabilityError: unsupported highest weight
    """
    labels = tuple(int(c) for c in highest_weight)
    d = datum.rank
    if len(labels) != d or any(c < 0 for c in labels):
        raise PreconditionError(f"highest weight {labels} is not dominant integral for sl_{datum.n}")

    nonzero = [k for k, c in enumerate(labels) if c]
    if not nonzero:
        module = FiniteModule(datum, labels, "trivial", [zeros(1, 1) for _ in datum.matrices])
        module.weights = [tuple(Fraction(0) for _ in range(d))]
        return module

    if len(nonzero) == 1:
        k, c = nonzero[0], labels[nonzero[0]]
        if k == 0:
            module = _module_from_defining_action(
                datum, labels, f"Sym^{c}", lambda x: symmetric_power_action(x, c))
        elif k == d - 1:
            module = _module_from_defining_action(
                datum, labels, f"dual Sym^{c}", lambda x: -symmetric_power_action(x, c).T)
        elif c == 1:
            module = _module_from_defining_action(
                datum, labels, f"Lambda^{k + 1}", lambda x: exterior_power_action(x, k + 1))
        else:
            raise CapabilityError(f"highest weight {labels} is not supported for sl_{datum.n}")
    else:
        raise CapabilityError(f"highest weight {labels} is not supported for sl_{datum.n}")

    expected = weyl_dimension(labels)
    if module.dimension != expected:
        raise AssertionError(f"{module.construction} has dimension {module.dimension}, expected {expected}")
    return module
