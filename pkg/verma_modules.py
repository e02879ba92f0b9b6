#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Verma Modules
=============
Truncated induction M(W) = U(tau(H_N)) (x)_{U^0 + U^+} W over the triangular
decompositions of tau(H_N), and the window-approximate simple quotient.

Vectors of M(W) are combinations of PBW keys (monomial, top grade, top index)
with the monomial a sorted tuple of negative-part symbols. Generators act by
straightening: x y_1 rest = y_1 (x rest) + [x, y_1] rest.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra_errors import PreconditionError, WindowOutOfRangeError
from exact_core import (
    Window,
    add,
    format_degree,
    format_scalar,
    is_zero,
    is_zero_matrix,
    pair,
    rational_vector,
    solve_left,
    sparse_nullspace,
    zeros,
)
from graded_algebras import (
    AlgebraElement,
    AlgebraSpec,
    BasisSymbol,
    CentralK,
    Deriv,
    Family,
    GElem,
    algebra_for,
    format_symbol,
    symbol_key,
    triangular_part,
)
from loop_modules import POSITIVE_PARTS, HighestWeightSpace, WindowedModule, scalar_of
from roots_weyl import Weight

logger = logging.getLogger(__name__)

NEGATIVE_PARTS = ("-", "--")

Key = Tuple[Tuple[BasisSymbol, ...], Tuple[int, ...], int]
Vector = Dict[Key, Fraction]


# ---------------------------------------------------------------------------
# Tops
# ---------------------------------------------------------------------------

def part_zero_generators(spec: AlgebraSpec, tag: str, window: Window) -> List[BasisSymbol]:
    return [sym for sym in algebra_for(spec).generators(window) if triangular_part(spec, tag, sym) == "0"]


class TopModule:
    """Module over the part 0 of a decomposition, supported on finitely many grades."""

    def __init__(self, spec: AlgebraSpec, tag: str):
        if spec.family is not Family.TAU_H:
            raise PreconditionError(f"induction is set up over tau(H_N), not {spec.describe()}")
        self.spec = spec
        self.tag = tag

    @property
    def support(self) -> List[Tuple[int, ...]]:
        raise NotImplementedError

    def dimension(self, grade: Sequence[int]) -> int:
        raise NotImplementedError

    def operator(self, symbol: BasisSymbol, grade: Sequence[int]) -> Optional[np.ndarray]:
        """Matrix from grade to grade + deg, or None when the target grade is not in the support."""
        raise NotImplementedError

    def weights_at(self, grade: Sequence[int]) -> List[Weight]:
        raise NotImplementedError

    def element_operator(self, element: AlgebraElement, grade: Sequence[int]) -> Optional[np.ndarray]:
        out = None
        for sym, coeff in element.terms.items():
            mat = self.operator(sym, grade)
            if mat is not None:
                out = coeff * mat if out is None else out + coeff * mat
        return out

    def _compose(self, outer: BasisSymbol, inner: BasisSymbol, grade) -> Optional[np.ndarray]:
        first = self.operator(inner, grade)
        if first is None:
            return None
        second = self.operator(outer, add(grade, inner.r))
        return None if second is None else second @ first

    def closure_failures(self, window: Window) -> List[Dict[str, Any]]:
        """Part-0 generator pairs whose bracket is not represented on the support."""
        algebra = algebra_for(self.spec)
        datum = self.spec.datum
        gens = part_zero_generators(self.spec, self.tag, window)
        failures = []
        for a, b in itertools.combinations(range(len(gens)), 2):
            x, y = gens[a], gens[b]
            target = algebra.bracket(x, y)
            for k in self.support:
                terms = [self._compose(x, y, k), self._compose(y, x, k), self.element_operator(target, k)]
                signs = (1, -1, -1)
                residual = None
                for sign, term in zip(signs, terms):
                    if term is not None:
                        residual = sign * term if residual is None else residual + sign * term
                if residual is not None and not is_zero_matrix(residual):
                    failures.append({"inputs": [format_symbol(x, datum), format_symbol(y, datum), format_degree(k)],
                                     "residual": "nonzero"})
        return failures


class CharacterTop(TopModule):
    """
    One-dimensional top at grade 0: Cartan H_k acts by its label, K(u|0) by
    (u, level), D(u|0) by (u, delta); everything of nonzero degree acts as 0.
    """

    def __init__(self, spec: AlgebraSpec, tag: str, labels: Sequence, level: Sequence, delta: Sequence):
        super().__init__(spec, tag)
        datum = spec.datum
        self.labels = rational_vector(labels)
        self.level = rational_vector(level)
        self.delta = rational_vector(delta)
        if len(self.labels) != datum.rank or len(self.level) != spec.N or len(self.delta) != spec.N:
            raise PreconditionError("top character has the wrong shape")
        self._zero = tuple(0 for _ in range(spec.N))

    @property
    def support(self) -> List[Tuple[int, ...]]:
        return [self._zero]

    def dimension(self, grade: Sequence[int]) -> int:
        return 1 if tuple(grade) == self._zero else 0

    def value(self, symbol: BasisSymbol) -> Fraction:
        if not is_zero(symbol.r):
            return Fraction(0)
        if isinstance(symbol, GElem):
            datum = self.spec.datum
            if symbol.index in datum.cartan_indices:
                return self.labels[datum.cartan_indices.index(symbol.index)]
            return Fraction(0)
        if isinstance(symbol, CentralK):
            return pair(symbol.u, self.level)
        return pair(symbol.u, self.delta)

    def operator(self, symbol: BasisSymbol, grade: Sequence[int]) -> Optional[np.ndarray]:
        if tuple(grade) != self._zero or not is_zero(symbol.r):
            return None
        out = zeros(1, 1)
        out[0, 0] = self.value(symbol)
        return out

    def weights_at(self, grade: Sequence[int]) -> List[Weight]:
        return [Weight(self.labels, self.delta, self.level)] if tuple(grade) == self._zero else []


def character_top(spec: AlgebraSpec, tag: str, labels: Sequence, level: Optional[Sequence] = None,
                  delta: Optional[Sequence] = None, window: Optional[Window] = None) -> CharacterTop:
    """
    One-dimensional part-0 module; closure is checked on the window.

    Raises:
        PreconditionError: "top not part-0-closed", e.g. for a nonzero level
    """
    n = spec.N
    top = CharacterTop(spec, tag, labels, level or (0,) * n, delta or (0,) * n)
    failures = top.closure_failures(window or Window(1, n))
    if failures:
        raise PreconditionError(f"top not part-0-closed: {failures[0]['inputs']}")
    return top


class SubspaceTop(TopModule):
    """Top carried by a highest weight space, in its coordinates."""

    def __init__(self, space: HighestWeightSpace):
        super().__init__(space.module.spec, space.tag)
        self.space = space

    @property
    def support(self) -> List[Tuple[int, ...]]:
        return [k for k in sorted(self.space.basis) if self.space.dimension(k)]

    def dimension(self, grade: Sequence[int]) -> int:
        return self.space.dimension(grade)

    def operator(self, symbol: BasisSymbol, grade: Sequence[int]) -> Optional[np.ndarray]:
        grade = tuple(grade)
        target = tuple(add(grade, symbol.r))
        if target not in self.space.basis:
            raise WindowOutOfRangeError(f"grade {format_degree(target)} is outside the top window")
        if not self.space.dimension(target) or not self.space.dimension(grade):
            return None
        module = self.space.module
        image = module.operator(symbol, grade) @ self.space.basis[grade]
        coords = solve_left(self.space.basis[target], image)
        if coords is None:
            raise PreconditionError(f"top not part-0-closed: {format_symbol(symbol, self.spec.datum)}")
        return coords

    def weights_at(self, grade: Sequence[int]) -> List[Weight]:
        grade = tuple(grade)
        dim = self.dimension(grade)
        if not dim:
            return []
        datum = self.spec.datum
        zero = tuple(0 for _ in grade)
        n = self.spec.N

        def value(sym):
            c = scalar_of(self.operator(sym, grade))
            if c is None:
                raise PreconditionError(f"top is not a weight space at grade {format_degree(grade)}")
            return c

        alpha = tuple(value(GElem(h, zero)) for h in datum.cartan_indices)
        delta = tuple(value(Deriv(tuple(Fraction(int(j == i)) for j in range(n)), zero)) for i in range(n))
        omega = tuple(value(CentralK(tuple(Fraction(int(j == i)) for j in range(n)), zero)) for i in range(n))
        return [Weight(alpha, delta, omega)] * dim


def subspace_top(space: HighestWeightSpace, window: Optional[Window] = None) -> SubspaceTop:
    """Top from a highest weight space; part-0 closure is checked between its grades."""
    top = SubspaceTop(space)
    if window is not None:
        for sym in part_zero_generators(top.spec, top.tag, window):
            for k in top.support:
                if tuple(add(k, sym.r)) in space.basis:
                    top.operator(sym, k)
        logger.debug("subspace top closed on window %d", window.radius)
    return top


# ---------------------------------------------------------------------------
# Induced modules
# ---------------------------------------------------------------------------

def negative_depth(spec: AlgebraSpec, tag: str, sym: BasisSymbol) -> int:
    """Filtration degree of a negative-part symbol in the grading the decomposition lowers."""
    m = spec.N // 2
    height = 0
    if isinstance(sym, GElem):
        root = spec.datum.root_of(sym.index)
        height = abs(root.height) if root is not None else 0
    if tag == "levelzero":
        return height
    a = sym.r[m - 1]
    if tag == "rm-positive":
        return -a if a < 0 else height
    b = sym.r[2 * m - 1]
    if a < b:
        return b - a
    if a < 0:
        return -a
    return height


class InducedModule(WindowedModule):
    """
    M(W) truncated to monomials of total depth <= ``depth`` and grades in the window.
    """

    kind = "induced"

    def __init__(self, top: TopModule, depth: int, window: Window):
        super().__init__(top.spec)
        self.top = top
        self.tag = top.tag
        self.max_depth = depth
        self.window = window
        self._algebra = algebra_for(top.spec)
        generators = self._algebra.generators(window)
        parts = {sym: triangular_part(self.spec, self.tag, sym) for sym in generators}
        self.negatives = sorted((s for s in generators if parts[s] in NEGATIVE_PARTS), key=symbol_key)
        self.positives = [s for s in generators if parts[s] in POSITIVE_PARTS]
        self._memo: Dict[Tuple[BasisSymbol, Key], Vector] = {}
        self._basis: Dict[Tuple[int, ...], List[Key]] = {}
        self._index: Dict[Tuple[int, ...], Dict[Key, int]] = {}
        self._build_basis()

    def _monomials(self) -> List[Tuple[BasisSymbol, ...]]:
        depths = [negative_depth(self.spec, self.tag, s) for s in self.negatives]
        out = []

        def grow(start: int, mono: Tuple[BasisSymbol, ...], remaining: int):
            out.append(mono)
            for i in range(start, len(self.negatives)):
                if 0 < depths[i] <= remaining:
                    grow(i, mono + (self.negatives[i],), remaining - depths[i])

        grow(0, (), self.max_depth)
        return out

    def _build_basis(self):
        for mono in self._monomials():
            shift = tuple(sum(s.r[i] for s in mono) for i in range(self.N))
            for g in self.top.support:
                grade = tuple(add(g, shift))
                if grade not in self.window:
                    continue
                for i in range(self.top.dimension(g)):
                    self._basis.setdefault(grade, []).append((mono, tuple(g), i))
        for grade, keys in self._basis.items():
            self._index[grade] = {key: n for n, key in enumerate(keys)}
        logger.info("induced module (%s, depth %d): %d basis vectors over %d grades",
                    self.tag, self.max_depth, sum(len(k) for k in self._basis.values()), len(self._basis))

    def parameters(self) -> Dict[str, Any]:
        return {"spec": self.spec.describe(), "tag": self.tag, "depth": self.max_depth}

    def contains_grade(self, grade: Sequence[int]) -> bool:
        return tuple(grade) in self.window

    def basis(self, grade: Sequence[int]) -> List[Key]:
        return list(self._basis.get(tuple(grade), []))

    def dimension(self, grade: Sequence[int]) -> int:
        return len(self._basis.get(tuple(grade), []))

    def key_depth(self, key: Key) -> int:
        return sum(negative_depth(self.spec, self.tag, s) for s in key[0])

    def key_grade(self, key: Key) -> Tuple[int, ...]:
        mono, g, _ = key
        return tuple(int(c) for c in add(g, tuple(sum(s.r[i] for s in mono) for i in range(self.N))))

    def slice(self, depth: int) -> List[Key]:
        """Basis keys of exactly the given depth; depth 0 is the top."""
        return [k for keys in self._basis.values() for k in keys if self.key_depth(k) == depth]

    # -- action ----------------------------------------------------------

    def act(self, symbol: BasisSymbol, key: Key) -> Vector:
        memo_key = (symbol, key)
        cached = self._memo.get(memo_key)
        if cached is None:
            cached = self._straighten(symbol, key)
            self._memo[memo_key] = cached
        return cached

    def act_on(self, element, vector: Vector) -> Vector:
        out: Vector = {}
        terms = element.terms.items() if isinstance(element, AlgebraElement) else [(element, Fraction(1))]
        for sym, coeff in terms:
            for key, c in vector.items():
                for image, v in self.act(sym, key).items():
                    out[image] = out.get(image, Fraction(0)) + coeff * c * v
        return {k: v for k, v in out.items() if v}

    def _straighten(self, symbol: BasisSymbol, key: Key) -> Vector:
        mono, g, i = key
        part = triangular_part(self.spec, self.tag, symbol)
        if not mono:
            if part in POSITIVE_PARTS:
                return {}
            if part == "0":
                mat = self.top.operator(symbol, g)
                if mat is None:
                    return {}
                target = tuple(add(g, symbol.r))
                return {((), target, j): Fraction(mat[j, i]) for j in range(mat.shape[0]) if mat[j, i] != 0}
            return {((symbol,), g, i): Fraction(1)}
        first, rest = mono[0], mono[1:]
        if part in NEGATIVE_PARTS and symbol_key(symbol) <= symbol_key(first):
            return {((symbol,) + mono, g, i): Fraction(1)}
        out: Vector = {}
        for inner, c in self.act(symbol, (rest, g, i)).items():
            for image, v in self.act(first, inner).items():
                out[image] = out.get(image, Fraction(0)) + c * v
        commutator = self._algebra.bracket(symbol, first)
        for sym, coeff in commutator.terms.items():
            for image, v in self.act(sym, (rest, g, i)).items():
                out[image] = out.get(image, Fraction(0)) + coeff * v
        return {k: v for k, v in out.items() if v}

    def operator(self, symbol: BasisSymbol, grade: Sequence[int]) -> np.ndarray:
        grade = tuple(grade)
        target = tuple(add(grade, symbol.r))
        source_keys = self.basis(grade)
        index = self._index.get(target, {})
        out = zeros(len(index), len(source_keys))
        for col, key in enumerate(source_keys):
            for image, v in self.act(symbol, key).items():
                row = index.get(image)
                if row is None:
                    raise WindowOutOfRangeError(
                        f"{format_symbol(symbol, self.spec.datum)} leaves the truncation at grade {format_degree(grade)}")
                out[row, col] = v
        return out

    def weights_at(self, grade: Sequence[int]) -> List[Weight]:
        out = []
        d = self.spec.datum.rank
        zero = (0,) * self.N
        for mono, g, i in self.basis(grade):
            weight = self.top.weights_at(g)[i]
            for sym in mono:
                alpha = (0,) * d
                if isinstance(sym, GElem):
                    root = self.spec.datum.root_of(sym.index)
                    if root is not None:
                        alpha = root.dynkin_labels()
                weight = weight + Weight(alpha, sym.r, zero)
            out.append(weight)
        return out

    def format_key(self, key: Key) -> str:
        mono, g, i = key
        word = " ".join(format_symbol(s, self.spec.datum) for s in mono)
        return f"{word + ' ' if word else ''}v[{format_degree(g)},{i}]"


def induced_module(top: TopModule, depth: int, window: Window) -> InducedModule:
    """
    Verma-style induction truncated at ``depth``.

    Raises:
        PreconditionError: depth < 1
    """
    if depth < 1:
        raise PreconditionError("induction depth must be at least 1")
    return InducedModule(top, depth, window)


# ---------------------------------------------------------------------------
# Simple quotient
# ---------------------------------------------------------------------------

QUOTIENT_LABEL = "window-approximate simple quotient"


@dataclass
class QuotientWindow:
    """M(W) modulo the window radical, block by block in (grade, depth)."""

    module: InducedModule
    block_dims: Dict[Tuple[Tuple[int, ...], int], int]
    radical: Dict[Tuple[Tuple[int, ...], int], List[Vector]]
    label: str = QUOTIENT_LABEL
    notes: List[str] = field(default_factory=list)

    def radical_dimension(self, grade: Sequence[int], depth: Optional[int] = None) -> int:
        return sum(len(v) for (g, d), v in self.radical.items()
                   if g == tuple(grade) and (depth is None or d == depth))

    def dimension(self, grade: Sequence[int], depth: Optional[int] = None) -> int:
        total = sum(n for (g, d), n in self.block_dims.items() if g == tuple(grade) and (depth is None or d == depth))
        return total - self.radical_dimension(grade, depth)

    def top_dimension(self) -> int:
        return sum(n for (g, d), n in self.block_dims.items() if d == 0)

    def summary(self) -> Dict[str, Any]:
        blocks = []
        for (g, d), n in sorted(self.block_dims.items()):
            blocks.append({
                "grade": format_degree(g),
                "depth": d,
                "module_dim": n,
                "radical_dim": len(self.radical.get((g, d), [])),
            })
        return {"label": self.label, "blocks": blocks, "notes": self.notes}

    def null_vectors(self) -> List[str]:
        out = []
        for block in sorted(self.radical):
            for vector in self.radical[block]:
                out.append(" + ".join(f"{format_scalar(c)}*{self.module.format_key(k)}"
                                      for k, c in sorted(vector.items(), key=lambda kv: self.module.format_key(kv[0]))))
        return out


def _top_functionals(module: InducedModule, keys: List[Key], depth: int) -> List[Dict[int, Fraction]]:
    rows: Dict[tuple, Dict[int, Fraction]] = {}

    def descend(sequence: Tuple[BasisSymbol, ...], vectors: List[Vector]):
        for x in module.positives:
            images = [module.act_on(x, v) for v in vectors]
            if not any(images):
                continue
            path = sequence + (x,)
            for col, image in enumerate(images):
                for key, c in image.items():
                    if not key[0]:
                        rows.setdefault((path, key), {})[col] = c
            if len(path) < depth:
                descend(path, images)

    descend((), [{key: Fraction(1)} for key in keys])
    return list(rows.values())


def simple_quotient_window(module: InducedModule) -> QuotientWindow:
    """
    Quotient by the vectors whose images under every sequence of window
    positive generators have zero top component. Computed per (grade, depth)
    block; the top is never reduced.
    """
    blocks: Dict[Tuple[Tuple[int, ...], int], List[Key]] = {}
    for grade, keys in module._basis.items():
        for key in keys:
            blocks.setdefault((grade, module.key_depth(key)), []).append(key)

    block_dims = {block: len(keys) for block, keys in blocks.items()}
    radical: Dict[Tuple[Tuple[int, ...], int], List[Vector]] = {}
    for (grade, depth), keys in sorted(blocks.items()):
        if depth == 0:
            continue
        rows = _top_functionals(module, keys, depth)
        null = sparse_nullspace(rows, len(keys)) if rows else \
            [[Fraction(int(i == j)) for j in range(len(keys))] for i in range(len(keys))]
        if null:
            radical[(grade, depth)] = [{keys[j]: c for j, c in enumerate(vec) if c} for vec in null]
    quotient = QuotientWindow(module, block_dims, radical,
                              notes=["radical computed from window positive generators only"])
    logger.info("%s: radical dimension %d of %d", QUOTIENT_LABEL,
                sum(len(v) for v in radical.values()), sum(block_dims.values()))
    return quotient
