#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Graded Algebras
===============
Basis symbols, algebra elements and bracket evaluation for the toroidal
family: the toroidal and full toroidal algebras, tau(S_N), the Hamiltonian
tau(H_N), the contact tau(D_M), the minimal extended affine algebra and the
bare derivation algebras H_N, S_N, D_M and Der A.

Every family shares one bracket table (the full toroidal rules). Quotients are
handled by ``normal_form``, which projects raw symbols onto a fixed set of
coordinate symbols per degree:

* central symbols in Z at r != 0 are reduced modulo Q.r and expanded as
  sum u_i K(e_i, r)
* in Z/K they reduce to lambda K(bar r, r), in Z/K_M to lambda K(underline r, r)
* derivations are expanded in the standard basis or, for the Hamiltonian and
  contact families, written as lambda D(bar r, r) / lambda D(underline r, r)

The module also carries the triangular decompositions of tau(H_N) and the
Jacobi and closure sweeps.
"""

import logging
import re
import time
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from algebra_errors import InadmissibleElementError, PreconditionError
from exact_core import (
    DegreeVector,
    RationalVector,
    Window,
    add,
    bar,
    exact_rank,
    format_degree,
    format_scalar,
    format_vector,
    in_G,
    is_zero,
    pair,
    parse_degree,
    parse_vector,
    rational_vector,
    scale,
    sub,
    underline,
    unit_vector,
    zero_degree,
)
from simple_lie import SimpleLieDatum, build_sl
from verification_report import VerificationReport, choose_tuples, run_sweep

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Basis symbols
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GElem:
    """X(r) = X (x) t^r for the g-basis element with the given index."""

    index: int
    r: DegreeVector


@dataclass(frozen=True)
class CentralK:
    """Central symbol K(u, r)."""

    u: RationalVector
    r: DegreeVector


@dataclass(frozen=True)
class Deriv:
    """Derivation D(u, r) = t^r sum u_i d_i."""

    u: RationalVector
    r: DegreeVector


BasisSymbol = Union[GElem, CentralK, Deriv]

_KIND_ORDER = {GElem: 0, CentralK: 1, Deriv: 2}


def symbol_key(sym: BasisSymbol) -> tuple:
    if isinstance(sym, GElem):
        return (0, sym.r, (sym.index,))
    return (_KIND_ORDER[type(sym)], sym.r, sym.u)


def symbol_degree(sym: BasisSymbol) -> DegreeVector:
    return sym.r


def hamiltonian(r: Sequence[int]) -> Deriv:
    """h_r = D(bar r, r)."""
    r = tuple(int(c) for c in r)
    return Deriv(rational_vector(bar(r)), r)


def contact(r: Sequence[int]) -> Deriv:
    """Contact generator D(underline r, r)."""
    r = tuple(int(c) for c in r)
    return Deriv(rational_vector(underline(r)), r)


def degree_derivation(i: int, n: int) -> Deriv:
    """d_i = D(e_i, 0), 0-based i."""
    return Deriv(unit_vector(n, i), zero_degree(n))


def degree_central(i: int, n: int) -> CentralK:
    """K_i = K(e_i, 0), 0-based i."""
    return CentralK(unit_vector(n, i), zero_degree(n))


def format_symbol(sym: BasisSymbol, datum: Optional[SimpleLieDatum] = None) -> str:
    if isinstance(sym, GElem):
        label = datum.labels[sym.index] if datum is not None else str(sym.index)
        return f"X[{label}]{format_degree(sym.r)}"
    name = "K" if isinstance(sym, CentralK) else "D"
    return f"{name}({format_vector(sym.u)}|{format_degree(sym.r)})"


_SYMBOL_PATTERN = re.compile(r"^(?:X\[(?P<label>.+)\](?P<gdeg>\(.*\))|(?P<kind>[KD])\((?P<vec>\([^|]*\))\|(?P<deg>\(.*\))\))$")


def parse_symbol(text: str, datum: Optional[SimpleLieDatum] = None) -> BasisSymbol:
    """Inverse of format_symbol."""
    match = _SYMBOL_PATTERN.match(text.strip())
    if not match:
        raise ValueError(f"not a basis symbol: {text!r}")
    if match.group("label") is not None:
        label = match.group("label")
        if datum is not None and label in datum.labels:
            index = datum.labels.index(label)
        else:
            index = int(label)
        return GElem(index, parse_degree(match.group("gdeg")))
    u = parse_vector(match.group("vec"))
    r = parse_degree(match.group("deg"))
    return CentralK(u, r) if match.group("kind") == "K" else Deriv(u, r)


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

class AlgebraElement:
    """Finite rational combination of basis symbols."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[BasisSymbol, Fraction]] = None):
        self.terms: Dict[BasisSymbol, Fraction] = {}
        for sym, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff:
                self.terms[sym] = coeff

    @classmethod
    def of(cls, sym: BasisSymbol, coeff=1) -> "AlgebraElement":
        return cls({sym: Fraction(coeff)})

    @classmethod
    def combine(cls, pairs: Iterable[Tuple[BasisSymbol, Fraction]]) -> "AlgebraElement":
        out: Dict[BasisSymbol, Fraction] = {}
        for sym, coeff in pairs:
            out[sym] = out.get(sym, Fraction(0)) + coeff
        return cls(out)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.terms)
        for sym, coeff in other.terms.items():
            out[sym] = out.get(sym, Fraction(0)) + coeff
        return AlgebraElement(out)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other * -1

    def __mul__(self, c) -> "AlgebraElement":
        c = Fraction(c)
        return AlgebraElement({sym: c * coeff for sym, coeff in self.terms.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "AlgebraElement":
        return self * -1

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self):
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self.terms)

    def sorted_terms(self) -> List[Tuple[BasisSymbol, Fraction]]:
        return sorted(self.terms.items(), key=lambda item: symbol_key(item[0]))

    def degrees(self) -> List[DegreeVector]:
        return sorted({sym.r for sym in self.terms})

    def coefficient(self, sym: BasisSymbol) -> Fraction:
        return self.terms.get(sym, Fraction(0))

    def format(self, datum: Optional[SimpleLieDatum] = None) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{format_scalar(c)}*{format_symbol(s, datum)}" for s, c in self.sorted_terms())

    def __repr__(self) -> str:
        return f"AlgebraElement({self.format()})"


def as_element(x: Union[BasisSymbol, AlgebraElement]) -> AlgebraElement:
    return x if isinstance(x, AlgebraElement) else AlgebraElement.of(x)


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

class Family(str, Enum):
    TOROIDAL = "toroidal"
    FULL_TOROIDAL = "fullToroidal"
    TAU_S = "tauS"
    TAU_H = "tauH"
    TAU_D = "tauD"
    MINIMAL_EALA = "minimalEALA"
    HN = "HN"
    SN = "SN"
    DM = "DM"
    DER_A = "DerA"


# central mode, derivation mode, contains g
_FAMILY_TABLE = {
    Family.TOROIDAL: ("Z", "degree0", True),
    Family.FULL_TOROIDAL: ("Z", "all", True),
    Family.TAU_S: ("Z", "S", True),
    Family.TAU_H: ("Z/K", "H", True),
    Family.TAU_D: ("Z/K_M", "D", True),
    Family.MINIMAL_EALA: ("degree0", "degree0", True),
    Family.HN: (None, "HN", False),
    Family.SN: (None, "S", False),
    Family.DM: (None, "DM", False),
    Family.DER_A: (None, "all", False),
}

_EVEN_FAMILIES = {Family.TAU_H, Family.HN}
_ODD_FAMILIES = {Family.TAU_D, Family.DM}


@dataclass(frozen=True)
class AlgebraSpec:
    """Which algebra: family, number of variables N and the sl_n of the g-part."""

    family: Family
    N: int
    sl_n: Optional[int] = 2

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.N < 1:
            raise PreconditionError(f"N must be positive, got {self.N}")
        if self.family in _EVEN_FAMILIES and (self.N % 2 or self.N < 2):
            raise PreconditionError(f"{self.family.value} requires even N >= 2, got {self.N}")
        if self.family in _ODD_FAMILIES and (self.N % 2 == 0 or self.N < 3):
            raise PreconditionError(f"{self.family.value} requires odd N >= 3, got {self.N}")
        if self.has_g and (self.sl_n is None or self.sl_n < 2):
            raise PreconditionError(f"{self.family.value} requires a simple algebra sl_n, n >= 2")
        if not self.has_g:
            object.__setattr__(self, "sl_n", None)

    @property
    def central_mode(self) -> Optional[str]:
        return _FAMILY_TABLE[self.family][0]

    @property
    def derivation_mode(self) -> str:
        return _FAMILY_TABLE[self.family][1]

    @property
    def has_g(self) -> bool:
        return _FAMILY_TABLE[self.family][2]

    @property
    def datum(self) -> Optional[SimpleLieDatum]:
        return build_sl(self.sl_n) if self.has_g else None

    def describe(self) -> str:
        g = f", g=sl{self.sl_n}" if self.has_g else ""
        return f"{self.family.value}(N={self.N}{g})"


# ---------------------------------------------------------------------------
# Bracket and normal form
# ---------------------------------------------------------------------------

def _fvec(r: Sequence) -> RationalVector:
    return tuple(Fraction(c) for c in r)


def _proportional(u: RationalVector, b: RationalVector) -> Optional[Fraction]:
    """lambda with u = lambda b, None if u is not on the line through b."""
    lam = pair(u, b) / pair(b, b)
    return lam if all(x == lam * y for x, y in zip(u, b)) else None


class GradedAlgebra:
    """
    Bracket evaluation and normal forms for one AlgebraSpec.

    Brackets of basis symbols are cached; elements are combined linearly.
    """

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec
        self.N = spec.N
        self.datum = spec.datum
        self._zero = zero_degree(spec.N)
        self._cache: Dict[Tuple[BasisSymbol, BasisSymbol], AlgebraElement] = {}

    # -- admissibility -----------------------------------------------------

    def _check_symbol(self, sym: BasisSymbol):
        if len(sym.r) != self.N:
            raise InadmissibleElementError(f"degree {sym.r} has wrong arity for N={self.N}")
        if isinstance(sym, GElem):
            if not self.spec.has_g or not 0 <= sym.index < self.datum.dimension:
                raise InadmissibleElementError(f"g-symbol {sym} not admissible in {self.spec.describe()}")
        elif isinstance(sym, CentralK):
            if self.spec.central_mode is None:
                raise InadmissibleElementError(f"central symbol not admissible in {self.spec.describe()}")
            if len(sym.u) != self.N:
                raise InadmissibleElementError(f"central vector {sym.u} has wrong arity")
        elif isinstance(sym, Deriv):
            if len(sym.u) != self.N:
                raise InadmissibleElementError(f"derivation vector {sym.u} has wrong arity")
        else:
            raise InadmissibleElementError(f"unknown symbol {sym!r}")

    # -- normal form ---------------------------------------------------------

    def normal_form(self, element: Union[BasisSymbol, AlgebraElement]) -> AlgebraElement:
        element = as_element(element)
        g_terms: Dict[BasisSymbol, Fraction] = {}
        central: Dict[DegreeVector, RationalVector] = {}
        derivs: Dict[DegreeVector, RationalVector] = {}
        for sym, coeff in element.terms.items():
            self._check_symbol(sym)
            if isinstance(sym, GElem):
                g_terms[sym] = g_terms.get(sym, Fraction(0)) + coeff
            elif isinstance(sym, CentralK):
                prev = central.get(sym.r, _fvec(self._zero))
                central[sym.r] = add(prev, scale(coeff, sym.u))
            else:
                prev = derivs.get(sym.r, _fvec(self._zero))
                derivs[sym.r] = add(prev, scale(coeff, sym.u))

        out: Dict[BasisSymbol, Fraction] = dict(g_terms)
        for r, u in central.items():
            for sym, coeff in self._reduce_central(u, r):
                out[sym] = out.get(sym, Fraction(0)) + coeff
        for r, u in derivs.items():
            for sym, coeff in self._reduce_derivation(u, r):
                out[sym] = out.get(sym, Fraction(0)) + coeff
        return AlgebraElement(out)

    def _expand(self, cls, u: RationalVector, r: DegreeVector):
        return [(cls(unit_vector(self.N, i), r), c) for i, c in enumerate(u) if c]

    def _reduce_central(self, u: RationalVector, r: DegreeVector):
        if is_zero(u):
            return []
        mode = self.spec.central_mode
        if is_zero(r):
            return self._expand(CentralK, u, r)
        if mode == "Z":
            rr = _fvec(r)
            reduced = sub(u, scale(pair(u, rr) / pair(rr, rr), rr))
            return self._expand(CentralK, reduced, r)
        if mode == "Z/K":
            b = _fvec(bar(r))
            lam = pair(u, b) / pair(b, b)
            return [(CentralK(b, r), lam)] if lam else []
        if mode == "Z/K_M":
            if in_G(r):
                return []
            b = _fvec(underline(r))
            lam = pair(u, b) / pair(b, b)
            return [(CentralK(b, r), lam)] if lam else []
        raise InadmissibleElementError(
            f"K({format_vector(u)}|{format_degree(r)}) not admissible in {self.spec.describe()}")

    def _reduce_derivation(self, u: RationalVector, r: DegreeVector):
        if is_zero(u):
            return []
        mode = self.spec.derivation_mode
        zero_r = is_zero(r)
        label = f"D({format_vector(u)}|{format_degree(r)})"
        if mode == "all":
            return self._expand(Deriv, u, r)
        if zero_r:
            if mode in ("HN", "DM"):
                raise InadmissibleElementError(f"{label} not admissible in {self.spec.describe()}")
            return self._expand(Deriv, u, r)
        if mode == "degree0":
            raise InadmissibleElementError(f"{label} not admissible in {self.spec.describe()}")
        if mode == "S":
            if pair(u, r) != 0:
                raise InadmissibleElementError(f"{label} is not divergence free")
            return self._expand(Deriv, u, r)
        if mode in ("H", "HN"):
            b = _fvec(bar(r))
        else:
            if in_G(r):
                raise InadmissibleElementError(f"{label}: contact span is zero at this degree")
            b = _fvec(underline(r))
        lam = _proportional(u, b)
        if lam is None:
            raise InadmissibleElementError(f"{label} outside the span of D({format_vector(b)}|{format_degree(r)})")
        return [(Deriv(b, r), lam)]

    # -- bracket -------------------------------------------------------------

    def _raw_bracket(self, x: BasisSymbol, y: BasisSymbol) -> List[Tuple[BasisSymbol, Fraction]]:
        if isinstance(x, GElem):
            if isinstance(y, GElem):
                t = add(x.r, y.r)
                out = [(GElem(c, t), v) for c, v in self.datum.bracket(x.index, y.index).items()]
                f = self.datum.form(x.index, y.index)
                mode = self.spec.central_mode
                if f and mode == "degree0":
                    if is_zero(t):
                        out.append((CentralK(_fvec(x.r), t), f))
                elif f and mode is not None:
                    out.append((CentralK(_fvec(x.r), t), f))
                return out
            if isinstance(y, CentralK):
                return []
            return [(s, -c) for s, c in self._raw_bracket(y, x)]
        if isinstance(x, CentralK):
            if isinstance(y, Deriv):
                return [(s, -c) for s, c in self._raw_bracket(y, x)]
            return []
        u, r = x.u, x.r
        if isinstance(y, GElem):
            c = pair(u, y.r)
            return [(GElem(y.index, add(r, y.r)), c)] if c else []
        t = add(r, y.r)
        if isinstance(y, CentralK):
            return [(CentralK(y.u, t), pair(u, y.r)), (CentralK(_fvec(r), t), pair(u, y.u))]
        v, s = y.u, y.r
        us, vr = pair(u, s), pair(v, r)
        w = sub(scale(us, v), scale(vr, u))
        out = [(Deriv(w, t), Fraction(1))]
        if self.spec.central_mode is not None and us and vr:
            out.append((CentralK(_fvec(r), t), us * vr))
        return out

    def bracket_symbols(self, x: BasisSymbol, y: BasisSymbol) -> AlgebraElement:
        key = (x, y)
        cached = self._cache.get(key)
        if cached is None:
            self._check_symbol(x)
            self._check_symbol(y)
            cached = self.normal_form(AlgebraElement.combine(self._raw_bracket(x, y)))
            self._cache[key] = cached
        return cached

    def bracket(self, a: Union[BasisSymbol, AlgebraElement], b: Union[BasisSymbol, AlgebraElement]) -> AlgebraElement:
        a, b = as_element(a), as_element(b)
        out: Dict[BasisSymbol, Fraction] = {}
        for x, cx in a.terms.items():
            for y, cy in b.terms.items():
                for sym, coeff in self.bracket_symbols(x, y).terms.items():
                    out[sym] = out.get(sym, Fraction(0)) + cx * cy * coeff
        return self.normal_form(AlgebraElement(out))

    # -- generators and components ----------------------------------------

    def component_basis(self, r: DegreeVector) -> List[BasisSymbol]:
        """Raw symbols whose normal forms form a basis of the degree-r component."""
        r = tuple(r)
        out: List[BasisSymbol] = []
        if self.spec.has_g:
            out.extend(GElem(i, r) for i in range(self.datum.dimension))
        out.extend(self._central_generators(r))
        out.extend(self._derivation_generators(r))
        return out

    def _central_generators(self, r: DegreeVector) -> List[CentralK]:
        mode = self.spec.central_mode
        n = self.N
        if mode is None:
            return []
        if is_zero(r):
            return [CentralK(unit_vector(n, i), r) for i in range(n)]
        if mode == "Z":
            pivot = next(i for i, c in enumerate(r) if c)
            return [CentralK(unit_vector(n, i), r) for i in range(n) if i != pivot]
        if mode == "Z/K":
            return [CentralK(_fvec(bar(r)), r)]
        if mode == "Z/K_M":
            return [] if in_G(r) else [CentralK(_fvec(underline(r)), r)]
        return []

    def _derivation_generators(self, r: DegreeVector) -> List[Deriv]:
        mode = self.spec.derivation_mode
        n = self.N
        if is_zero(r):
            if mode in ("HN", "DM"):
                return []
            return [Deriv(unit_vector(n, i), r) for i in range(n)]
        if mode == "all":
            return [Deriv(unit_vector(n, i), r) for i in range(n)]
        if mode == "degree0":
            return []
        if mode == "S":
            pivot = next(i for i, c in enumerate(r) if c)
            gens = []
            for i in range(n):
                if i == pivot:
                    continue
                u = [Fraction(0)] * n
                u[i] = Fraction(r[pivot])
                u[pivot] = Fraction(-r[i])
                gens.append(Deriv(tuple(u), r))
            return gens
        if mode in ("H", "HN"):
            return [Deriv(_fvec(bar(r)), r)]
        return [] if in_G(r) else [Deriv(_fvec(underline(r)), r)]

    def generators(self, window: Window) -> List[BasisSymbol]:
        """Canonical basis generators with degrees in the window, lexicographic by degree."""
        if window.arity != self.N:
            raise PreconditionError(f"window arity {window.arity} does not match N={self.N}")
        out = []
        for r in window:
            out.extend(self.component_basis(r))
        return out

    def rank_of(self, elements: Sequence[AlgebraElement]) -> int:
        columns: Dict[BasisSymbol, int] = {}
        for el in elements:
            for sym in el.terms:
                columns.setdefault(sym, len(columns))
        rows = []
        for el in elements:
            row = [Fraction(0)] * len(columns)
            for sym, coeff in el.terms.items():
                row[columns[sym]] = coeff
            rows.append(row)
        return exact_rank(rows, len(columns))

    def component_dimension(self, tag: str, r: Sequence[int]) -> int:
        """
        Dimension of a graded component, by exact rank of its spanning set.

        Args:
            tag: one of Z, Z/K, Z/K_M, H_N, D_M, H~_N, D~_M, full
            r: degree
        """
        r = tuple(int(c) for c in r)
        family = self.spec.family
        n = self.N
        allowed = {
            "Z": {Family.TOROIDAL, Family.FULL_TOROIDAL, Family.TAU_S},
            "Z/K": {Family.TAU_H},
            "Z/K_M": {Family.TAU_D},
            "H_N": {Family.TAU_H, Family.HN},
            "H~_N": {Family.TAU_H},
            "D_M": {Family.TAU_D, Family.DM},
            "D~_M": {Family.TAU_D},
        }
        if tag == "full":
            spanning = [self.normal_form(s) for s in self.component_basis(r)]
            return self.rank_of(spanning)
        if tag not in allowed:
            raise PreconditionError(f"unknown component tag {tag!r}")
        if family not in allowed[tag]:
            raise PreconditionError(f"component {tag} does not belong to {self.spec.describe()}")
        if tag in ("Z", "Z/K", "Z/K_M"):
            spanning = [self.normal_form(CentralK(unit_vector(n, i), r)) for i in range(n)]
        else:
            line = bar(r) if tag in ("H_N", "H~_N") else underline(r)
            spanning = [self.normal_form(Deriv(_fvec(line), r))]
            if tag.startswith(("H~", "D~")) and is_zero(r):
                spanning.extend(self.normal_form(Deriv(unit_vector(n, i), r)) for i in range(n))
        return self.rank_of(spanning)

    # -- triangular decompositions ---------------------------------------

    def triangular_part(self, tag: str, sym: BasisSymbol) -> str:
        return triangular_part(self.spec, tag, sym)


@lru_cache(maxsize=None)
def algebra_for(spec: AlgebraSpec) -> GradedAlgebra:
    """Process-local shared GradedAlgebra per spec."""
    return GradedAlgebra(spec)


def bracket(spec: AlgebraSpec, a, b) -> AlgebraElement:
    return algebra_for(spec).bracket(a, b)


def normal_form(spec: AlgebraSpec, a) -> AlgebraElement:
    return algebra_for(spec).normal_form(a)


def component_dimension(spec: AlgebraSpec, tag: str, r: Sequence[int]) -> int:
    return algebra_for(spec).component_dimension(tag, r)


# ---------------------------------------------------------------------------
# Triangular decompositions of tau(H_N)
# ---------------------------------------------------------------------------

DECOMPOSITIONS = ("N2-healal", "generalN", "levelzero", "rm-positive")


def _root_part(spec: AlgebraSpec, sym: BasisSymbol) -> str:
    if isinstance(sym, GElem):
        root = spec.datum.root_of(sym.index)
        if root is not None:
            return "+" if root.positive else "-"
    return "0"


def triangular_part(spec: AlgebraSpec, tag: str, sym: BasisSymbol) -> str:
    """
    Part of a canonical symbol in a triangular decomposition of tau(H_N).

    Args:
        spec: must be a tauH spec (N = 2 for N2-healal)
        tag: N2-healal, generalN, levelzero or rm-positive
        sym: canonical basis symbol

    Returns:
        one of '++', '+', '0', '-', '--'
    """
    if spec.family is not Family.TAU_H:
        raise InadmissibleElementError(f"triangular decompositions live in tau(H_N), not {spec.describe()}")
    if tag not in DECOMPOSITIONS:
        raise PreconditionError(f"unknown decomposition {tag!r}")
    if tag == "N2-healal" and spec.N != 2:
        raise PreconditionError("N2-healal requires N = 2")
    algebra = algebra_for(spec)
    algebra._check_symbol(sym)
    r = sym.r
    m = spec.N // 2
    if tag == "levelzero":
        return _root_part(spec, sym)
    if tag == "rm-positive":
        a = r[m - 1]
        if a > 0:
            return "+"
        if a < 0:
            return "-"
        return _root_part(spec, sym)
    a, b = r[m - 1], r[2 * m - 1]
    if a > b:
        return "++"
    if a < b:
        return "--"
    if a > 0:
        return "+"
    if a < 0:
        return "-"
    return _root_part(spec, sym)


def expected_part(tag: str, p: str, q: str) -> Optional[str]:
    """Part that [p, q] must land in, None when the decomposition does not constrain it."""
    if p == "0":
        return q
    if q == "0":
        return p
    if tag in ("levelzero", "rm-positive"):
        return p if p == q else None
    pq = {p, q}
    if "++" in pq and pq <= {"++", "+", "-"}:
        return "++"
    if "--" in pq and pq <= {"--", "+", "-"}:
        return "--"
    if p == q:
        return p
    return None


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def _jacobi_chunk(spec: AlgebraSpec, generators: List[BasisSymbol], chunk: List[Tuple[int, ...]]):
    algebra = algebra_for(spec)
    witnesses = []
    for i, j, k in chunk:
        x, y, z = generators[i], generators[j], generators[k]
        total = (algebra.bracket(x, algebra.bracket_symbols(y, z))
                 + algebra.bracket(y, algebra.bracket_symbols(z, x))
                 + algebra.bracket(z, algebra.bracket_symbols(x, y)))
        total = algebra.normal_form(total)
        if total:
            witnesses.append({
                "inputs": [format_symbol(s, algebra.datum) for s in (x, y, z)],
                "residual": total.format(algebra.datum),
            })
    return witnesses


def _antisymmetry_chunk(spec: AlgebraSpec, generators: List[BasisSymbol], chunk: List[Tuple[int, ...]]):
    algebra = algebra_for(spec)
    witnesses = []
    for i, j in chunk:
        x, y = generators[i], generators[j]
        total = algebra.bracket_symbols(x, y) + algebra.bracket_symbols(y, x)
        if total:
            witnesses.append({
                "inputs": [format_symbol(s, algebra.datum) for s in (x, y)],
                "residual": total.format(algebra.datum),
            })
    return witnesses


def verify_jacobi(spec: AlgebraSpec, window: Window, sample_limit: int = 250000,
                  seed: int = 0, workers: int = 1) -> VerificationReport:
    """
    Jacobi identity and antisymmetry over generator triples with degrees in the window.

    Sweeps larger than sample_limit are replaced by a seeded sample and reported
    as partial.
    """
    if window.radius < 1:
        raise PreconditionError("verify_jacobi needs window radius >= 1")
    started = time.perf_counter()
    algebra = algebra_for(spec)
    generators = algebra.generators(window)
    logger.info("Jacobi sweep for %s over radius %d: %d generators",
                spec.describe(), window.radius, len(generators))

    pairs, pairs_sampled = choose_tuples(len(generators), 2, sample_limit, seed)
    triples, triples_sampled = choose_tuples(len(generators), 3, sample_limit, seed)
    witnesses = run_sweep(_antisymmetry_chunk, (spec, generators), pairs, workers)
    witnesses += run_sweep(_jacobi_chunk, (spec, generators), triples, workers)

    sampled = pairs_sampled or triples_sampled
    status = "fail" if witnesses else ("partial" if sampled else "pass")
    return VerificationReport(
        check="jacobi",
        family=spec.family.value,
        N=spec.N,
        window=window.radius,
        status=status,
        witnesses=witnesses,
        details={
            "generators": len(generators),
            "pairs_checked": len(pairs),
            "triples_checked": len(triples),
            "sampled": sampled,
        },
        timing=time.perf_counter() - started,
    )


def _closure_chunk(spec: AlgebraSpec, tag: str, generators: List[BasisSymbol], chunk):
    algebra = algebra_for(spec)
    witnesses = []
    for i, j in chunk:
        x, y = generators[i], generators[j]
        p, q = triangular_part(spec, tag, x), triangular_part(spec, tag, y)
        target = expected_part(tag, p, q)
        if target is None:
            continue
        result = algebra.bracket_symbols(x, y)
        stray = [s for s in result.terms if triangular_part(spec, tag, s) != target]
        if stray:
            witnesses.append({
                "inputs": [format_symbol(x, algebra.datum), format_symbol(y, algebra.datum)],
                "residual": f"[{p},{q}] expected in {target}: "
                            + ", ".join(format_symbol(s, algebra.datum) for s in stray),
            })
    return witnesses


def verify_closure(spec: AlgebraSpec, tag: str, window: Window, sample_limit: int = 250000,
                   seed: int = 0, workers: int = 1) -> VerificationReport:
    """Brackets of decomposition parts land in the part the decomposition dictates."""
    if window.radius < 1:
        raise PreconditionError("verify_closure needs window radius >= 1")
    started = time.perf_counter()
    algebra = algebra_for(spec)
    generators = algebra.generators(window)
    pairs, sampled = choose_tuples(len(generators), 2, sample_limit, seed)
    logger.info("closure sweep %s for %s: %d pairs", tag, spec.describe(), len(pairs))
    witnesses = run_sweep(_closure_chunk, (spec, tag, generators), pairs, workers)
    status = "fail" if witnesses else ("partial" if sampled else "pass")
    return VerificationReport(
        check=f"closure:{tag}",
        family=spec.family.value,
        N=spec.N,
        window=window.radius,
        status=status,
        witnesses=witnesses,
        details={"generators": len(generators), "pairs_checked": len(pairs), "sampled": sampled},
        timing=time.perf_counter() - started,
    )
