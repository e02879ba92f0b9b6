#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Roots, Weyl Reflections and Automorphisms
=========================================
Weights of h~ = h + span K_i + span d_i, real roots and their co-roots,
reflections and truncated orbits, the partial order on weights, and the
GL(N, Z) automorphisms (with the shear family) acting on the toroidal
algebras.

Finite parts of weights are stored as Dynkin labels; the form on them is
the trace form, so every root has square length 2.
"""

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from algebra_errors import ArityError, InadmissibleElementError, PreconditionError
from exact_core import (
    Window,
    bar,
    exact_det,
    exact_inverse,
    exact_nullspace,
    format_degree,
    format_scalar,
    is_zero,
    pair,
    rational_vector,
    unit_vector,
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
    as_element,
    format_symbol,
)
from simple_lie import Root, SimpleLieDatum, build_sl, inverse_cartan_a
from verification_report import VerificationReport, choose_tuples, run_sweep

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    """
    Element of h~^*: finite part (Dynkin labels), delta coefficients and
    omega coefficients. lambda(H_k) = alpha[k], lambda(d_i) = delta[i],
    lambda(K_i) = omega[i].
    """

    alpha: Tuple[Fraction, ...]
    delta: Tuple[Fraction, ...]
    omega: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", rational_vector(self.alpha))
        object.__setattr__(self, "delta", rational_vector(self.delta))
        object.__setattr__(self, "omega", rational_vector(self.omega))
        if len(self.delta) != len(self.omega):
            raise ArityError("delta and omega parts must have the same length")

    @classmethod
    def zero(cls, d: int, n: int) -> "Weight":
        return cls((0,) * d, (0,) * n, (0,) * n)

    @property
    def rank(self) -> int:
        return len(self.alpha)

    @property
    def N(self) -> int:
        return len(self.delta)

    def _check(self, other: "Weight"):
        if (self.rank, self.N) != (other.rank, other.N):
            raise ArityError(f"weights of shapes {(self.rank, self.N)} and {(other.rank, other.N)}")

    def __add__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(
            tuple(a + b for a, b in zip(self.alpha, other.alpha)),
            tuple(a + b for a, b in zip(self.delta, other.delta)),
            tuple(a + b for a, b in zip(self.omega, other.omega)),
        )

    def __sub__(self, other: "Weight") -> "Weight":
        return self + other.scale(-1)

    def scale(self, c) -> "Weight":
        c = Fraction(c)
        return Weight(tuple(c * a for a in self.alpha), tuple(c * a for a in self.delta),
                      tuple(c * a for a in self.omega))

    def to_dict(self) -> Dict[str, List[str]]:
        return {
            "alpha": [format_scalar(c) for c in self.alpha],
            "delta": [format_scalar(c) for c in self.delta],
            "omega": [format_scalar(c) for c in self.omega],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Sequence[str]]) -> "Weight":
        return cls(
            tuple(Fraction(c) for c in data["alpha"]),
            tuple(Fraction(c) for c in data["delta"]),
            tuple(Fraction(c) for c in data["omega"]),
        )

    def evaluate(self, element: AlgebraElement) -> Fraction:
        """Value on an element of h~ given in canonical symbols."""
        total = Fraction(0)
        for sym, coeff in as_element(element).terms.items():
            if not is_zero(sym.r):
                raise PreconditionError(f"{format_symbol(sym)} is not in h~")
            if isinstance(sym, GElem):
                total += coeff * self._cartan_value(sym.index)
            elif isinstance(sym, CentralK):
                total += coeff * pair(sym.u, self.omega)
            else:
                total += coeff * pair(sym.u, self.delta)
        return total

    def _cartan_value(self, index: int) -> Fraction:
        datum = build_sl(self.rank + 1)
        if index not in datum.cartan_indices:
            raise PreconditionError(f"{datum.labels[index]} is not in the Cartan subalgebra")
        return self.alpha[datum.cartan_indices.index(index)]

    def format(self) -> str:
        parts = []
        parts.extend(f"{format_scalar(c)}*w{k + 1}" for k, c in enumerate(self.alpha) if c)
        parts.extend(f"{format_scalar(c)}*delta{i + 1}" for i, c in enumerate(self.delta) if c)
        parts.extend(f"{format_scalar(c)}*omega{i + 1}" for i, c in enumerate(self.omega) if c)
        return " + ".join(parts) if parts else "0"


def delta_weight(r: Sequence[int], d: int) -> Weight:
    """delta_r = sum r_i delta_i."""
    return Weight((0,) * d, tuple(r), (0,) * len(r))


def weight_pairing(lam: Weight, mu: Weight) -> Fraction:
    """
    Symmetric form on h~^*: trace form on finite parts, <delta_i, omega_j> =
    delta_ij, all other basis pairings zero.
    """
    lam._check(mu)
    inverse = inverse_cartan_a(lam.rank) if lam.rank else []
    finite = sum(
        (lam.alpha[i] * inverse[i][j] * mu.alpha[j] for i in range(lam.rank) for j in range(lam.rank)),
        Fraction(0),
    )
    return finite + pair(lam.delta, mu.omega) + pair(lam.omega, mu.delta)


# ---------------------------------------------------------------------------
# Real roots and reflections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RealRoot:
    """alpha + delta_r with alpha a root of sl_n."""

    alpha: Root
    r: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(c) for c in self.r))

    @property
    def N(self) -> int:
        return len(self.r)

    def weight(self) -> Weight:
        return Weight(self.alpha.dynkin_labels(), self.r, (0,) * self.N)

    def label(self) -> str:
        return f"{self.alpha.label()}+delta{format_degree(self.r)}"


def coroot(gamma: RealRoot) -> AlgebraElement:
    """(alpha + delta_r)^v = alpha^v + (2/(alpha,alpha)) sum r_i K_i."""
    datum = build_sl(gamma.alpha.n)
    zero = (0,) * gamma.N
    terms: Dict[BasisSymbol, Fraction] = {GElem(h, zero): c for h, c in datum.coroot(gamma.alpha).items()}
    for i, c in enumerate(gamma.r):
        if c:
            terms[CentralK(unit_vector(gamma.N, i), zero)] = Fraction(c)
    return AlgebraElement(terms)


def reflect(gamma: RealRoot, lam: Weight) -> Weight:
    """r_gamma(lambda) = lambda - lambda(gamma^v) gamma."""
    return lam - gamma.weight().scale(lam.evaluate(coroot(gamma)))


def weyl_orbit(lam: Weight, generators: Iterable[RealRoot], bound: int) -> Tuple[FrozenSet[Weight], bool]:
    """
    Closure of {lambda} under the reflections r_gamma, gamma in generators.

    Args:
        lam: starting weight
        generators: real roots whose reflections generate the group
        bound: number of closure rounds, >= 1

    Returns:
        (orbit, truncated) where truncated is True when the last round still
        produced new weights
    """
    if bound < 1:
        raise PreconditionError("orbit bound must be at least 1")
    generators = list(generators)
    orbit = {lam}
    frontier = {lam}
    for _ in range(bound):
        fresh = {reflect(g, w) for w in frontier for g in generators} - orbit
        if not fresh:
            return frozenset(orbit), False
        orbit |= fresh
        frontier = fresh
    logger.warning("Weyl orbit truncated after %d rounds at %d weights", bound, len(orbit))
    return frozenset(orbit), True


def order_compare(lam: Weight, mu: Weight, m: int) -> str:
    """
    Compare weights in the partial order indexed by m (1-based, 2m <= N).

    mu <= lambda when lambda - mu = sum n_i alpha_i + a delta_m + b delta_2m with
    integers n_i, a, b and either a - b > 0, or a = b > 0, or a = b = 0 and
    all n_i >= 0.

    Returns:
        'equal', 'less' (mu < lambda), 'greater' (lambda < mu) or 'incomparable'
    """
    lam._check(mu)
    if m < 1 or 2 * m > lam.N:
        raise PreconditionError(f"order index m={m} needs 2m <= N={lam.N}")
    if lam == mu:
        return "equal"
    if _dominates(lam - mu, m):
        return "less"
    if _dominates(mu - lam, m):
        return "greater"
    return "incomparable"


def _dominates(diff: Weight, m: int) -> bool:
    if any(diff.omega):
        return False
    if any(c for i, c in enumerate(diff.delta) if i not in (m - 1, 2 * m - 1)):
        return False
    inverse = inverse_cartan_a(diff.rank) if diff.rank else []
    coefficients = [sum((inverse[i][j] * diff.alpha[j] for j in range(diff.rank)), Fraction(0))
                    for i in range(diff.rank)]
    a, b = diff.delta[m - 1], diff.delta[2 * m - 1]
    if any(c.denominator != 1 for c in coefficients + [a, b]):
        return False
    if a - b > 0:
        return True
    if a == b and a > 0:
        return True
    return a == b == 0 and all(c >= 0 for c in coefficients)


# ---------------------------------------------------------------------------
# GL(N, Z) automorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegralMatrix:
    """Unimodular N x N integer matrix."""

    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise PreconditionError("integral matrix must be square and non-empty")
        det = exact_det(rows)
        if det not in (1, -1):
            raise PreconditionError(f"matrix is not unimodular (det = {format_scalar(det)})")

    @classmethod
    def from_array(cls, array: np.ndarray) -> "IntegralMatrix":
        return cls(tuple(tuple(int(v) for v in row) for row in array))

    @property
    def N(self) -> int:
        return len(self.rows)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)

    def apply(self, r: Sequence) -> tuple:
        """B r for an integer or rational vector."""
        if len(r) != self.N:
            raise ArityError(f"vector of arity {len(r)} for a {self.N} x {self.N} matrix")
        return tuple(sum(b * c for b, c in zip(row, r)) for row in self.rows)

    def inverse(self) -> "IntegralMatrix":
        return IntegralMatrix(tuple(tuple(int(v) for v in row) for row in exact_inverse(self.rows)))

    def contragredient(self) -> "IntegralMatrix":
        """F = (B^T)^{-1}."""
        transposed = tuple(zip(*self.rows))
        return IntegralMatrix(tuple(tuple(int(v) for v in row) for row in exact_inverse(transposed)))


def shear_matrix(a: int, m: int, n: int) -> IntegralMatrix:
    """
    Identity except on rows and columns m, 2m (1-based), which carry
    [[a, 1], [a - 1, 1]].
    """
    if 2 * a - 1 <= 0:
        raise PreconditionError(f"shear parameter needs 2a - 1 > 0, got a={a}")
    if m < 1 or 2 * m > n:
        raise PreconditionError(f"shear index m={m} needs 2m <= N={n}")
    rows = np.eye(n, dtype=np.int64)
    i, j = m - 1, 2 * m - 1
    rows[i, i], rows[i, j], rows[j, i], rows[j, j] = a, 1, a - 1, 1
    return IntegralMatrix.from_array(rows)


def random_unimodular(n: int, rng: np.random.Generator, steps: Optional[int] = None) -> IntegralMatrix:
    """Product of random elementary matrices I +- E_ij and sign flips."""
    steps = 2 * n if steps is None else steps
    out = np.eye(n, dtype=np.int64)
    for _ in range(steps):
        i, j = (int(v) for v in rng.choice(n, size=2, replace=False)) if n > 1 else (0, 0)
        step = np.eye(n, dtype=np.int64)
        if i == j:
            step[i, i] = -1
        else:
            step[i, j] = int(rng.choice([-1, 1]))
        out = step @ out
    if n > 0 and rng.integers(0, 2):
        flip = np.eye(n, dtype=np.int64)
        flip[0, 0] = -1
        out = flip @ out
    return IntegralMatrix.from_array(out)


def apply_automorphism(b: IntegralMatrix, a, spec: Optional[AlgebraSpec] = None) -> AlgebraElement:
    """
    X(r) -> X(Br), K(u, r) -> K(Bu, Br), D(u, r) -> D(Fu, Br) with F = (B^T)^{-1}.

    With a spec the image is returned in that algebra's normal form.
    """
    f = b.contragredient()
    out: Dict[BasisSymbol, Fraction] = {}
    for sym, coeff in as_element(a).terms.items():
        r = b.apply(sym.r)
        if isinstance(sym, GElem):
            image = GElem(sym.index, r)
        elif isinstance(sym, CentralK):
            image = CentralK(b.apply(sym.u), r)
        else:
            image = Deriv(f.apply(sym.u), r)
        out[image] = out.get(image, Fraction(0)) + coeff
    element = AlgebraElement(out)
    return algebra_for(spec).normal_form(element) if spec is not None else element


def _automorphism_chunk(spec: AlgebraSpec, b: IntegralMatrix, generators: List[BasisSymbol], chunk):
    algebra = algebra_for(spec)
    witnesses = []
    for i, j in chunk:
        x, y = generators[i], generators[j]
        inputs = [format_symbol(s, algebra.datum) for s in (x, y)]
        try:
            lhs = apply_automorphism(b, algebra.bracket_symbols(x, y), spec)
            rhs = algebra.bracket(apply_automorphism(b, x, spec), apply_automorphism(b, y, spec))
        except InadmissibleElementError as e:
            witnesses.append({"inputs": inputs, "residual": f"image not admissible: {e}"})
            continue
        residual = lhs - rhs
        if residual:
            witnesses.append({"inputs": inputs, "residual": residual.format(algebra.datum)})
    return witnesses


def verify_automorphism(spec: AlgebraSpec, b: IntegralMatrix, window: Window, sample_limit: int = 250000,
                        seed: int = 0, workers: int = 1) -> VerificationReport:
    """B[x, y] = [Bx, By] on generator pairs with degrees in the window."""
    if b.N != spec.N:
        raise ArityError(f"{b.N} x {b.N} matrix acting on N={spec.N}")
    started = time.perf_counter()
    generators = algebra_for(spec).generators(window)
    pairs, sampled = choose_tuples(len(generators), 2, sample_limit, seed)
    logger.info("automorphism sweep for %s: %d pairs", spec.describe(), len(pairs))
    witnesses = run_sweep(_automorphism_chunk, (spec, b, generators), pairs, workers)
    return VerificationReport(
        check="automorphism",
        family=spec.family.value,
        N=spec.N,
        window=window.radius,
        status="fail" if witnesses else ("partial" if sampled else "pass"),
        witnesses=witnesses,
        details={"matrix": [list(row) for row in b.rows], "pairs_checked": len(pairs), "sampled": sampled},
        timing=time.perf_counter() - started,
    )


def verify_kb_span(b: IntegralMatrix, window: Window, sl_n: int = 2) -> VerificationReport:
    """
    Image of K under B against K_B, degree by degree in Z.

    At degree Bs, B(K) is spanned by K(Bu, Bs) for rational u orthogonal to
    bar s; K_B by K(Br, Bs) for nonzero window-integer r with (r, bar s) = 0.
    A degree where the window vectors span strictly less is reported partial.
    """
    n = b.N
    if n % 2 or window.arity != n:
        raise PreconditionError(f"K_B needs even N matching the window, got N={n}")
    started = time.perf_counter()
    algebra = algebra_for(AlgebraSpec(Family.TAU_S, n, sl_n))
    witnesses = []
    short = 0
    checked = 0
    candidates = window.nonzero()
    for s in candidates:
        t = b.apply(s)
        sbar = bar(s)
        hyperplane = exact_nullspace([list(sbar)], n)
        image = [algebra.normal_form(CentralK(b.apply(tuple(u)), t)) for u in hyperplane]
        lattice = [algebra.normal_form(CentralK(rational_vector(b.apply(r)), t))
                   for r in candidates if pair(r, sbar) == 0]
        rank_image = algebra.rank_of(image)
        rank_lattice = algebra.rank_of(lattice)
        rank_union = algebra.rank_of(image + lattice)
        checked += 1
        if rank_union > rank_image:
            witnesses.append({"inputs": [format_degree(s)],
                              "residual": f"K_B leaves B(K): ranks {rank_image}, union {rank_union}"})
        elif rank_lattice < rank_image:
            short += 1
    status = "fail" if witnesses else ("partial" if short else "pass")
    return VerificationReport(
        check="kb-span",
        family=Family.TAU_S.value,
        N=n,
        window=window.radius,
        status=status,
        witnesses=witnesses,
        details={"matrix": [list(row) for row in b.rows], "degrees_checked": checked, "window_short": short},
        timing=time.perf_counter() - started,
    )


def finite_roots(datum: SimpleLieDatum, n: int) -> List[RealRoot]:
    """Real roots alpha + delta_0 for every root alpha."""
    return [RealRoot(alpha, (0,) * n) for alpha in datum.roots]
