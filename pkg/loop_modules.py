#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Loop Modules
============
Graded modules with exact action matrices between grades: evaluation loop
modules of the toroidal algebra, the realization V(lambda) (x) fiber (x) A of
tau(H_N), and the diagnostics shared by every windowed module (representation
check, highest-weight space, integrability, associativization of the
h_alpha (x) t^r operators, JSON/CSV manifests).

A module exposes ``dimension(grade)`` and ``operator(symbol, grade)``, the
matrix of a basis symbol from the grade-k piece to the grade-(k + deg) piece.
"""

import itertools
import json
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from algebra_errors import CapabilityError, InadmissibleElementError, NotAssociativizableError, PreconditionError
from exact_core import (
    Window,
    add,
    exact_nullspace,
    format_degree,
    format_matrix,
    format_scalar,
    frac_matrix,
    identity,
    is_zero,
    is_zero_matrix,
    kron,
    neg,
    pair,
    rational_vector,
    solve_left,
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
    as_element,
    format_symbol,
    triangular_part,
)
from roots_weyl import RealRoot, Weight, coroot, reflect
from simple_lie import FiniteModule, irrep
from sp_jet_modules import CALIBRATED_PROFILE, JetModule, JetProfile, SpRep
from verification_report import VerificationReport, worst_status

logger = logging.getLogger(__name__)

POSITIVE_PARTS = ("+", "++")


class WindowedModule:
    """Base class for graded modules given by exact action matrices."""

    kind = "module"

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec

    @property
    def N(self) -> int:
        return self.spec.N

    def dimension(self, grade: Sequence[int]) -> int:
        raise NotImplementedError

    def operator(self, symbol: BasisSymbol, grade: Sequence[int]) -> np.ndarray:
        raise NotImplementedError

    def weights_at(self, grade: Sequence[int]) -> List[Weight]:
        raise NotImplementedError

    def contains_grade(self, grade: Sequence[int]) -> bool:
        return len(grade) == self.N

    def parameters(self) -> Dict[str, Any]:
        return {"spec": self.spec.describe()}

    def element_operator(self, element, grade: Sequence[int]) -> np.ndarray:
        """Matrix of a homogeneous element; the zero element maps grade k to itself."""
        element = as_element(element)
        degrees = element.degrees()
        if len(degrees) > 1:
            raise PreconditionError(f"element {element.format()} is not homogeneous")
        grade = tuple(grade)
        if not degrees:
            n = self.dimension(grade)
            return zeros(n, n)
        target = add(grade, degrees[0])
        out = zeros(self.dimension(target), self.dimension(grade))
        for sym, coeff in element.terms.items():
            out = out + coeff * self.operator(sym, grade)
        return out

    def apply(self, element, vector: Sequence, grade: Sequence[int]) -> Tuple[List[Fraction], Tuple[int, ...]]:
        element = as_element(element)
        degrees = element.degrees() or [tuple(0 for _ in grade)]
        column = frac_matrix([[c] for c in vector])
        image = self.element_operator(element, grade) @ column
        return list(image[:, 0]), tuple(int(c) for c in add(grade, degrees[0]))

    def graded_dims(self, grades: Window) -> Dict[str, int]:
        return {format_degree(k): self.dimension(k) for k in grades if self.contains_grade(k)}

    def manifest(self, grades: Window) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "parameters": self.parameters(),
            "window": grades.radius,
            "graded_dims": self.graded_dims(grades),
        }

    def save_manifest(self, path: str, grades: Window):
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.manifest(grades), f, ensure_ascii=False, indent=4)
        logger.info("%s manifest saved to %s", self.kind, path)

    def action_frame(self, symbol: BasisSymbol, grade: Sequence[int]) -> pd.DataFrame:
        matrix = self.operator(symbol, grade)
        return pd.DataFrame([[format_scalar(v) for v in row] for row in matrix])

    def export_action_csv(self, symbol: BasisSymbol, grade: Sequence[int], path: str):
        """Exact rational action matrix of one generator at one grade."""
        self.action_frame(symbol, grade).to_csv(path, index=False, header=False)
        logger.info("action of %s at grade %s exported to %s",
                    format_symbol(symbol, self.spec.datum), format_degree(grade), path)


def point_power(a: Sequence[Fraction], r: Sequence[int]) -> Fraction:
    """a^r = prod a_j^{r_j}."""
    out = Fraction(1)
    for base, e in zip(a, r):
        out *= Fraction(base) ** int(e)
    return out


# ---------------------------------------------------------------------------
# Evaluation modules
# ---------------------------------------------------------------------------

class EvaluationModule(WindowedModule):
    """
    V(lambda_1) (x) ... (x) V(lambda_p) (x) t^q C[t^{+-1}] with

        X(r) (v_1 (x) ... (x) v_p (x) t^k) = sum_i a_i^r v_1 (x) ... X v_i ... (x) v_p (x) t^{k+r}

    K acting as 0 and d_i by k_i + q_i. Every grade is occupied.
    """

    kind = "evaluation"

    def __init__(self, spec: AlgebraSpec, factors: Sequence[FiniteModule], points: Sequence[Sequence], q=None):
        super().__init__(spec)
        if not spec.has_g:
            raise PreconditionError(f"{spec.describe()} has no loop part")
        if not factors or len(factors) != len(points):
            raise PreconditionError("one evaluation point per factor is required")
        self.factors = list(factors)
        self.points = [rational_vector(a) for a in points]
        for a in self.points:
            if len(a) != spec.N:
                raise PreconditionError(f"evaluation point {a} must have {spec.N} coordinates")
            if any(c == 0 for c in a):
                raise PreconditionError(f"evaluation point {a} has a zero coordinate")
        if len(set(self.points)) != len(self.points):
            raise PreconditionError("evaluation points must be pairwise distinct")
        self.q = rational_vector(q or (0,) * spec.N)
        self._dims = [f.dimension for f in self.factors]
        self._embedded: Dict[Tuple[int, int], np.ndarray] = {}

    @property
    def shift(self) -> Tuple[Fraction, ...]:
        return self.q

    def parameters(self) -> Dict[str, Any]:
        return {
            "spec": self.spec.describe(),
            "highest_weights": [list(f.highest_weight) for f in self.factors],
            "points": [[format_scalar(c) for c in a] for a in self.points],
            "q": [format_scalar(c) for c in self.q],
        }

    def dimension(self, grade: Sequence[int]) -> int:
        return int(np.prod(self._dims))

    def _factor_operator(self, i: int, index: int) -> np.ndarray:
        key = (i, index)
        if key not in self._embedded:
            left = identity(int(np.prod(self._dims[:i])))
            right = identity(int(np.prod(self._dims[i + 1:])))
            self._embedded[key] = kron(kron(left, self.factors[i].action(index)), right)
        return self._embedded[key]

    def operator(self, symbol: BasisSymbol, grade: Sequence[int]) -> np.ndarray:
        dim = self.dimension(grade)
        if isinstance(symbol, GElem):
            out = zeros(dim, dim)
            for i, a in enumerate(self.points):
                out = out + point_power(a, symbol.r) * self._factor_operator(i, symbol.index)
            return out
        if isinstance(symbol, CentralK):
            return zeros(dim, dim)
        if isinstance(symbol, Deriv):
            if not is_zero(symbol.r):
                raise CapabilityError(f"{format_symbol(symbol)} does not act on an evaluation module")
            return pair(symbol.u, add(grade, self.q)) * identity(dim)
        raise InadmissibleElementError(f"{symbol!r} does not act on an evaluation module")

    def weights_at(self, grade: Sequence[int]) -> List[Weight]:
        delta = add(grade, self.q)
        omega = (0,) * self.N
        out = []
        for combo in itertools.product(*[f.weights for f in self.factors]):
            alpha = tuple(sum(parts, Fraction(0)) for parts in zip(*combo))
            out.append(Weight(alpha, delta, omega))
        return out

    def irreducibility_certificate(self, window: Window) -> Dict[str, Any]:
        """
        Degrees r where sum_i lambda_i(h) a_i^r vanishes for every Cartan h.
        The tensor of highest vectors generates an irreducible quotient when the
        list is empty; the check covers only the window.
        """
        datum = self.spec.datum
        top = [f.highest_weight_vectors()[0] for f in self.factors]
        vanishing = []
        for r in window:
            values = []
            for h in datum.cartan_indices:
                values.append(sum((self.factors[i].action(h)[top[i], top[i]] * point_power(a, r)
                                   for i, a in enumerate(self.points)), Fraction(0)))
            if not any(values):
                vanishing.append(format_degree(r))
        return {
            "status": "verified on window",
            "window": window.radius,
            "vanishing_degrees": vanishing,
            "highest_vectors": top,
        }


def evaluation_module(spec: AlgebraSpec, highest_weights: Sequence[Sequence[int]], points: Sequence[Sequence],
                      q=None) -> EvaluationModule:
    """Build the evaluation module from Dynkin labels of the factors."""
    if not spec.has_g:
        raise PreconditionError(f"{spec.describe()} has no loop part")
    datum = spec.datum
    factors = [irrep(datum, labels) for labels in highest_weights]
    module = EvaluationModule(spec, factors, points, q)
    logger.info("evaluation module over %s: %d factors, dimension %d per grade",
                spec.describe(), len(factors), module.dimension((0,) * spec.N))
    return module


def evaluation_action(module: EvaluationModule, symbol: BasisSymbol, vector: Sequence,
                      grade: Sequence[int]) -> Tuple[List[Fraction], Tuple[int, ...]]:
    """Image of v (x) t^grade under X (x) t^r, as (coordinates, grade)."""
    return module.apply(symbol, vector, grade)


# ---------------------------------------------------------------------------
# Realization V(lambda) (x) fiber (x) A
# ---------------------------------------------------------------------------

class RealizationModule(WindowedModule):
    """
    V(lambda) (x) V_N (x) A for tau(H_N): g (x) A acts on the first factor
    with the grade shift, the Hamiltonians act on V_N (x) A as on the jet
    module, and Z/K acts as zero.
    """

    kind = "realization"

    def __init__(self, spec: AlgebraSpec, factor: FiniteModule, jet: JetModule):
        super().__init__(spec)
        if spec.family is not Family.TAU_H:
            raise PreconditionError(f"realization modules live over tau(H_N), not {spec.describe()}")
        if jet.N != spec.N:
            raise PreconditionError(f"jet module is for N={jet.N}, algebra has N={spec.N}")
        self.factor = factor
        self.jet = jet
        self._fiber_identity = identity(jet.fiber.dimension)
        self._factor_identity = identity(factor.dimension)

    @property
    def shift(self) -> Tuple[Fraction, ...]:
        return self.jet.u

    def parameters(self) -> Dict[str, Any]:
        return {
            "spec": self.spec.describe(),
            "highest_weight": list(self.factor.highest_weight),
            "fiber": self.jet.fiber.name,
            "u": [format_scalar(c) for c in self.jet.u],
            "w": [format_scalar(c) for c in self.jet.w],
            "profile": self.jet.profile.format(),
        }

    def dimension(self, grade: Sequence[int]) -> int:
        return self.factor.dimension * self.jet.fiber.dimension

    def operator(self, symbol: BasisSymbol, grade: Sequence[int]) -> np.ndarray:
        grade = tuple(grade)
        if isinstance(symbol, GElem):
            return kron(self.factor.action(symbol.index), self._fiber_identity)
        if isinstance(symbol, CentralK):
            dim = self.dimension(grade)
            return zeros(dim, dim)
        if isinstance(symbol, Deriv):
            return kron(self._factor_identity, self.jet.operator(symbol, grade))
        raise InadmissibleElementError(f"{symbol!r} does not act on a realization module")

    def t_operator(self, r: Sequence[int], grade: Sequence[int]) -> np.ndarray:
        return identity(self.dimension(grade))

    def weights_at(self, grade: Sequence[int]) -> List[Weight]:
        delta = add(grade, self.jet.u)
        omega = (0,) * self.N
        return [Weight(alpha, delta, omega)
                for alpha in self.factor.weights for _ in range(self.jet.fiber.dimension)]


def realization_module(highest_weight: Sequence[int], fiber: SpRep, u: Optional[Sequence] = None,
                       w: Optional[Sequence] = None, sl_n: int = 2,
                       profile: JetProfile = CALIBRATED_PROFILE) -> RealizationModule:
    n = 2 * fiber.m
    spec = AlgebraSpec(Family.TAU_H, n, sl_n)
    jet = JetModule(fiber, tuple(u or (0,) * n), tuple(w or (0,) * n), profile)
    module = RealizationModule(spec, irrep(spec.datum, highest_weight), jet)
    logger.info("realization module over %s: V%s (x) %s fiber, dimension %d per grade",
                spec.describe(), tuple(highest_weight), fiber.name, module.dimension((0,) * n))
    return module


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

def verify_representation(module: WindowedModule, generators: Sequence[BasisSymbol], grades: Window,
                          check: str = "module-representation") -> VerificationReport:
    """rho(x) rho(y) - rho(y) rho(x) = rho([x, y]) for generator pairs on every window grade."""
    started = time.perf_counter()
    algebra = algebra_for(module.spec)
    datum = module.spec.datum
    witnesses = []
    checked = 0
    for a, b in itertools.combinations_with_replacement(range(len(generators)), 2):
        x, y = generators[a], generators[b]
        target = algebra.bracket(x, y)
        for k in grades:
            kx, ky = add(k, x.r), add(k, y.r)
            kxy = add(kx, y.r)
            if not all(module.contains_grade(g) for g in (k, kx, ky, kxy)):
                continue
            lhs = module.operator(x, ky) @ module.operator(y, k) - module.operator(y, kx) @ module.operator(x, k)
            residual = lhs - _operator_or_zero(module, target, k, kxy)
            checked += 1
            if not is_zero_matrix(residual):
                witnesses.append({
                    "inputs": [format_symbol(x, datum), format_symbol(y, datum), format_degree(k)],
                    "residual": format_matrix(residual),
                })
    logger.info("%s on %s: %d checks, %d failures", check, module.kind, checked, len(witnesses))
    return VerificationReport(
        check=check,
        family=module.spec.family.value,
        N=module.N,
        window=grades.radius,
        status="fail" if witnesses else "pass",
        witnesses=witnesses,
        details={"module": module.kind, "generators": len(generators), "checks": checked},
        timing=time.perf_counter() - started,
    )


def _operator_or_zero(module: WindowedModule, element: AlgebraElement, grade, target) -> np.ndarray:
    if not element:
        return zeros(module.dimension(target), module.dimension(grade))
    return module.element_operator(element, grade)


def is_positive(spec: AlgebraSpec, tag: str, sym: BasisSymbol) -> bool:
    """Membership in the positive part; off tau(H_N) only the levelzero split (by root sign) applies."""
    if spec.family is Family.TAU_H:
        return triangular_part(spec, tag, sym) in POSITIVE_PARTS
    if tag != "levelzero":
        raise PreconditionError(f"decomposition {tag!r} is only defined on tau(H_N)")
    if isinstance(sym, GElem):
        root = spec.datum.root_of(sym.index)
        return root is not None and root.positive
    return False


def positive_generators(spec: AlgebraSpec, tag: str, window: Window) -> List[BasisSymbol]:
    return [sym for sym in algebra_for(spec).generators(window) if is_positive(spec, tag, sym)]


@dataclass
class HighestWeightSpace:
    """Kernel of the positive part, one basis (columns) per grade."""

    module: WindowedModule
    tag: str
    basis: Dict[Tuple[int, ...], np.ndarray]

    def dimension(self, grade: Sequence[int]) -> int:
        columns = self.basis.get(tuple(grade))
        return 0 if columns is None else columns.shape[1]

    def graded_dims(self) -> Dict[str, int]:
        return {format_degree(k): self.dimension(k) for k in sorted(self.basis)}


def highest_weight_space(module: WindowedModule, tag: str, window: Window,
                         grades: Optional[Window] = None) -> HighestWeightSpace:
    """
    Exact kernel of the stacked positive-part operators at each grade.

    Args:
        module: the module
        tag: triangular decomposition
        window: degrees of the positive generators used
        grades: module grades to cover (defaults to window)
    """
    grades = grades or window
    positives = positive_generators(module.spec, tag, window)
    basis = {}
    for k in grades:
        if not module.contains_grade(k):
            continue
        dim = module.dimension(k)
        rows = []
        for x in positives:
            target = add(k, x.r)
            if module.contains_grade(target):
                rows.extend(module.operator(x, k).tolist())
        kernel = exact_nullspace(rows, dim) if dim else []
        columns = np.array(kernel, dtype=object).T if kernel else zeros(dim, 0)
        basis[tuple(k)] = columns
    space = HighestWeightSpace(module, tag, basis)
    logger.info("highest weight space of %s (%s): %s", module.kind, tag, space.graded_dims())
    return space


def real_roots(spec: AlgebraSpec, window: Window) -> List[RealRoot]:
    datum = spec.datum
    roots = [a for a in datum.roots]
    return [RealRoot(a, tuple(r)) for r in window for a in roots]


def verify_integrability(module: WindowedModule, window: Window, bound: int,
                         grades: Optional[Window] = None) -> VerificationReport:
    """
    Local nilpotency of X_alpha(r) up to ``bound`` iterates, integrality of
    lambda(gamma^v) on all window weights, and equal weight multiplicities
    along reflections that stay in the window.
    """
    if bound < 1:
        raise PreconditionError("integrability bound must be at least 1")
    started = time.perf_counter()
    grades = grades or window
    datum = module.spec.datum
    witnesses = []
    statuses = []
    inconclusive = 0

    for gamma in real_roots(module.spec, window):
        x = GElem(datum.root_vector(gamma.alpha), gamma.r)
        for k in grades:
            if not module.contains_grade(k):
                continue
            for j in range(module.dimension(k)):
                outcome = _nilpotency(module, x, k, j, bound, grades)
                if outcome == "fail":
                    witnesses.append({"inputs": [format_symbol(x, datum), format_degree(k), j],
                                      "residual": f"nonzero after {bound} iterates"})
                elif outcome == "inconclusive":
                    inconclusive += 1
    statuses.append("fail" if witnesses else ("inconclusive" if inconclusive else "pass"))

    multiplicities: Dict[Weight, int] = {}
    for k in grades:
        if module.contains_grade(k):
            for weight in module.weights_at(k):
                multiplicities[weight] = multiplicities.get(weight, 0) + 1

    non_integral = 0
    reflections_checked = 0
    shift = getattr(module, "shift", (Fraction(0),) * module.N)
    for weight in multiplicities:
        for gamma in real_roots(module.spec, window):
            value = weight.evaluate(coroot(gamma))
            if value.denominator != 1:
                non_integral += 1
                witnesses.append({"inputs": [weight.format(), gamma.label()],
                                  "residual": f"lambda(gamma^v) = {format_scalar(value)}"})
                continue
            image = reflect(gamma, weight)
            grade = tuple(d - s for d, s in zip(image.delta, shift))
            if any(c.denominator != 1 for c in grade) or tuple(int(c) for c in grade) not in grades:
                continue
            reflections_checked += 1
            if multiplicities.get(image, 0) != multiplicities[weight]:
                witnesses.append({"inputs": [weight.format(), gamma.label()],
                                  "residual": f"dim {multiplicities[weight]} vs {multiplicities.get(image, 0)}"})
    statuses.append("fail" if witnesses else "pass")

    status = worst_status(statuses)
    logger.info("integrability of %s: %s (%d inconclusive iterates, %d reflections)",
                module.kind, status, inconclusive, reflections_checked)
    return VerificationReport(
        check="integrability",
        family=module.spec.family.value,
        N=module.N,
        window=window.radius,
        status=status,
        witnesses=witnesses,
        details={
            "module": module.kind,
            "bound": bound,
            "inconclusive_iterates": inconclusive,
            "non_integral": non_integral,
            "reflections_checked": reflections_checked,
            "distinct_weights": len(multiplicities),
        },
        timing=time.perf_counter() - started,
    )


def _nilpotency(module: WindowedModule, x: GElem, grade, index: int, bound: int, grades: Window) -> str:
    dim = module.dimension(grade)
    vector = zeros(dim, 1)
    vector[index, 0] = Fraction(1)
    k = tuple(grade)
    for _ in range(bound):
        target = add(k, x.r)
        if tuple(target) not in grades or not module.contains_grade(target):
            return "inconclusive"
        vector = module.operator(x, k) @ vector
        k = tuple(int(c) for c in target)
        if is_zero_matrix(vector):
            return "pass"
    return "fail"


# ---------------------------------------------------------------------------
# Associativization
# ---------------------------------------------------------------------------

def h_alpha(spec: AlgebraSpec, alpha, r: Sequence[int]) -> AlgebraElement:
    """h_alpha (x) t^r."""
    datum = spec.datum
    r = tuple(int(c) for c in r)
    return AlgebraElement({GElem(h, r): c for h, c in datum.coroot(alpha).items()})


@dataclass
class AssociativeAction:
    """
    t^r := (h_alpha (x) t^r) / lambda_alpha on the highest weight space, in
    its coordinates; t^0 acts as the identity.
    """

    space: HighestWeightSpace
    alpha: Any
    c: Fraction
    lambda_alpha: Fraction
    mu: Fraction
    operators: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], np.ndarray] = field(default_factory=dict)

    def t_operator(self, r: Sequence[int], grade: Sequence[int]) -> np.ndarray:
        key = (tuple(r), tuple(grade))
        if key not in self.operators:
            module = self.space.module
            source = self.space.basis[tuple(grade)]
            target = self.space.basis.get(tuple(add(grade, r)))
            if target is None:
                raise PreconditionError(f"grade {format_degree(add(grade, r))} is outside the highest weight window")
            if is_zero(r):
                self.operators[key] = identity(source.shape[1])
            else:
                image = module.element_operator(h_alpha(module.spec, self.alpha, r), grade) @ source
                coords = solve_left(target, image * (1 / self.lambda_alpha))
                if coords is None:
                    raise NotAssociativizableError("h_alpha t^r leaves the highest weight space",
                                                   witness={"r": format_degree(r), "grade": format_degree(grade)})
                self.operators[key] = coords
        return self.operators[key]

    def verify(self, window: Window) -> VerificationReport:
        """t^r t^s = t^{r+s} on the highest weight space for window pairs and grades."""
        started = time.perf_counter()
        grades = sorted(self.space.basis)
        witnesses = []
        checked = 0
        for r in window:
            for s in window:
                for k in grades:
                    ks, krs = add(k, s), add(k, add(r, s))
                    if tuple(ks) not in self.space.basis or tuple(krs) not in self.space.basis:
                        continue
                    residual = self.t_operator(r, ks) @ self.t_operator(s, k) - self.t_operator(add(r, s), k)
                    checked += 1
                    if not is_zero_matrix(residual):
                        witnesses.append({"inputs": [format_degree(r), format_degree(s), format_degree(k)],
                                          "residual": format_matrix(residual)})
        module = self.space.module
        return VerificationReport(
            check="associativization",
            family=module.spec.family.value,
            N=module.N,
            window=window.radius,
            status="fail" if witnesses else "pass",
            witnesses=witnesses,
            details={
                "module": module.kind,
                "lambda_alpha": format_scalar(self.lambda_alpha),
                "mu_alpha": format_scalar(self.mu),
                "lambda(h_alpha)": format_scalar(self.c),
                "checks": checked,
            },
            timing=time.perf_counter() - started,
        )


def scalar_of(coords: Optional[np.ndarray]) -> Optional[Fraction]:
    """c when coords = c * I, else None."""
    if coords is None or coords.shape[0] != coords.shape[1] or coords.shape[0] == 0:
        return None
    c = Fraction(coords[0, 0])
    return c if is_zero_matrix(coords - c * identity(coords.shape[0])) else None


def associativize(module: WindowedModule, alpha, window: Window, grades: Optional[Window] = None) -> AssociativeAction:
    """
    Recover an associative A-action from the h_alpha (x) t^r operators on the
    highest weight space.

    h_alpha must act on it by a nonzero scalar c = lambda(h_alpha), and every
    h_alpha (x) t^r (r != 0) by one constant lambda_alpha; mu_alpha comes from
    h_alpha t^r h_alpha t^{-r} = mu_alpha c and lambda_alpha^2 = mu_alpha c is
    checked.

    Raises:
        PreconditionError: empty highest weight space or lambda(h_alpha) = 0
        NotAssociativizableError: the operators are not constant multiples of
            one another; carries the first offending (r, grade)
    """
    grades = grades or window
    space = highest_weight_space(module, "levelzero", window, grades)
    spec = module.spec
    occupied = [k for k in sorted(space.basis) if space.dimension(k)]
    if not occupied:
        raise PreconditionError("highest weight space is empty on the window")

    c = None
    for k in occupied:
        basis = space.basis[k]
        value = scalar_of(solve_left(basis, module.element_operator(h_alpha(spec, alpha, (0,) * spec.N), k) @ basis))
        if value is None or (c is not None and value != c):
            raise NotAssociativizableError("h_alpha is not a constant scalar on the highest weight space",
                                           witness={"grade": format_degree(k)})
        c = value
    if c == 0:
        raise PreconditionError("lambda(h_alpha) = 0")

    lambda_alpha = None
    nu = None
    for r in window.nonzero():
        for k in occupied:
            target = tuple(add(k, r))
            if target not in space.basis:
                continue
            basis = space.basis[k]
            image = module.element_operator(h_alpha(spec, alpha, r), k) @ basis
            value = scalar_of(solve_left(space.basis[target], image))
            witness = {"r": format_degree(r), "grade": format_degree(k)}
            if value is None or value == 0 or (lambda_alpha is not None and value != lambda_alpha):
                witness["value"] = "non-scalar" if value is None else format_scalar(value)
                raise NotAssociativizableError("h_alpha t^r does not act by one constant", witness=witness)
            lambda_alpha = value
            back = module.element_operator(h_alpha(spec, alpha, neg(r)), target) @ image
            value = scalar_of(solve_left(basis, back))
            if value is None or (nu is not None and value != nu):
                raise NotAssociativizableError("h_alpha t^r h_alpha t^-r is not one constant", witness=witness)
            nu = value
    if lambda_alpha is None:
        raise PreconditionError("window too small to compare h_alpha t^r operators")
    mu = nu / c
    if lambda_alpha ** 2 != mu * c:
        raise NotAssociativizableError("lambda_alpha^2 != mu_alpha lambda(h_alpha)",
                                       witness={"lambda_alpha": format_scalar(lambda_alpha), "mu_alpha": format_scalar(mu)})
    logger.info("associativized %s: lambda(h_alpha)=%s, lambda_alpha=%s, mu_alpha=%s",
                module.kind, format_scalar(c), format_scalar(lambda_alpha), format_scalar(mu))
    return AssociativeAction(space, alpha, c, lambda_alpha, mu)
