#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Lambda Appendix
===============
The functional equation for the structure constants lambda_{r,s} of
t^r t^s = lambda_{r,s} t^{r+s}:

    (bar l, s) L(r, s+l) + (bar l, r) L(s, r+l) - (bar l, r+s) L(r, s) = 0

for nonzero l, r, s. This module evaluates residuals, checks the constant
family (lambda on generic pairs, mu on opposite pairs, c when an argument is
zero), solves the equation as an exact linear system over a window, filters
the solution space through the implied equalities, builds the auxiliary
degree k for a pair (r, s), and extracts lambda_{r,s} from modules carrying
grade-shift operators.
"""

import json
import logging
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from algebra_errors import (
    AlgebraError,
    NotOfJetTypeError,
    PreconditionError,
    ReportFormatError,
    WindowOutOfRangeError,
)
from exact_core import (
    Window,
    add,
    bar,
    exact_rank,
    format_degree,
    format_scalar,
    identity,
    is_zero,
    is_zero_matrix,
    lcm_of_denominators,
    neg,
    pair,
    scale,
    sparse_nullspace,
)
from verification_report import VerificationReport

logger = logging.getLogger(__name__)

Pair = Tuple[Tuple[int, ...], Tuple[int, ...]]

_PAIR_KEY = re.compile(r"^\((?P<r>-?\d+(?:,-?\d+)*)\|(?P<s>-?\d+(?:,-?\d+)*)\)$")


def pair_key(r: Sequence[int], s: Sequence[int]) -> str:
    """'(1,0|0,-1)' for the pair ((1,0), (0,-1))."""
    return f"({format_degree(r)[1:-1]}|{format_degree(s)[1:-1]})"


def parse_pair_key(text: str) -> Pair:
    match = _PAIR_KEY.match(text.strip())
    if not match:
        raise ReportFormatError(f"not a degree pair: {text!r}")
    r = tuple(int(c) for c in match.group("r").split(","))
    s = tuple(int(c) for c in match.group("s").split(","))
    if len(r) != len(s):
        raise ReportFormatError(f"degree pair {text!r} mixes arities")
    return r, s


def family_category(x: Sequence[int], y: Sequence[int]) -> str:
    """'zero' when an argument is 0, 'opposite' when x + y = 0, else 'generic'."""
    if is_zero(x) or is_zero(y):
        return "zero"
    if is_zero(add(x, y)):
        return "opposite"
    return "generic"


def family_value(lam, mu, c, x: Sequence[int], y: Sequence[int]) -> Fraction:
    return Fraction({"zero": c, "opposite": mu, "generic": lam}[family_category(x, y)])


# ---------------------------------------------------------------------------
# Systems
# ---------------------------------------------------------------------------

@dataclass
class LambdaSystem:
    """An assignment (r, s) -> L(r, s) on all pairs of a window."""

    window: Window
    values: Dict[Pair, Fraction]
    lam: Optional[Fraction] = None
    mu: Optional[Fraction] = None
    c: Optional[Fraction] = None
    notes: List[str] = field(default_factory=list)

    @classmethod
    def family(cls, lam, mu, c, window: Window) -> "LambdaSystem":
        lam, mu, c = Fraction(lam), Fraction(mu), Fraction(c)
        values = {(r, s): family_value(lam, mu, c, r, s) for r in window for s in window}
        return cls(window, values, lam, mu, c)

    def value(self, r: Sequence[int], s: Sequence[int]) -> Fraction:
        key = (tuple(r), tuple(s))
        if key not in self.values:
            raise WindowOutOfRangeError(f"L{pair_key(r, s)} is outside the radius-{self.window.radius} window")
        return self.values[key]

    def constants(self) -> Dict[str, Optional[Fraction]]:
        """Common value per category, None for a category that is not constant."""
        seen: Dict[str, set] = {"generic": set(), "opposite": set(), "zero": set()}
        for (r, s), v in self.values.items():
            seen[family_category(r, s)].add(v)
        return {k: next(iter(v)) if len(v) == 1 else None for k, v in seen.items()}

    def constancy_report(self) -> VerificationReport:
        """
        Constant-family test: one value per category, and lambda^2 = mu c when
        all three are constant.
        """
        constants = self.constants()
        witnesses = []
        for category, value in constants.items():
            if value is None:
                sample = sorted({v for (r, s), v in self.values.items() if family_category(r, s) == category})[:4]
                witnesses.append({"inputs": [category], "residual": "values " + ", ".join(format_scalar(v) for v in sample)})
        details: Dict[str, Any] = {k: (format_scalar(v) if v is not None else None) for k, v in constants.items()}
        if not witnesses:
            lam, mu, c = constants["generic"], constants["opposite"], constants["zero"]
            factor = lam * lam / (mu * c) if mu and c else None
            details["associativity_factor"] = format_scalar(factor) if factor is not None else None
            if factor != 1:
                witnesses.append({"inputs": ["lambda^2 = mu c"],
                                  "residual": "mu c = 0" if factor is None else f"factor {format_scalar(factor)}"})
        return VerificationReport(
            check="lambda-constancy",
            family="lambda",
            N=self.window.arity,
            window=self.window.radius,
            status="fail" if witnesses else "pass",
            witnesses=witnesses,
            details=details,
        )

    def to_dict(self) -> Dict[str, str]:
        out = {pair_key(r, s): format_scalar(v) for (r, s), v in sorted(self.values.items())}
        for name, value in (("lambda", self.lam), ("mu", self.mu), ("c", self.c)):
            if value is not None:
                out[name] = format_scalar(value)
        return out

    @classmethod
    def from_dict(cls, data: Dict[str, str]) -> "LambdaSystem":
        constants = {}
        values = {}
        try:
            for key, text in data.items():
                if key in ("lambda", "mu", "c"):
                    constants[key] = Fraction(text)
                else:
                    values[parse_pair_key(key)] = Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise ReportFormatError(f"malformed lambda system: {e}") from e
        if not values:
            raise ReportFormatError("lambda system has no values")
        arity = len(next(iter(values))[0])
        radius = max(abs(c) for r, s in values for c in r + s)
        window = Window(radius, arity)
        if len(values) != len(window) ** 2:
            raise ReportFormatError("lambda system is not total on its window")
        return cls(window, values, constants.get("lambda"), constants.get("mu"), constants.get("c"))

    def save_json(self, path: str):
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, ensure_ascii=False, indent=4)
        logger.info("lambda system saved to %s", path)

    @classmethod
    def load_json(cls, path: str) -> "LambdaSystem":
        with open(path, "r", encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


def lambda_residual(system: LambdaSystem, l: Sequence[int], r: Sequence[int], s: Sequence[int]) -> Fraction:
    """(bar l, s) L(r, s+l) + (bar l, r) L(s, r+l) - (bar l, r+s) L(r, s)."""
    if is_zero(l) or is_zero(r) or is_zero(s):
        raise PreconditionError("l, r and s must be nonzero")
    b = bar(l)
    return (pair(b, s) * system.value(r, add(s, l))
            + pair(b, r) * system.value(s, add(r, l))
            - pair(b, add(r, s)) * system.value(r, s))


# ---------------------------------------------------------------------------
# Constant family
# ---------------------------------------------------------------------------

def _linear_codes(points: np.ndarray, radius: int) -> np.ndarray:
    """Linear code of each degree, injective on sums of up to three window degrees."""
    base = 6 * radius + 1
    weights = base ** np.arange(points.shape[-1] - 1, -1, -1, dtype=np.int64)
    return points @ weights


def verify_constant_family(lam, mu, c, window: Window) -> VerificationReport:
    """
    Residuals of the constant family over every admissible (l, r, s) triple,
    then the associativity consequence: t^-r t^r t^s t^-s evaluated in two
    orders gives mu^2 c and lambda^2 mu, so lambda^2 = mu c.
    """
    if window.radius < 2:
        raise PreconditionError("the constant-family check needs window radius >= 2")
    lam, mu, c = Fraction(lam), Fraction(mu), Fraction(c)
    if not (lam and mu and c):
        raise PreconditionError("lambda, mu and c must be nonzero")
    started = time.perf_counter()
    scale_factor = lcm_of_denominators((lam, mu, c))
    lam_i, mu_i, c_i = (int(v * scale_factor) for v in (lam, mu, c))

    points = np.array(window.nonzero(), dtype=np.int64)
    codes = _linear_codes(points, window.radius)
    pair_codes = codes[:, None] + codes[None, :]
    opposite_rs = pair_codes == 0
    # L(r, s); r and s are nonzero so only 'opposite' or 'generic'
    plain = np.where(opposite_rs, mu_i, lam_i)

    witnesses = []
    checked = 0
    degenerate = {"s+l=0": 0, "r+l=0": 0, "r+s=0": 0, "l=-(r+s)": 0}
    for l, code_l in zip(points, codes):
        b = np.array(bar(tuple(int(x) for x in l)), dtype=np.int64)
        paired_l = points @ b
        inside = np.abs(points + l).max(axis=1) <= window.radius
        mask = inside[:, None] & inside[None, :]
        cancels = codes + code_l == 0
        triple_zero = pair_codes + code_l == 0
        shifted_s = np.where(cancels[None, :], c_i, np.where(triple_zero, mu_i, lam_i))
        shifted_r = np.where(cancels[:, None], c_i, np.where(triple_zero, mu_i, lam_i))
        residual = (paired_l[None, :] * shifted_s + paired_l[:, None] * shifted_r
                    - (paired_l[:, None] + paired_l[None, :]) * plain)

        n_inside = int(inside.sum())
        n_cancel = int((inside & cancels).sum())
        checked += n_inside * n_inside
        degenerate["s+l=0"] += n_inside * n_cancel
        degenerate["r+l=0"] += n_cancel * n_inside
        degenerate["r+s=0"] += int((mask & opposite_rs).sum())
        degenerate["l=-(r+s)"] += int((mask & triple_zero).sum())
        for i, j in zip(*np.nonzero(mask & (residual != 0))):
            witnesses.append({
                "inputs": [format_degree(l), format_degree(points[i]), format_degree(points[j])],
                "residual": format_scalar(Fraction(int(residual[i, j]), scale_factor)),
            })

    def value(x, y):
        return family_value(lam, mu, c, x, y)

    r = s = (1,) + (0,) * (window.arity - 1)
    zero = (0,) * window.arity
    paired = value(neg(r), r) * value(s, neg(s)) * value(zero, zero)
    regrouped = value(r, s) * value(neg(r), add(r, s)) * value(s, neg(s))
    factor = regrouped / paired
    details = {
        "residual_check": "fail" if witnesses else "pass",
        "triples_checked": checked,
        "degenerate_triples": degenerate,
        "associativity_factor": format_scalar(factor),
        "lambda": format_scalar(lam),
        "mu": format_scalar(mu),
        "c": format_scalar(c),
    }
    status = "fail" if witnesses or factor != 1 else "pass"
    logger.info("constant family (%s, %s, %s): %d triples, %d residual failures, associativity factor %s",
                format_scalar(lam), format_scalar(mu), format_scalar(c), checked, len(witnesses), format_scalar(factor))
    return VerificationReport(
        check="lambda-family",
        family="lambda",
        N=window.arity,
        window=window.radius,
        status=status,
        witnesses=witnesses,
        details=details,
        timing=time.perf_counter() - started,
    )


# ---------------------------------------------------------------------------
# Nullspace oracle
# ---------------------------------------------------------------------------

def _point_index(points: np.ndarray, radius: int) -> np.ndarray:
    """Position of each point in Window iteration order (base 2R+1 digits)."""
    base = 2 * radius + 1
    weights = base ** np.arange(points.shape[-1] - 1, -1, -1, dtype=np.int64)
    return ((points + radius) * weights).sum(axis=-1)


@dataclass
class LambdaNullspace:
    window: Window
    unknowns: List[Pair]
    basis: List[List[Fraction]]
    equations: int
    family_contained: bool
    family_rank: int
    symmetrized: bool = False

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def systems(self) -> List[LambdaSystem]:
        return [LambdaSystem(self.window, dict(zip(self.unknowns, vec))) for vec in self.basis]

    def report(self) -> VerificationReport:
        witnesses = []
        if not self.family_contained:
            witnesses.append({"inputs": ["constant family"], "residual": "not in the solution space"})
        if self.family_rank != 3:
            witnesses.append({"inputs": ["constant family"], "residual": f"rank {self.family_rank}"})
        return VerificationReport(
            check="lambda-nullspace",
            family="lambda",
            N=self.window.arity,
            window=self.window.radius,
            status="fail" if witnesses else "pass",
            witnesses=witnesses,
            details={
                "unknowns": len(self.unknowns),
                "equations": self.equations,
                "nullspace_dimension": self.dimension,
                "family_rank": self.family_rank,
                "symmetrized": self.symmetrized,
            },
        )


def _normalized(row: Dict[int, int]) -> Tuple[Tuple[int, Fraction], ...]:
    items = sorted(row.items())
    lead = Fraction(items[0][1])
    return tuple((j, Fraction(v) / lead) for j, v in items)


def lambda_equations(window: Window, symmetrize: bool = False) -> Tuple[List[Pair], List[Dict[int, Fraction]]]:
    """Unknowns L(r, s) over window pairs and the deduplicated equations on them."""
    if window.radius < 2:
        raise PreconditionError("the lambda system needs window radius >= 2")
    all_points = np.array(list(window), dtype=np.int64)
    size = len(all_points)
    unknowns = [(tuple(int(c) for c in r), tuple(int(c) for c in s)) for r in all_points for s in all_points]
    points = np.array(window.nonzero(), dtype=np.int64)
    index = _point_index(points, window.radius)
    seen = set()
    rows: List[Dict[int, Fraction]] = []
    for l in points:
        b = np.array(bar(tuple(int(c) for c in l)), dtype=np.int64)
        bs = points @ b
        shifted = _point_index(points + l, window.radius)
        inside = np.abs(points + l).max(axis=-1) <= window.radius
        for i in np.nonzero(inside)[0]:
            for j in np.nonzero(inside)[0]:
                row: Dict[int, int] = {}
                for col, coef in ((index[i] * size + shifted[j], bs[j]),
                                  (index[j] * size + shifted[i], bs[i]),
                                  (index[i] * size + index[j], -(bs[i] + bs[j]))):
                    if coef:
                        row[int(col)] = row.get(int(col), 0) + int(coef)
                row = {k: v for k, v in row.items() if v}
                if not row:
                    continue
                key = _normalized(row)
                if key not in seen:
                    seen.add(key)
                    rows.append({k: Fraction(v) for k, v in row.items()})
    if symmetrize:
        for a in range(size):
            for a2 in range(a + 1, size):
                rows.append({a * size + a2: Fraction(1), a2 * size + a: Fraction(-1)})
    return unknowns, rows


def _family_vectors(unknowns: List[Pair]) -> List[List[Fraction]]:
    out = []
    for category in ("generic", "opposite", "zero"):
        out.append([Fraction(int(family_category(r, s) == category)) for r, s in unknowns])
    return out


def lambda_nullspace(window: Window, symmetrize: bool = False) -> LambdaNullspace:
    """
    Exact solution space of the functional equation on the window, with a
    check that the (lambda, mu, c) family lies in it and spans 3 dimensions.
    """
    started = time.perf_counter()
    unknowns, rows = lambda_equations(window, symmetrize)
    family = _family_vectors(unknowns)
    contained = all(sum((v * f[j] for j, v in row.items()), Fraction(0)) == 0 for row in rows for f in family)
    basis = sparse_nullspace(rows, len(unknowns))
    result = LambdaNullspace(window, unknowns, basis, len(rows), contained, exact_rank(family, len(unknowns)),
                             symmetrize)
    logger.info("lambda nullspace on radius %d (N=%d): %d unknowns, %d equations, dimension %d in %.2fs",
                window.radius, window.arity, len(unknowns), len(rows), result.dimension,
                time.perf_counter() - started)
    return result


# ---------------------------------------------------------------------------
# Implied equalities
# ---------------------------------------------------------------------------

def _collinear(r: Sequence[int], s: Sequence[int]) -> bool:
    """r in Q s for nonzero s."""
    return all(r[i] * s[j] == r[j] * s[i] for i in range(len(r)) for j in range(len(r)))


def _equalities(window: Window) -> Iterable[Tuple[str, Pair, Pair]]:
    nonzero = window.nonzero()
    for s in nonzero:
        for l in nonzero:
            if pair(l, bar(s)) == 0:
                continue
            sl = add(s, l)
            if is_zero(sl):
                continue
            yield "(l,bar s) != 0: L(s+l,s) = L(s,s)", (sl, s), (s, s)
            yield "(l,bar s) != 0: L(s,l) = L(s,s)", (s, l), (s, s)
            yield "(l,bar s) != 0: L(l,l) = L(s,s)", (l, l), (s, s)
            yield "(l,bar s) != 0: L(s+l,s+l) = L(s,s)", (sl, sl), (s, s)
        for r in nonzero:
            if not _collinear(r, s):
                yield "r not in Qs: L(r,r) = L(s,s)", (r, r), (s, s)
                yield "r not in Qs: L(r,s) = L(s,s)", (r, s), (s, s)
        for j in (-1, 2, -2, 3, -3):
            js = scale(j, s)
            yield "L(js,js) = L(s,s)", (js, js), (s, s)


def verify_lemma_consequences(systems: Sequence[LambdaSystem], window: Optional[Window] = None) -> VerificationReport:
    """
    Equalities implied by the functional equation under the pairing hypotheses,
    tested on each system; pairs outside the window are skipped. Violations
    give 'inconclusive', since the window truncates the equation.
    """
    started = time.perf_counter()
    if not systems and window is None:
        raise PreconditionError("no systems to check")
    window = window or systems[0].window
    witnesses = []
    checked = 0
    skipped = 0
    for index, system in enumerate(systems):
        for label, left, right in _equalities(window):
            if left not in system.values or right not in system.values:
                skipped += 1
                continue
            checked += 1
            a, b = system.values[left], system.values[right]
            if a != b:
                witnesses.append({
                    "inputs": [index, label, pair_key(*left), pair_key(*right)],
                    "residual": format_scalar(a - b),
                })
    status = "inconclusive" if witnesses else "pass"
    logger.info("implied equalities on %d systems: %d checked, %d skipped, %d violations",
                len(systems), checked, skipped, len(witnesses))
    return VerificationReport(
        check="lambda-lemmas",
        family="lambda",
        N=window.arity,
        window=window.radius,
        status=status,
        witnesses=witnesses[:200],
        details={"systems": len(systems), "checked": checked, "skipped": skipped, "violations": len(witnesses)},
        timing=time.perf_counter() - started,
    )


# ---------------------------------------------------------------------------
# Auxiliary degree
# ---------------------------------------------------------------------------

def construct_k(r: Sequence[int], s: Sequence[int]) -> Tuple[int, ...]:
    """
    Integral k with (r, bar k) != 0 and (k, bar s) = 0.

    Args:
        r, s: nonzero degrees of even arity N >= 4 with r not in Q s and
            (r, bar s) = 0

    Returns:
        k = -bar(r) when (r, s) = 0; otherwise k = -bar(v) with v the
        integral multiple of s/(s,s) - r/(r,s)

    Raises:
        PreconditionError: hypotheses violated
    """
    r = tuple(int(c) for c in r)
    s = tuple(int(c) for c in s)
    n = len(r)
    if n != len(s) or n % 2 or n < 4:
        raise PreconditionError(f"construct_k needs even arity >= 4, got {n}")
    if is_zero(r) or is_zero(s):
        raise PreconditionError("r and s must be nonzero")
    if _collinear(r, s):
        raise PreconditionError(f"{format_degree(r)} is a rational multiple of {format_degree(s)}")
    if pair(r, bar(s)) != 0:
        raise PreconditionError("(r, bar s) must vanish")

    rs = pair(r, s)
    if rs == 0:
        k = tuple(int(c) for c in neg(bar(r)))
    else:
        v = tuple(Fraction(a) / pair(s, s) - Fraction(b) / rs for a, b in zip(s, r))
        v = tuple(int(c * lcm_of_denominators(v)) for c in v)
        k = tuple(int(c) for c in neg(bar(v)))
    if pair(r, bar(k)) == 0 or pair(k, bar(s)) != 0:
        raise AlgebraError(f"construct_k produced {format_degree(k)} violating its conclusions")
    return k


# ---------------------------------------------------------------------------
# Extraction from modules
# ---------------------------------------------------------------------------

@dataclass
class GradeShiftAction:
    """t^r acting by base^{|r|_1} times the shift; commutative but not of constant type."""

    N: int
    dim: int = 1
    base: int = 2

    def dimension(self, grade: Sequence[int]) -> int:
        return self.dim

    def t_operator(self, r: Sequence[int], grade: Sequence[int]) -> np.ndarray:
        return Fraction(self.base) ** sum(abs(int(c)) for c in r) * identity(self.dim)


@dataclass
class SpaceAction:
    """Adapter for an associativized action: grades are those of its highest weight space."""

    action: Any

    def grades(self) -> List[Tuple[int, ...]]:
        return [k for k in sorted(self.action.space.basis) if self.action.space.dimension(k)]

    def t_operator(self, r: Sequence[int], grade: Sequence[int]) -> np.ndarray:
        return self.action.t_operator(r, grade)


def extract_lambda(module, window: Window, grades: Optional[Iterable[Sequence[int]]] = None) -> LambdaSystem:
    """
    Solve t^r t^s v = lambda_{r,s} t^{r+s} v for every window pair.

    Args:
        module: anything with ``t_operator(r, grade)``
        window: pairs (r, s) to extract
        grades: grades k used for t^r t^s on the grade-k piece; defaults to a
            window of radius 2R around 0

    Raises:
        NotOfJetTypeError: t^r t^s is not a multiple of t^{r+s}, or the
            multiple changes with the grade
        WindowOutOfRangeError: no usable grade for some pair
    """
    started = time.perf_counter()
    if grades is None:
        grades = module.grades() if hasattr(module, "grades") else list(Window(2 * window.radius, window.arity))
    grades = {tuple(int(c) for c in k) for k in grades}
    values: Dict[Pair, Fraction] = {}
    for r in window:
        for s in window:
            found = None
            for k in sorted(grades):
                ks, krs = tuple(add(k, s)), tuple(add(add(k, r), s))
                if ks not in grades or krs not in grades:
                    continue
                product = module.t_operator(r, ks) @ module.t_operator(s, k)
                target = module.t_operator(add(r, s), k)
                if is_zero_matrix(target):
                    raise PreconditionError(f"t^{format_degree(add(r, s))} is not injective at grade {format_degree(k)}")
                i, j = next((i, j) for i in range(target.shape[0]) for j in range(target.shape[1]) if target[i, j] != 0)
                value = Fraction(product[i, j]) / Fraction(target[i, j])
                witness = {"pair": pair_key(r, s), "grade": format_degree(k)}
                if not is_zero_matrix(product - value * target):
                    raise NotOfJetTypeError("t^r t^s is not proportional to t^{r+s}", witness=witness)
                if found is not None and value != found:
                    witness["values"] = [format_scalar(found), format_scalar(value)]
                    raise NotOfJetTypeError("lambda_{r,s} depends on the grade", witness=witness)
                found = value
            if found is None:
                raise WindowOutOfRangeError(f"no grade available for the pair {pair_key(r, s)}")
            values[(tuple(r), tuple(s))] = found
    system = LambdaSystem(window, values)
    constants = system.constants()
    system.lam, system.mu, system.c = constants["generic"], constants["opposite"], constants["zero"]
    logger.info("extracted lambda on radius %d in %.2fs: %s", window.radius, time.perf_counter() - started,
                {k: (format_scalar(v) if v is not None else "non-constant") for k, v in constants.items()})
    return system

