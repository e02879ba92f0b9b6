#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Symplectic Jet Modules
======================
The symplectic algebra sp_2m with its standard basis and small fibers, the
quadratic map sigma: Z^2m -> sp_2m driving the Hamiltonian action, jet modules
V (x) A for H~_N = H_N + D extended by the Laurent action, their verification
and the calibration of the coefficient profile of sigma.

Conventions: N = 2m, bar(r) = J r with J = [[0, I], [-I, 0]], and sp_2m is
{X : X^T J + J X = 0}.
"""

import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra_errors import CalibrationError, InadmissibleElementError, PreconditionError
from exact_core import (
    Window,
    add,
    bar,
    commutator,
    format_matrix,
    format_scalar,
    frac_matrix,
    identity,
    is_zero,
    is_zero_matrix,
    matrix_unit,
    pair,
    rational_vector,
    zeros,
)
from graded_algebras import Deriv
from simple_lie import symmetric_power_action
from verification_report import VerificationReport

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# sp_2m
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _sp_basis(m: int) -> Tuple[Tuple[str, ...], Tuple[np.ndarray, ...]]:
    n = 2 * m
    labels, matrices = [], []
    for i in range(m):
        for j in range(m):
            labels.append(f"A[{i + 1},{j + 1}]")
            matrices.append(matrix_unit(n, i, j) - matrix_unit(n, m + j, m + i))
    for i in range(m):
        for j in range(i, m):
            labels.append(f"B[{i + 1},{j + 1}]")
            b = matrix_unit(n, i, m + j)
            if i != j:
                b = b + matrix_unit(n, j, m + i)
            matrices.append(b)
    for i in range(m):
        for j in range(i, m):
            labels.append(f"C[{i + 1},{j + 1}]")
            c = matrix_unit(n, m + i, j)
            if i != j:
                c = c + matrix_unit(n, m + j, i)
            matrices.append(c)
    if len(matrices) != m * (2 * m + 1):
        raise AssertionError(f"sp_{n} basis has {len(matrices)} elements")
    logger.debug("sp_%d basis has m(2m+1) = %d elements, not 2N^2 - N = %d", n, len(matrices), 2 * n * n - n)
    return tuple(labels), tuple(matrices)


def sp_basis(m: int) -> List[np.ndarray]:
    """
    Standard basis of sp_2m.

    E_ij - E_{m+j,m+i} (i, j <= m), then E_{i,m+j} + E_{j,m+i} and
    E_{m+i,j} + E_{m+j,i} (i <= j); the diagonal entries of the last two
    families are the single matrix units E_{i,m+i}, E_{m+i,i}.
    """
    if m < 1:
        raise PreconditionError(f"sp_2m needs m >= 1, got {m}")
    return list(_sp_basis(m)[1])


def sp_labels(m: int) -> List[str]:
    if m < 1:
        raise PreconditionError(f"sp_2m needs m >= 1, got {m}")
    return list(_sp_basis(m)[0])


def symplectic_form(m: int) -> np.ndarray:
    """J = [[0, I], [-I, 0]] with bar(r) = J r."""
    n = 2 * m
    out = zeros(n, n)
    for i in range(m):
        out[i, m + i] = Fraction(1)
        out[m + i, i] = Fraction(-1)
    return out


def in_sp(x: np.ndarray) -> bool:
    j = symplectic_form(x.shape[0] // 2)
    return is_zero_matrix(x.T @ j + j @ x)


def sp_coordinates(x: np.ndarray) -> List[Fraction]:
    """Coordinates of x in sp_basis; PreconditionError when x is not in sp_2m."""
    n = x.shape[0]
    if n % 2 or not in_sp(x):
        raise PreconditionError("matrix is not in sp_2m")
    m = n // 2
    coords = [Fraction(x[i, j]) for i in range(m) for j in range(m)]
    coords += [Fraction(x[i, m + j]) for i in range(m) for j in range(i, m)]
    coords += [Fraction(x[m + i, j]) for i in range(m) for j in range(i, m)]
    return coords


@dataclass(eq=False)
class SpRep:
    """Finite-dimensional sp_2m-module given by one matrix per basis element."""

    m: int
    name: str
    matrices: List[np.ndarray]

    @property
    def dimension(self) -> int:
        return self.matrices[0].shape[0]

    def act(self, x: np.ndarray) -> np.ndarray:
        """Action of an arbitrary element of sp_2m given as a 2m x 2m matrix."""
        out = zeros(self.dimension, self.dimension)
        for c, mat in zip(sp_coordinates(x), self.matrices):
            if c:
                out = out + c * mat
        return out

    def bracket_failures(self) -> List[Tuple[str, str]]:
        basis = sp_basis(self.m)
        labels = sp_labels(self.m)
        failures = []
        for a, b in itertools.combinations(range(len(basis)), 2):
            lhs = commutator(self.matrices[a], self.matrices[b])
            if not is_zero_matrix(lhs - self.act(commutator(basis[a], basis[b]))):
                failures.append((labels[a], labels[b]))
        return failures


FIBERS = ("trivial", "defining", "sym2")


def sp_rep(m: int, kind: str) -> SpRep:
    """
    Small sp_2m fibers: trivial (dim 1), defining (dim 2m), sym2 (the adjoint,
    dim m(2m+1); for m = 1 the 3-dimensional module).
    """
    basis = sp_basis(m)
    if kind == "trivial":
        matrices = [zeros(1, 1) for _ in basis]
    elif kind == "defining":
        matrices = list(basis)
    elif kind in ("sym2", "adjoint"):
        matrices = [symmetric_power_action(x, 2) for x in basis]
    else:
        raise PreconditionError(f"unknown fiber {kind!r}; expected one of {FIBERS}")
    rep = SpRep(m, kind, matrices)
    logger.debug("sp_%d fiber %s of dimension %d", 2 * m, kind, rep.dimension)
    return rep


# ---------------------------------------------------------------------------
# sigma
# ---------------------------------------------------------------------------

FAMILY_NAMES = (
    "r_{m+i}^2 E_{m+i,i}",
    "r_i r_{m+i} (E_ii - E_{m+i,m+i})",
    "r_i^2 E_{i,m+i}",
    "r_{m+i} r_{m+j} (E_{m+j,i} + E_{m+i,j})",
    "r_i r_{m+j} (E_ij - E_{m+j,m+i})",
    "r_i r_j (E_{i,m+j} + E_{j,m+i})",
)


@dataclass(frozen=True)
class JetProfile:
    """Rational multiplier per summand family of sigma."""

    coefficients: Tuple[Fraction, ...]

    def __post_init__(self):
        coefficients = rational_vector(self.coefficients)
        if len(coefficients) != len(FAMILY_NAMES):
            raise PreconditionError(f"profile needs {len(FAMILY_NAMES)} coefficients")
        object.__setattr__(self, "coefficients", coefficients)

    def scaled(self, c) -> "JetProfile":
        return JetProfile(tuple(Fraction(c) * a for a in self.coefficients))

    def with_families(self, families: Sequence[int], values: Sequence[Fraction]) -> "JetProfile":
        coefficients = list(self.coefficients)
        for k, v in zip(families, values):
            coefficients[k] = Fraction(v)
        return JetProfile(tuple(coefficients))

    def format(self) -> str:
        return "(" + ", ".join(format_scalar(c) for c in self.coefficients) + ")"


# as printed, with the diagonal term read as r_i r_{m+i}
LITERAL_PROFILE = JetProfile((1, 1, 1, 1, 1, -1))
# sigma(r) = -r r^T J
CALIBRATED_PROFILE = JetProfile((1, 1, -1, 1, 1, -1))


def active_families(m: int) -> Tuple[int, ...]:
    """Families with at least one term; the i < j and i != j families vanish for m = 1."""
    return (0, 1, 2) if m == 1 else tuple(range(len(FAMILY_NAMES)))


def sigma(m: int, r: Sequence[int], profile: JetProfile = CALIBRATED_PROFILE) -> np.ndarray:
    """Quadratic element of sp_2m attached to the degree r."""
    if len(r) != 2 * m:
        raise PreconditionError(f"degree {tuple(r)} has arity {len(r)}, expected {2 * m}")
    c1, c2, c3, c4, c5, c6 = profile.coefficients
    n = 2 * m
    out = zeros(n, n)
    for i in range(m):
        p, q = r[i], r[m + i]
        out[m + i, i] += c1 * q * q
        out[i, i] += c2 * p * q
        out[m + i, m + i] -= c2 * p * q
        out[i, m + i] += c3 * p * p
    for i in range(m):
        for j in range(m):
            if i < j:
                value = c4 * r[m + i] * r[m + j]
                out[m + j, i] += value
                out[m + i, j] += value
                value = c6 * r[i] * r[j]
                out[i, m + j] += value
                out[j, m + i] += value
            if i != j:
                value = c5 * r[i] * r[m + j]
                out[i, j] += value
                out[m + j, m + i] -= value
    return out


def sigma_identity_residual(fiber: SpRep, r, s, profile: JetProfile) -> np.ndarray:
    """[sigma(r), sigma(s)] - (bar r, s)(sigma(r+s) - sigma(r) - sigma(s)) on the fiber."""
    m = fiber.m
    a, b, ab = (fiber.act(sigma(m, x, profile)) for x in (r, s, add(r, s)))
    return commutator(a, b) - pair(bar(r), s) * (ab - a - b)


# ---------------------------------------------------------------------------
# Jet modules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LaurentT:
    """The multiplication operator t^r."""

    r: Tuple[int, ...]


@dataclass(eq=False)
class JetModule:
    """
    V (x) A for H~_N extended by A, with N = 2m:

    * d_i (v (x) t^k) = (k_i + u_i) v (x) t^k
    * h_r (v (x) t^k) = ((bar r, k) + L_w(r)) v (x) t^{r+k} + sigma(r) v (x) t^{r+k}
    * t^r (v (x) t^k) = v (x) t^{r+k}

    where L_w(r) = sum r_{m+i} w_{m+i} - sum r_i w_i. Operators are matrices on
    the fiber from grade k to the target grade.
    """

    fiber: SpRep
    u: Tuple[Fraction, ...]
    w: Tuple[Fraction, ...]
    profile: JetProfile = CALIBRATED_PROFILE
    _sigma_cache: Dict[Tuple[int, ...], np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.u = rational_vector(self.u)
        self.w = rational_vector(self.w)
        if len(self.u) != self.N or len(self.w) != self.N:
            raise PreconditionError(f"shift vectors must have arity {self.N}")

    @property
    def m(self) -> int:
        return self.fiber.m

    @property
    def N(self) -> int:
        return 2 * self.fiber.m

    @property
    def shift(self) -> Tuple[Fraction, ...]:
        return self.u

    def dimension(self, grade: Sequence[int]) -> int:
        return self.fiber.dimension

    def linear_shift(self, r: Sequence[int]) -> Fraction:
        m = self.m
        return sum((r[m + i] * self.w[m + i] - r[i] * self.w[i] for i in range(m)), Fraction(0))

    def sigma_operator(self, r: Sequence[int]) -> np.ndarray:
        r = tuple(r)
        cached = self._sigma_cache.get(r)
        if cached is None:
            cached = self.fiber.act(sigma(self.m, r, self.profile))
            self._sigma_cache[r] = cached
        return cached

    def h_operator(self, r: Sequence[int], grade: Sequence[int]) -> np.ndarray:
        if is_zero(r):
            return zeros(self.fiber.dimension, self.fiber.dimension)
        scalar = pair(bar(r), grade) + self.linear_shift(r)
        return scalar * identity(self.fiber.dimension) + self.sigma_operator(r)

    def d_operator(self, u: Sequence[Fraction], grade: Sequence[int]) -> np.ndarray:
        return pair(u, add(grade, self.u)) * identity(self.fiber.dimension)

    def t_operator(self, r: Sequence[int], grade: Sequence[int]) -> np.ndarray:
        return identity(self.fiber.dimension)

    def operator(self, symbol, grade: Sequence[int]) -> np.ndarray:
        """Matrix of a generator of H~_N or of a t^r, from grade to grade + deg."""
        if isinstance(symbol, LaurentT):
            return self.t_operator(symbol.r, grade)
        if isinstance(symbol, Deriv):
            if is_zero(symbol.r):
                return self.d_operator(symbol.u, grade)
            line = bar(symbol.r)
            lam = pair(symbol.u, line) / pair(line, line)
            if any(a != lam * b for a, b in zip(symbol.u, line)):
                raise InadmissibleElementError(f"D({symbol.u}|{symbol.r}) is not in H_N")
            return lam * self.h_operator(symbol.r, grade)
        raise InadmissibleElementError(f"{symbol!r} does not act on a jet module")

    def weights_at(self, grade: Sequence[int]) -> List[Tuple[Fraction, ...]]:
        """d-eigenvalues of the fiber basis at a grade."""
        return [tuple(Fraction(k) + c for k, c in zip(grade, self.u))] * self.fiber.dimension


def jet_module(fiber: SpRep, u: Optional[Sequence] = None, w: Optional[Sequence] = None,
               profile: JetProfile = CALIBRATED_PROFILE) -> JetModule:
    n = 2 * fiber.m
    return JetModule(fiber, tuple(u or (0,) * n), tuple(w or (0,) * n), profile)


def jet_action(module: JetModule, generator, vector: Sequence, grade: Sequence[int]) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """
    Apply d_i, h_r or t^r to the vector v (x) t^grade.

    Returns:
        (coordinates of the image, its grade)
    """
    target = add(grade, generator.r)
    column = frac_matrix([[c] for c in vector])
    image = module.operator(generator, grade) @ column
    return image[:, 0], tuple(int(c) for c in target)


def _jet_checks(module: JetModule, r, s, k) -> List[Tuple[str, np.ndarray]]:
    beta = pair(bar(r), s)
    rs = add(r, s)
    out = []
    h_r, h_s = module.h_operator(r, k), module.h_operator(s, k)
    lhs = module.h_operator(r, add(k, s)) @ h_s - module.h_operator(s, add(k, r)) @ h_r
    out.append(("[h_r,h_s]", lhs - beta * module.h_operator(rs, k)))
    t_prod = module.t_operator(r, add(k, s)) @ module.t_operator(s, k)
    out.append(("t^r t^s", t_prod - module.t_operator(rs, k)))
    lhs = module.h_operator(r, add(k, s)) @ module.t_operator(s, k) - module.t_operator(s, add(k, r)) @ h_r
    out.append(("[h_r,t^s]", lhs - beta * module.t_operator(rs, k)))
    for i in range(module.N):
        e = tuple(Fraction(int(j == i)) for j in range(module.N))
        lhs = module.d_operator(e, add(k, r)) @ h_r - h_r @ module.d_operator(e, k)
        out.append((f"[d_{i + 1},h_r]", lhs - r[i] * h_r))
    return out


def verify_jet_module(module: JetModule, window: Window, grades: Optional[Window] = None) -> VerificationReport:
    """
    Exact jet-module identities for all window pairs (r, s) and grades k:
    [h_r, h_s] = (bar r, s) h_{r+s}, t^r t^s = t^{r+s}, [d_i, h_r] = r_i h_r and
    [h_r, t^s] = (bar r, s) t^{r+s}.
    """
    if window.radius < 2:
        raise PreconditionError("verify_jet_module needs window radius >= 2")
    if window.arity != module.N:
        raise PreconditionError(f"window arity {window.arity} does not match N={module.N}")
    grades = grades or window
    started = time.perf_counter()
    witnesses = []
    checked = 0
    degrees = list(window)
    for r in degrees:
        for s in degrees:
            for k in grades:
                for name, residual in _jet_checks(module, r, s, k):
                    checked += 1
                    if not is_zero_matrix(residual):
                        witnesses.append({
                            "inputs": [name, list(r), list(s), list(k)],
                            "residual": format_matrix(residual),
                        })
    logger.info("jet module %s fiber, profile %s: %d identities, %d failures",
                module.fiber.name, module.profile.format(), checked, len(witnesses))
    return VerificationReport(
        check="jet-module",
        family="jet",
        N=module.N,
        window=window.radius,
        status="fail" if witnesses else "pass",
        witnesses=witnesses,
        details={
            "fiber": module.fiber.name,
            "fiber_dimension": module.fiber.dimension,
            "profile": module.profile.format(),
            "identities_checked": checked,
        },
        timing=time.perf_counter() - started,
    )


# ---------------------------------------------------------------------------
# Calibration
# ---------------------------------------------------------------------------

CALIBRATION_CHOICES = tuple(Fraction(c) for c in (1, -1, Fraction(1, 2), Fraction(-1, 2), 2, -2))


@dataclass
class CalibrationResult:
    profile: JetProfile
    distance: int
    alternatives: List[JetProfile]
    searched: int


def _identity_failure(fiber: SpRep, pairs, profile: JetProfile) -> Optional[Tuple[tuple, tuple, np.ndarray]]:
    for r, s in pairs:
        residual = sigma_identity_residual(fiber, r, s, profile)
        if not is_zero_matrix(residual):
            return r, s, residual
    return None


def calibrate_jet_coefficients(m: int, fiber: SpRep, window: Window) -> CalibrationResult:
    """
    Search multipliers in {+-1, +-1/2, +-2} on the active summand families for
    profiles satisfying [sigma(r), sigma(s)] = (bar r, s)(sigma(r+s) - sigma(r) - sigma(s))
    on the fiber for all window pairs.

    Candidates are visited by Hamming distance from the literal profile; the
    first passing distance level is searched completely and its first profile
    returned, the rest as alternatives.

    Raises:
        CalibrationError: no candidate passes; carries the best residual found
    """
    if window.radius < 2:
        raise PreconditionError("calibration needs window radius >= 2")
    if fiber.m != m or window.arity != 2 * m:
        raise PreconditionError("fiber, m and window arity disagree")
    families = active_families(m)
    literal = [LITERAL_PROFILE.coefficients[k] for k in families]
    candidates = list(itertools.product(CALIBRATION_CHOICES, repeat=len(families)))
    by_distance: Dict[int, List[tuple]] = {}
    for values in candidates:
        distance = sum(a != b for a, b in zip(values, literal))
        by_distance.setdefault(distance, []).append(values)

    pairs = [(r, s) for r in window.nonzero() for s in window.nonzero()]
    searched = 0
    best = None
    for distance in sorted(by_distance):
        passing = []
        for values in by_distance[distance]:
            profile = LITERAL_PROFILE.with_families(families, values)
            searched += 1
            failure = _identity_failure(fiber, pairs, profile)
            if failure is None:
                passing.append(profile)
            elif best is None:
                best = (profile, failure)
        if passing:
            logger.info("calibrated sigma for sp_%d fiber %s: %s (distance %d, %d alternatives)",
                        2 * m, fiber.name, passing[0].format(), distance, len(passing) - 1)
            return CalibrationResult(passing[0], distance, passing[1:], searched)
    profile, (r, s, residual) = best
    raise CalibrationError(
        f"no profile satisfies the sigma identity on the {fiber.name} fiber",
        best_profile=profile.format(),
        best_residual=f"r={r}, s={s}: {format_matrix(residual)}",
    )
