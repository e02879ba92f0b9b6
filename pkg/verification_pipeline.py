#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Verification Pipeline
=====================
Orchestrates a verification run: builds the algebras and modules named in a
run configuration, executes the requested checks and writes the JSON bundle
and the text report.

Configuration is layered: built-in defaults, then ``TOROIDAL_*`` environment
variables (a ``.env`` file is honoured), then an INI file, then command-line
flags.

Usage:
    python verification_pipeline.py jacobi --family tauH --N 4 --g sl2 --radius 2
    python verification_pipeline.py jet --m 1 --fiber defining --radius 3 --calibrate
    python verification_pipeline.py lambda --N 2 --radius 2 --lam 2 --mu 4 --c 1
    python verification_pipeline.py diff run_a.json run_b.json
"""

import argparse
import configparser
import logging
import os
import re
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from dotenv import load_dotenv

from algebra_errors import AlgebraError, ConfigError, ReportFormatError
from eala_forms import FORM_FAMILIES, FormSpec, form_agreement, verify_ea_axioms, verify_invariance, \
    verify_nondegeneracy, verify_symmetry
from exact_core import Window, format_scalar, to_scalar
from graded_algebras import DECOMPOSITIONS, AlgebraSpec, Family, algebra_for, verify_closure, verify_jacobi
from lambda_appendix import extract_lambda, lambda_nullspace, verify_constant_family, verify_lemma_consequences
from loop_modules import evaluation_module, highest_weight_space, realization_module, verify_integrability, \
    verify_representation
from roots_weyl import random_unimodular, shear_matrix, verify_automorphism, verify_kb_span
from sp_jet_modules import CALIBRATED_PROFILE, FIBERS, calibrate_jet_coefficients, jet_module, sp_rep, \
    verify_jet_module
from verification_report import ReportBundle, VerificationReport, report_diff
from verma_modules import QUOTIENT_LABEL, character_top, induced_module, simple_quotient_window

logger = logging.getLogger(__name__)

CHECKS = ("jacobi", "closure", "form", "eala", "automorphism", "jet", "evaluation", "realization",
          "induced", "lambda")
VERBS = CHECKS + ("all", "diff")

MAX_RADIUS = 4
MAX_N = 6

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2

ENV_PREFIX = "TOROIDAL_"

# families on which every unimodular B acts by automorphisms
AUTOMORPHISM_FAMILIES = (Family.TOROIDAL, Family.FULL_TOROIDAL, Family.TAU_S, Family.SN, Family.DER_A)

DEFAULT_CONFIG = {
    "algebra": {
        "family": "tauH",
        "N": "2",
        "g": "sl2",
    },
    "window": {
        "radius": "2",
    },
    "module": {
        "tag": "levelzero",
        "m": "1",
        "fiber": "defining",
        "calibrate": "false",
        "highest_weights": "1;1",
        "points": "",
        "realization_weight": "1",
        "top_labels": "0",
        "depth": "2",
        "nilpotency_bound": "4",
    },
    "lambda": {
        "lam": "1",
        "mu": "1",
        "c": "1",
    },
    "run": {
        "checks": "all",
        "workers": "1",
        "sample_limit": "250000",
        "seed": "0",
        "strict": "false",
        "unsafe_large": "false",
        "shear": "1",
        "random_automorphisms": "2",
    },
    "output": {
        "directory": "output",
        "json_file": "verification_report.json",
        "log_file": "verification.log",
        "log_level": "INFO",
    },
}

# CLI dest -> (section, key)
CLI_FIELDS = {
    "family": ("algebra", "family"),
    "N": ("algebra", "N"),
    "g": ("algebra", "g"),
    "radius": ("window", "radius"),
    "tag": ("module", "tag"),
    "m": ("module", "m"),
    "fiber": ("module", "fiber"),
    "calibrate": ("module", "calibrate"),
    "highest_weights": ("module", "highest_weights"),
    "points": ("module", "points"),
    "realization_weight": ("module", "realization_weight"),
    "top_labels": ("module", "top_labels"),
    "depth": ("module", "depth"),
    "nilpotency_bound": ("module", "nilpotency_bound"),
    "lam": ("lambda", "lam"),
    "mu": ("lambda", "mu"),
    "c": ("lambda", "c"),
    "workers": ("run", "workers"),
    "sample_limit": ("run", "sample_limit"),
    "seed": ("run", "seed"),
    "strict": ("run", "strict"),
    "unsafe_large": ("run", "unsafe_large"),
    "shear": ("run", "shear"),
    "random_automorphisms": ("run", "random_automorphisms"),
    "output_dir": ("output", "directory"),
    "json_file": ("output", "json_file"),
    "log_file": ("output", "log_file"),
    "log_level": ("output", "log_level"),
}


# ---------------------------------------------------------------------------
# Run configuration
# ---------------------------------------------------------------------------

def _as_int(section: str, key: str, value: str, line: Optional[int] = None) -> int:
    try:
        return int(str(value).strip())
    except ValueError:
        raise ConfigError(f"expected an integer, got {value!r}", field=f"{section}.{key}", line=line)


def _as_bool(section: str, key: str, value: str, line: Optional[int] = None) -> bool:
    states = configparser.ConfigParser.BOOLEAN_STATES
    text = str(value).strip().lower()
    if text not in states:
        raise ConfigError(f"expected a boolean, got {value!r}", field=f"{section}.{key}", line=line)
    return states[text]


def _as_scalar(section: str, key: str, value: str, line: Optional[int] = None) -> Fraction:
    try:
        return to_scalar(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"expected a rational number, got {value!r}", field=f"{section}.{key}", line=line)


def _as_vectors(section: str, key: str, value: str, line: Optional[int] = None) -> List[Tuple[Fraction, ...]]:
    """``"1,1;2,2"`` -> [(1, 1), (2, 2)]; an empty string is an empty list."""
    text = str(value).strip()
    if not text:
        return []
    try:
        return [tuple(to_scalar(c.strip()) for c in item.split(",")) for item in text.split(";")]
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"expected ';'-separated vectors of rationals, got {value!r}",
                          field=f"{section}.{key}", line=line)


def _as_int_vectors(section: str, key: str, value: str, line: Optional[int] = None) -> List[Tuple[int, ...]]:
    vectors = _as_vectors(section, key, value, line)
    if any(c.denominator != 1 for v in vectors for c in v):
        raise ConfigError(f"expected integer labels, got {value!r}", field=f"{section}.{key}", line=line)
    return [tuple(int(c) for c in v) for v in vectors]


def _sl_rank(value: str, line: Optional[int] = None) -> int:
    match = re.fullmatch(r"\s*sl_?(\d+)\s*", str(value))
    if not match or int(match.group(1)) < 2:
        raise ConfigError(f"g must be sl<n> with n >= 2, got {value!r}", field="algebra.g", line=line)
    return int(match.group(1))


@dataclass
class RunConfig:
    """Typed, validated view of the merged configuration sections."""

    family: Family = Family.TAU_H
    N: int = 2
    sl_n: int = 2
    radius: int = 2
    tag: str = "levelzero"
    m: int = 1
    fiber: str = "defining"
    calibrate: bool = False
    highest_weights: List[Tuple[int, ...]] = field(default_factory=lambda: [(1,), (1,)])
    points: List[Tuple[Fraction, ...]] = field(default_factory=list)
    realization_weight: Tuple[int, ...] = (1,)
    top_labels: Tuple[Fraction, ...] = (Fraction(0),)
    depth: int = 2
    nilpotency_bound: int = 4
    lam: Fraction = Fraction(1)
    mu: Fraction = Fraction(1)
    c: Fraction = Fraction(1)
    checks: List[str] = field(default_factory=lambda: list(CHECKS))
    workers: int = 1
    sample_limit: int = 250000
    seed: int = 0
    strict: bool = False
    unsafe_large: bool = False
    shear: int = 1
    random_automorphisms: int = 2
    output_dir: str = "output"
    json_file: str = "verification_report.json"
    log_file: str = "verification.log"
    log_level: str = "INFO"

    @classmethod
    def from_sections(cls, sections: Dict[str, Dict[str, str]],
                      lines: Optional[Dict[Tuple[str, str], int]] = None) -> "RunConfig":
        """
        Coerce string-valued sections into a RunConfig.

        Args:
            sections: merged ``{section: {key: value}}``
            lines: optional source line of each (section, key), for diagnostics

        Raises:
            ConfigError: on a malformed value or a violated constraint
        """
        lines = lines or {}

        def get(section, key):
            return sections[section][key], lines.get((section, key))

        value, line = get("algebra", "family")
        try:
            family = Family(value.strip())
        except ValueError:
            raise ConfigError(f"unknown family {value!r}; expected one of {[f.value for f in Family]}",
                              field="algebra.family", line=line)

        checks_value, checks_line = get("run", "checks")
        checks = [c.strip() for c in checks_value.split(",") if c.strip()]
        if "all" in checks:
            checks = list(CHECKS)
        for name in checks:
            if name not in CHECKS:
                raise ConfigError(f"unknown check {name!r}", field="run.checks", line=checks_line)

        config = cls(
            family=family,
            N=_as_int("algebra", "N", *get("algebra", "N")),
            sl_n=_sl_rank(*get("algebra", "g")),
            radius=_as_int("window", "radius", *get("window", "radius")),
            tag=get("module", "tag")[0].strip(),
            m=_as_int("module", "m", *get("module", "m")),
            fiber=get("module", "fiber")[0].strip(),
            calibrate=_as_bool("module", "calibrate", *get("module", "calibrate")),
            highest_weights=_as_int_vectors("module", "highest_weights", *get("module", "highest_weights")),
            points=_as_vectors("module", "points", *get("module", "points")),
            realization_weight=next(iter(
                _as_int_vectors("module", "realization_weight", *get("module", "realization_weight"))), ()),
            top_labels=next(iter(_as_vectors("module", "top_labels", *get("module", "top_labels"))), ()),
            depth=_as_int("module", "depth", *get("module", "depth")),
            nilpotency_bound=_as_int("module", "nilpotency_bound", *get("module", "nilpotency_bound")),
            lam=_as_scalar("lambda", "lam", *get("lambda", "lam")),
            mu=_as_scalar("lambda", "mu", *get("lambda", "mu")),
            c=_as_scalar("lambda", "c", *get("lambda", "c")),
            checks=checks,
            workers=_as_int("run", "workers", *get("run", "workers")),
            sample_limit=_as_int("run", "sample_limit", *get("run", "sample_limit")),
            seed=_as_int("run", "seed", *get("run", "seed")),
            strict=_as_bool("run", "strict", *get("run", "strict")),
            unsafe_large=_as_bool("run", "unsafe_large", *get("run", "unsafe_large")),
            shear=_as_int("run", "shear", *get("run", "shear")),
            random_automorphisms=_as_int("run", "random_automorphisms", *get("run", "random_automorphisms")),
            output_dir=get("output", "directory")[0].strip(),
            json_file=get("output", "json_file")[0].strip(),
            log_file=get("output", "log_file")[0].strip(),
            log_level=get("output", "log_level")[0].strip().upper(),
        )
        config.validate(lines)
        return config

    def validate(self, lines: Optional[Dict[Tuple[str, str], int]] = None):
        lines = lines or {}
        if not self.unsafe_large:
            if self.radius > MAX_RADIUS:
                raise ConfigError(f"window radius {self.radius} exceeds the cap {MAX_RADIUS}; pass --unsafe-large",
                                  field="window.radius", line=lines.get(("window", "radius")))
            if self.N > MAX_N or 2 * self.m > MAX_N:
                raise ConfigError(f"N exceeds the cap {MAX_N}; pass --unsafe-large",
                                  field="algebra.N", line=lines.get(("algebra", "N")))
        if self.radius < 1:
            raise ConfigError("window radius must be positive", field="window.radius",
                              line=lines.get(("window", "radius")))
        try:
            self.algebra_spec()
        except AlgebraError as e:
            raise ConfigError(str(e), field="algebra.N", line=lines.get(("algebra", "N")))
        if self.tag not in DECOMPOSITIONS:
            raise ConfigError(f"unknown decomposition {self.tag!r}; expected one of {DECOMPOSITIONS}",
                              field="module.tag", line=lines.get(("module", "tag")))
        if self.fiber not in FIBERS:
            raise ConfigError(f"unknown fiber {self.fiber!r}; expected one of {FIBERS}",
                              field="module.fiber", line=lines.get(("module", "fiber")))
        if self.m < 1:
            raise ConfigError("m must be positive", field="module.m", line=lines.get(("module", "m")))
        if self.workers < 1:
            raise ConfigError("workers must be at least 1", field="run.workers", line=lines.get(("run", "workers")))
        if self.sample_limit < 1:
            raise ConfigError("sample_limit must be positive", field="run.sample_limit",
                              line=lines.get(("run", "sample_limit")))
        if self.log_level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ConfigError(f"unknown log level {self.log_level!r}", field="output.log_level",
                              line=lines.get(("output", "log_level")))

    def algebra_spec(self) -> AlgebraSpec:
        return AlgebraSpec(self.family, self.N, self.sl_n)

    def window(self) -> Window:
        return Window(self.radius, self.N)

    def evaluation_points(self) -> List[Tuple[Fraction, ...]]:
        """Configured points, or (i, ..., i) for i = 1..p."""
        if self.points:
            return self.points
        return [(Fraction(i + 1),) * self.N for i in range(len(self.highest_weights))]

    @property
    def json_path(self) -> str:
        return os.path.join(self.output_dir, self.json_file)

    @property
    def text_path(self) -> str:
        return os.path.splitext(self.json_path)[0] + ".txt"

    def echo(self) -> Dict[str, Any]:
        """Config echo for the report; output locations and logging are left out."""
        data = asdict(self)
        for key in ("output_dir", "json_file", "log_file", "log_level"):
            data.pop(key)
        data["family"] = self.family.value

        def render(value):
            if isinstance(value, Fraction):
                return format_scalar(value)
            if isinstance(value, (list, tuple)):
                return [render(v) for v in value]
            return value

        return {key: render(value) for key, value in data.items()}


def _env_overrides() -> Dict[str, Dict[str, str]]:
    """``TOROIDAL_<KEY>`` variables (and ``LOG_LEVEL``) mapped onto config sections."""
    load_dotenv()
    overrides: Dict[str, Dict[str, str]] = {}
    for section, values in DEFAULT_CONFIG.items():
        for key in values:
            name = ENV_PREFIX + key.upper()
            if name in os.environ:
                overrides.setdefault(section, {})[key] = os.environ[name]
    if "LOG_LEVEL" in os.environ and ENV_PREFIX + "LOG_LEVEL" not in os.environ:
        overrides.setdefault("output", {})["log_level"] = os.environ["LOG_LEVEL"]
    return overrides


def _key_lines(text: str) -> Dict[Tuple[str, str], int]:
    """Source line of every ``key = value`` inside a ``[section]``."""
    lines: Dict[Tuple[str, str], int] = {}
    section = None
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped[0] in "#;":
            continue
        header = re.fullmatch(r"\[([^\]]+)\]", stripped)
        if header:
            section = header.group(1).strip()
            continue
        key = re.split(r"[=:]", stripped, maxsplit=1)[0].strip()
        if section is not None and key:
            lines[(section, key)] = number
    return lines


def read_ini(path: str) -> Tuple[Dict[str, Dict[str, str]], Dict[Tuple[str, str], int]]:
    """
    Read an INI run file into ``{section: {key: value}}`` plus key line numbers.

    Raises:
        ConfigError: unreadable file, syntax error, unknown section or key
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}")

    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text, source=path)
    except configparser.MissingSectionHeaderError as e:
        raise ConfigError(f"{path} has no section header", line=e.lineno)
    except configparser.ParsingError as e:
        errors = getattr(e, "errors", None)
        raise ConfigError(f"syntax error in {path}", line=errors[0][0] if errors else None)
    except (configparser.DuplicateOptionError, configparser.DuplicateSectionError) as e:
        raise ConfigError(f"duplicate entry in {path}: {e.message}", line=e.lineno)

    lines = _key_lines(text)
    sections: Dict[str, Dict[str, str]] = {}
    for section in parser.sections():
        if section not in DEFAULT_CONFIG:
            raise ConfigError(f"unknown section [{section}]", field=section)
        for key, value in parser.items(section):
            if key not in DEFAULT_CONFIG[section]:
                raise ConfigError(f"unknown key {key!r}", field=f"{section}.{key}", line=lines.get((section, key)))
            sections.setdefault(section, {})[key] = value
    return sections, lines


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

class VerificationPipeline:
    """
    Runs the configured checks and assembles a deterministic report bundle.
    Each check is isolated: an exception becomes a failing report entry.
    """

    def __init__(self, config_file=None, overrides: Optional[Dict[str, Dict[str, str]]] = None):
        """
        Initialize the verification pipeline.

        Args:
            config_file (str, optional): INI run file. Defaults to None.
            overrides (dict, optional): CLI values by section; they win over everything else.
        """
        self.config = self._load_config(config_file, overrides or {})
        self.bundle: Optional[ReportBundle] = None
        logger.info("Verification pipeline initialized")

    def _load_config(self, config_file, overrides) -> RunConfig:
        """Merge defaults, environment, INI file and overrides, then validate."""
        sections = {section: dict(values) for section, values in DEFAULT_CONFIG.items()}
        lines: Dict[Tuple[str, str], int] = {}

        layers = [_env_overrides()]
        if config_file:
            try:
                user_sections, lines = read_ini(config_file)
            except ConfigError as e:
                logger.error(f"Error loading config file: {str(e)}")
                raise
            layers.append(user_sections)
            logger.info(f"Configuration loaded from {config_file}")
        layers.append(overrides)

        for layer in layers:
            for section, values in layer.items():
                sections.setdefault(section, {}).update(values)
        return RunConfig.from_sections(sections, lines)

    def run_pipeline(self) -> bool:
        """Execute the configured checks; True when nothing failed (strictly, if requested)."""
        logger.info("Starting verification pipeline")
        started = time.perf_counter()

        # Step 1: Run the checks
        reports: List[VerificationReport] = []
        for name in self.config.checks:
            reports.extend(self._run_check(name))

        # Step 2: Assemble the bundle
        self.bundle = ReportBundle(reports, self.config.echo())

        # Step 3: Write the JSON bundle and the text report
        self._save_reports()

        failed = self.bundle.failed(self.config.strict)
        logger.info(f"Verification pipeline finished in {time.perf_counter() - started:.2f}s: "
                    f"{self.bundle.status}")
        if not failed:
            logger.info("Verification pipeline completed successfully")
        return not failed

    def _run_check(self, name: str) -> List[VerificationReport]:
        handler: Callable[[], List[VerificationReport]] = getattr(self, f"_check_{name}")
        logger.info(f"Running check: {name}")
        try:
            return handler()
        except Exception as e:
            logger.error(f"Check {name} failed: {str(e)}")
            return [self._error_report(name, e)]

    def _error_report(self, name: str, error: Exception) -> VerificationReport:
        details = {"error": str(error), "error_type": type(error).__name__}
        for attr in ("best_profile", "best_residual", "witness"):
            if getattr(error, attr, None) is not None:
                details[attr] = str(getattr(error, attr))
        return VerificationReport(
            check=name,
            family=self.config.family.value,
            N=self.config.N,
            window=self.config.radius,
            status="fail",
            details=details,
        )

    def _skipped(self, name: str, reason: str) -> List[VerificationReport]:
        logger.info(f"Check {name} skipped: {reason}")
        return [VerificationReport(
            check=name,
            family=self.config.family.value,
            N=self.config.N,
            window=self.config.radius,
            status="inconclusive",
            details={"skipped": reason},
        )]

    def _sweep_args(self) -> Dict[str, int]:
        return {"sample_limit": self.config.sample_limit, "seed": self.config.seed, "workers": self.config.workers}

    # Checks

    def _check_jacobi(self) -> List[VerificationReport]:
        return [verify_jacobi(self.config.algebra_spec(), self.config.window(), **self._sweep_args())]

    def _check_closure(self) -> List[VerificationReport]:
        spec = self.config.algebra_spec()
        if spec.family is not Family.TAU_H:
            return self._skipped("closure", f"triangular decompositions are defined on tauH, not {spec.family.value}")
        return [verify_closure(spec, self.config.tag, self.config.window(), **self._sweep_args())]

    def _check_form(self) -> List[VerificationReport]:
        spec = self.config.algebra_spec()
        if spec.family not in FORM_FAMILIES:
            return self._skipped("form", f"no invariant form on {spec.family.value}")
        form_spec = FormSpec(spec)
        window = self.config.window()
        return [
            verify_symmetry(form_spec, window, **self._sweep_args()),
            verify_invariance(form_spec, window, **self._sweep_args()),
            verify_nondegeneracy(form_spec, window),
            form_agreement(form_spec, window),
        ]

    def _check_eala(self) -> List[VerificationReport]:
        spec = self.config.algebra_spec()
        if spec.family not in FORM_FAMILIES:
            return self._skipped("eala", f"no invariant form on {spec.family.value}")
        return [verify_ea_axioms(FormSpec(spec), self.config.window(), self.config.nilpotency_bound)]

    def _check_automorphism(self) -> List[VerificationReport]:
        config = self.config
        spec = config.algebra_spec()
        if spec.family not in AUTOMORPHISM_FAMILIES:
            logger.warning(f"{spec.family.value} is not stable under GL_N(Z); running the automorphism suite on tauS")
            spec = AlgebraSpec(Family.TAU_S, config.N, config.sl_n)
        window = config.window()
        rng = np.random.default_rng(config.seed)
        matrices = [random_unimodular(config.N, rng) for _ in range(config.random_automorphisms)]
        if config.N >= 2:
            matrices.insert(0, shear_matrix(config.shear, 1, config.N))
        reports = [verify_automorphism(spec, b, window, **self._sweep_args()) for b in matrices]
        if config.N % 2 == 0:
            reports.extend(verify_kb_span(b, window, config.sl_n) for b in matrices)
        return reports

    def _check_jet(self) -> List[VerificationReport]:
        config = self.config
        fiber = sp_rep(config.m, config.fiber)
        window = Window(config.radius, 2 * config.m)
        reports = []
        profile = CALIBRATED_PROFILE
        if config.calibrate:
            started = time.perf_counter()
            result = calibrate_jet_coefficients(config.m, fiber, window)
            profile = result.profile
            reports.append(VerificationReport(
                check="jet-calibration",
                family=Family.HN.value,
                N=2 * config.m,
                window=config.radius,
                status="pass",
                details={
                    "fiber": fiber.name,
                    "profile": result.profile.format(),
                    "distance_from_literal": result.distance,
                    "alternatives": [p.format() for p in result.alternatives],
                    "profiles_searched": result.searched,
                },
                timing=time.perf_counter() - started,
            ))
        reports.append(verify_jet_module(jet_module(fiber, profile=profile), window))
        return reports

    def _check_evaluation(self) -> List[VerificationReport]:
        config = self.config
        spec = AlgebraSpec(Family.TOROIDAL, config.N, config.sl_n)
        module = evaluation_module(spec, config.highest_weights, config.evaluation_points())
        window = config.window()
        representation = verify_representation(module, algebra_for(spec).generators(window), window,
                                               check="evaluation-representation")
        representation.details["irreducibility"] = module.irreducibility_certificate(window)
        return [representation, verify_integrability(module, window, config.nilpotency_bound)]

    def _check_realization(self) -> List[VerificationReport]:
        config = self.config
        fiber = sp_rep(config.m, config.fiber)
        module = realization_module(config.realization_weight, fiber, sl_n=config.sl_n)
        window = Window(config.radius, 2 * config.m)
        reports = [verify_representation(module, algebra_for(module.spec).generators(window), window,
                                         check="realization-representation")]

        started = time.perf_counter()
        space = highest_weight_space(module, "levelzero", window)
        witnesses = [{"inputs": [grade], "residual": f"dimension {dim}, fiber {fiber.dimension}"}
                     for grade, dim in sorted(space.graded_dims().items()) if dim != fiber.dimension]
        reports.append(VerificationReport(
            check="realization-highest-weight",
            family=module.spec.family.value,
            N=module.N,
            window=config.radius,
            status="fail" if witnesses else "pass",
            witnesses=witnesses,
            details={"fiber_dimension": fiber.dimension, "grades": len(space.graded_dims())},
            timing=time.perf_counter() - started,
        ))
        return reports

    def _check_induced(self) -> List[VerificationReport]:
        config = self.config
        spec = config.algebra_spec()
        if spec.family is not Family.TAU_H:
            return self._skipped("induced", f"induced modules are built on tauH, not {spec.family.value}")
        started = time.perf_counter()
        window = config.window()
        top = character_top(spec, config.tag, config.top_labels, window=window)
        quotient = simple_quotient_window(induced_module(top, config.depth, window))
        summary = quotient.summary()
        return [VerificationReport(
            check="induced-quotient",
            family=spec.family.value,
            N=spec.N,
            window=config.radius,
            status="partial",
            details={
                "label": QUOTIENT_LABEL,
                "depth": config.depth,
                "top_dimension": quotient.top_dimension(),
                "blocks": len(summary["blocks"]),
                "radical_dimension": sum(b["radical_dim"] for b in summary["blocks"]),
                "null_vectors": quotient.null_vectors()[:10],
            },
            timing=time.perf_counter() - started,
        )]

    def _check_lambda(self) -> List[VerificationReport]:
        config = self.config
        window = config.window()
        reports = [verify_constant_family(config.lam, config.mu, config.c, window)]
        nullspace = lambda_nullspace(window)
        reports.append(nullspace.report())
        reports.append(verify_lemma_consequences(nullspace.systems(), window))
        if config.N % 2 == 0:
            module = jet_module(sp_rep(config.N // 2, "trivial"))
            reports.append(extract_lambda(module, window).constancy_report())
        return reports

    # Output

    def _save_reports(self):
        """Write the JSON bundle and the text report next to it."""
        os.makedirs(self.config.output_dir, exist_ok=True)
        self.bundle.save_json(self.config.json_path)
        with open(self.config.text_path, "w", encoding="utf-8") as f:
            f.write(self.bundle.text_report())
        logger.info(f"Text report saved to {self.config.text_path}")


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="verify", description="Windowed exact verification of toroidal and "
                                                                "extended affine Lie algebras and their modules.")
    parser.add_argument("check", choices=VERBS, help="Check to run, 'all', or 'diff' for two report files.")
    parser.add_argument("paths", nargs="*", help="Report files for 'diff'.")
    parser.add_argument("--config", help="INI run file.")

    algebra = parser.add_argument_group("algebra")
    algebra.add_argument("--family", help="Algebra family, e.g. tauH, tauS, fullToroidal.")
    algebra.add_argument("--N", dest="N", help="Number of Laurent variables.")
    algebra.add_argument("--g", help="Simple part, sl<n>.")
    algebra.add_argument("--radius", help="Window radius.")
    algebra.add_argument("--tag", help="Triangular decomposition.")

    module = parser.add_argument_group("modules")
    module.add_argument("--m", help="sp_2m fiber rank.")
    module.add_argument("--fiber", choices=FIBERS, help="sp_2m fiber.")
    module.add_argument("--calibrate", action="store_const", const="true", help="Calibrate sigma before checking.")
    module.add_argument("--highest-weights", dest="highest_weights", help="Evaluation weights, e.g. '1;1'.")
    module.add_argument("--points", help="Evaluation points, e.g. '1,1;2,2'.")
    module.add_argument("--realization-weight", dest="realization_weight", help="Realization weight, e.g. '1'.")
    module.add_argument("--top-labels", dest="top_labels", help="Character top Dynkin labels.")
    module.add_argument("--depth", help="Induced module truncation depth.")
    module.add_argument("--nilpotency-bound", dest="nilpotency_bound", help="Iterates tried for local nilpotency.")

    appendix = parser.add_argument_group("lambda")
    appendix.add_argument("--lam", help="lambda")
    appendix.add_argument("--mu", help="mu")
    appendix.add_argument("--c", help="c")

    run = parser.add_argument_group("run")
    run.add_argument("--strict", action="store_const", const="true", help="Partial or inconclusive also fail.")
    run.add_argument("--workers", help="Worker processes for window sweeps.")
    run.add_argument("--sample-limit", dest="sample_limit", help="Largest exhaustive sweep.")
    run.add_argument("--seed", help="Sample seed.")
    run.add_argument("--unsafe-large", dest="unsafe_large", action="store_const", const="true",
                     help=f"Lift the R <= {MAX_RADIUS}, N <= {MAX_N} cap.")
    run.add_argument("--shear", help="Shear parameter a for the automorphism suite.")
    run.add_argument("--random-automorphisms", dest="random_automorphisms", help="Random unimodular matrices.")
    run.add_argument("--output-dir", dest="output_dir", help="Report directory.")
    run.add_argument("--json-file", dest="json_file", help="JSON report file name.")
    run.add_argument("--log-file", dest="log_file", help="Log file.")
    run.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING or ERROR.")
    return parser


def cli_overrides(args: argparse.Namespace) -> Dict[str, Dict[str, str]]:
    """Flags that were given, by config section; the verb becomes ``run.checks``."""
    overrides: Dict[str, Dict[str, str]] = {}
    for dest, (section, key) in CLI_FIELDS.items():
        value = getattr(args, dest, None)
        if value is not None:
            overrides.setdefault(section, {})[key] = str(value)
    overrides.setdefault("run", {})["checks"] = args.check
    return overrides


def configure_logging(config: RunConfig):
    handlers = [logging.StreamHandler()]
    if config.log_file:
        handlers.insert(0, logging.FileHandler(config.log_file))
    logging.basicConfig(
        level=getattr(logging, config.log_level, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def run_diff(paths: Sequence[str]) -> int:
    if len(paths) != 2:
        print("diff needs exactly two report files", file=sys.stderr)
        return EXIT_CONFIG
    try:
        diff = report_diff(paths[0], paths[1])
    except ReportFormatError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_CONFIG
    if diff:
        print(diff)
        return EXIT_FAILURE
    print("Reports are identical.")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.check == "diff":
        return run_diff(args.paths)

    try:
        pipeline = VerificationPipeline(args.config, cli_overrides(args))
    except ConfigError as e:
        print(f"❌ Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    configure_logging(pipeline.config)
    success = pipeline.run_pipeline()

    if success:
        print(f"\n✅ Verification passed ({pipeline.bundle.status})")
    else:
        print(f"\n❌ Verification failed ({pipeline.bundle.status}). Check the report for witnesses.")
    print(f"Reports saved in: {pipeline.config.json_path} and {pipeline.config.text_path}")
    return EXIT_OK if success else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
