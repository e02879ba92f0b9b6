#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Verification Reports
====================
The report record produced by every verifier, the deterministic sweep
machinery the verifiers share (exhaustive or seeded-sample tuple selection,
chunked fan-out over a process pool), and the JSON, text and tabular views
of a report bundle.
"""

import difflib
import itertools
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from datetime import datetime
from math import comb
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from algebra_errors import ReportFormatError

logger = logging.getLogger(__name__)

STATUSES = ("pass", "fail", "partial", "inconclusive")
DEFAULT_CHUNK_SIZE = 2000


@dataclass
class VerificationReport:
    """Outcome of one named check. ``timing`` is excluded from the comparable body."""

    check: str
    family: str
    N: int
    window: int
    status: str
    witnesses: List[Dict[str, Any]] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    config: Dict[str, Any] = field(default_factory=dict)
    timing: float = 0.0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        self.witnesses = sorted(self.witnesses, key=lambda w: json.dumps(w, sort_keys=True, default=str))

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        body = {
            "check": self.check,
            "family": self.family,
            "N": self.N,
            "window": self.window,
            "status": self.status,
            "witnesses": self.witnesses,
            "details": self.details,
            "config": self.config,
        }
        if include_timing:
            body["timing"] = round(self.timing, 6)
        return body

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "VerificationReport":
        try:
            return cls(
                check=data["check"],
                family=data["family"],
                N=int(data["N"]),
                window=int(data["window"]),
                status=data["status"],
                witnesses=list(data.get("witnesses", [])),
                details=dict(data.get("details", {})),
                config=dict(data.get("config", {})),
                timing=float(data.get("timing", 0.0)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ReportFormatError(f"malformed report entry: {e}") from e

    def comparable_body(self) -> str:
        return json.dumps(self.to_dict(include_timing=False), sort_keys=True, ensure_ascii=False, indent=4, default=str)


def worst_status(statuses: Sequence[str]) -> str:
    """fail > inconclusive > partial > pass."""
    for status in ("fail", "inconclusive", "partial"):
        if status in statuses:
            return status
    return "pass"


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def choose_tuples(n_items: int, arity: int, limit: int, seed: int = 0) -> Tuple[List[Tuple[int, ...]], bool]:
    """
    Index tuples i_1 <= ... <= i_arity for a sweep.

    Args:
        n_items: number of generators
        arity: tuple length
        limit: largest exhaustive sweep; beyond it a seeded sample of this size is drawn
        seed: sample seed

    Returns:
        (tuples, sampled)
    """
    total = comb(n_items + arity - 1, arity) if n_items else 0
    if total <= limit:
        return list(itertools.combinations_with_replacement(range(n_items), arity)), False
    rng = np.random.default_rng(seed)
    draws = np.sort(rng.integers(0, n_items, size=(limit, arity)), axis=1)
    unique = np.unique(draws, axis=0)
    logger.warning("sweep of %d tuples exceeds limit %d; checking a seeded sample of %d",
                   total, limit, len(unique))
    return [tuple(int(v) for v in row) for row in unique], True


def run_sweep(task: Callable, payload: Tuple, items: Sequence, workers: int = 1,
              chunk_size: int = DEFAULT_CHUNK_SIZE) -> List[Dict[str, Any]]:
    """
    Run ``task(*payload, chunk)`` over chunks of items and collect witnesses.

    With more than one worker the chunks are fanned out over a process pool.
    A chunk that raises is recorded as a witness instead of aborting the sweep.
    """
    chunks = [list(items[i:i + chunk_size]) for i in range(0, len(items), chunk_size)]
    witnesses: List[Dict[str, Any]] = []
    if workers <= 1 or len(chunks) <= 1:
        for chunk in chunks:
            witnesses.extend(task(*payload, chunk))
        return witnesses

    max_workers = min(workers, os.cpu_count() or 1, len(chunks))
    with ProcessPoolExecutor(max_workers=max_workers) as executor:
        tasks = {executor.submit(task, *payload, chunk): index for index, chunk in enumerate(chunks)}
        for future in as_completed(tasks):
            index = tasks[future]
            try:
                witnesses.extend(future.result())
            except Exception as e:
                logger.error("sweep chunk %d failed: %s", index, e)
                witnesses.append({"inputs": [f"chunk {index}"], "residual": f"error: {e}"})
    return witnesses


# ---------------------------------------------------------------------------
# Bundles
# ---------------------------------------------------------------------------

@dataclass
class ReportBundle:
    """Reports of one run plus the config echo."""

    reports: List[VerificationReport]
    config: Dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return worst_status([r.status for r in self.reports])

    def failed(self, strict: bool = False) -> bool:
        bad = {"fail", "partial", "inconclusive"} if strict else {"fail"}
        return any(r.status in bad for r in self.reports)

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        return {
            "config": self.config,
            "status": self.status,
            "reports": [r.to_dict(include_timing) for r in self.reports],
        }

    def comparable_body(self) -> str:
        return json.dumps(self.to_dict(include_timing=False), sort_keys=True, ensure_ascii=False, indent=4, default=str)

    def save_json(self, path: str):
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, ensure_ascii=False, indent=4, sort_keys=True, default=str)
        logger.info("report bundle saved to %s", path)

    @classmethod
    def load_json(cls, path: str) -> "ReportBundle":
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ReportFormatError(f"cannot read report file {path}: {e}") from e
        if not isinstance(data, dict) or not isinstance(data.get("reports"), list):
            raise ReportFormatError(f"{path} is not a report bundle")
        return cls([VerificationReport.from_dict(r) for r in data["reports"]], dict(data.get("config", {})))

    def summary_frame(self) -> pd.DataFrame:
        """One row per report: check, family, N, window, status, witness count, timing."""
        rows = [{
            "check": r.check,
            "family": r.family,
            "N": r.N,
            "window": r.window,
            "status": r.status,
            "witnesses": len(r.witnesses),
            "timing_s": round(r.timing, 3),
        } for r in self.reports]
        return pd.DataFrame(rows, columns=["check", "family", "N", "window", "status", "witnesses", "timing_s"])

    def text_report(self, max_witnesses: int = 5) -> str:
        """Human-readable report: banner, summary table, one section per check."""
        lines = []
        lines.append("=" * 80)
        lines.append("VERIFICATION REPORT")
        lines.append("=" * 80)
        lines.append(f"Date: {datetime.now().strftime('%d/%m/%Y %H:%M:%S')}")
        lines.append(f"Checks run: {len(self.reports)}")
        counts = self.summary_frame()["status"].value_counts() if self.reports else pd.Series(dtype=int)
        for status in STATUSES:
            lines.append(f"{status.capitalize()}: {int(counts.get(status, 0))}")
        lines.append(f"Overall: {self.status.upper()}")
        lines.append("")

        lines.append("-" * 80)
        lines.append("SUMMARY")
        lines.append("-" * 80)
        if self.reports:
            lines.append(self.summary_frame().to_string(index=False))
        lines.append("")

        for report in self.reports:
            lines.append("-" * 80)
            lines.append(f"{report.check.upper()} [{report.family}, N={report.N}, R={report.window}]")
            lines.append("-" * 80)
            lines.append(f"Status: {report.status}")
            for key, value in sorted(report.details.items()):
                lines.append(f"• {key}: {value}")
            if report.witnesses:
                lines.append(f"Witnesses ({len(report.witnesses)}):")
                for witness in report.witnesses[:max_witnesses]:
                    lines.append(f"  - {witness.get('inputs')}: {witness.get('residual')}")
                if len(report.witnesses) > max_witnesses:
                    lines.append(f"  ... and {len(report.witnesses) - max_witnesses} more")
            lines.append("")

        lines.append("=" * 80)
        return "\n".join(lines)


def report_diff(path_a: str, path_b: str) -> str:
    """Unified diff of the comparable bodies of two report files; empty when identical."""
    body_a = ReportBundle.load_json(path_a).comparable_body().splitlines()
    body_b = ReportBundle.load_json(path_b).comparable_body().splitlines()
    return "\n".join(difflib.unified_diff(body_a, body_b, fromfile=path_a, tofile=path_b, lineterm=""))
