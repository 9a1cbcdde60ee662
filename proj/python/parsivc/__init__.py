"""Parsimonious, goal-directed VC generation for RESOLVE-style sources.

Every function returns plain dicts in the layout of ``parsivc vcs --json``.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterable, Sequence

from . import _parsivc
from ._parsivc import ParsivcError

__all__ = ["ParsivcError", "vcs", "trace", "metrics", "check_source", "exit_status"]


def _search_path(extra: Iterable[os.PathLike | str] | None) -> list[str]:
    dirs = [str(p) for p in (extra or [])]
    env = os.environ.get("PARSIVC_THEORY_PATH")
    if env:
        dirs += [p for p in env.split(os.pathsep) if p]
    bundled = Path(__file__).with_name("theories")
    dirs.append(str(bundled) if bundled.is_dir() else _parsivc.default_theory_dir)
    return dirs


def _paths(paths: str | os.PathLike | Sequence[str | os.PathLike]) -> list[str]:
    if isinstance(paths, (str, os.PathLike)):
        return [str(paths)]
    return [str(p) for p in paths]


def vcs(paths, mode: str = "parsimonious", theory_path=None, jobs: int = 1) -> dict:
    """Derives and discharges every VC of the given source files."""
    return json.loads(_parsivc.vcs_json(_paths(paths), mode, _search_path(theory_path), jobs))


def trace(paths, mode: str = "parsimonious", theory_path=None) -> dict:
    """Like :func:`vcs`, with before/after blocks on every trace step."""
    return json.loads(_parsivc.trace_json(_paths(paths), mode, _search_path(theory_path)))


def check_source(text: str, mode: str = "parsimonious", file: str = "<string>", theory_path=None) -> dict:
    """Derives VCs from source text instead of a file."""
    return json.loads(_parsivc.source_json(text, file, mode, _search_path(theory_path)))


def metrics(paths, theory_path=None) -> dict:
    """Per-component VC and antecedent counts for both modes, plus the text table."""
    p = _parsivc.vcs_json(_paths(paths), "parsimonious", _search_path(theory_path), 1)
    c = _parsivc.vcs_json(_paths(paths), "conservative", _search_path(theory_path), 1)
    return {
        "version": _parsivc.report_version,
        "parsimonious": json.loads(p)["metrics"],
        "conservative": json.loads(c)["metrics"],
        "table": _parsivc.metrics_table(p, c),
    }


def exit_status(report: dict) -> int:
    """The CLI's exit code for a report: 0, 2 (unknown) or 3 (vacuous)."""
    statuses = {v["status"] for v in report["vcs"]}
    if "unknown" in statuses:
        return 2
    return 3 if "vacuous" in statuses else 0
