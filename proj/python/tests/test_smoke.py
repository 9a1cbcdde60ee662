import json
import os
from pathlib import Path

import pytest

import parsivc

CORPUS = Path(os.environ.get("PARSIVC_CORPUS_DIR", Path(__file__).resolve().parents[2] / "corpus"))


def test_do_nothing_has_one_unknown_vc():
    r = parsivc.vcs(CORPUS / "Do_Nothing_Capability.mrsl")
    assert r["mode"] == "parsimonious"
    assert [v["status"] for v in r["vcs"]] == ["unknown", "proved"]
    first = r["vcs"][0]
    assert first["antecedents"] == ["1 <= |<e'> o S'|"]
    assert first["succedents"] == ["S' = <e'> o S'"]
    assert parsivc.exit_status(r) == 2


def test_running_example_trace_order():
    r = parsivc.trace(CORPUS / "Running_Example.mthy")
    assert [s["rule"] for s in r["trace"]] == [
        "Confirm", "AndRight", "OrRight", "ParsimoniousAssume",
        "ApplyEqLeft", "ApplyEqLeft", "ApplyEqLeft", "ApplyEqLeft",
    ]
    assert all("before" in s and "after" in s for s in r["trace"])
    assert parsivc.exit_status(r) == 0


def test_modes_differ_only_in_antecedents():
    p = parsivc.vcs(CORPUS / "Closure_Example.mthy")
    c = parsivc.vcs(CORPUS / "Closure_Example.mthy", mode="conservative")
    assert p["vcs"][0]["antecedents"] == ["p(b)"]
    assert c["vcs"][0]["antecedents"] == ["p(b)", "s = x"]
    assert p["vcs"][0]["succedents"] == c["vcs"][0]["succedents"]


def test_metrics_counts_match_across_modes():
    m = parsivc.metrics([CORPUS / "Flip_Capability.mrsl", CORPUS / "Append_Capability.mrsl"])
    p = {row["component"]: row["vcs"] for row in m["parsimonious"]}
    c = {row["component"]: row["vcs"] for row in m["conservative"]}
    assert p == c == {"Flip": 7, "Append": 7, "total": 14}
    assert m["table"].startswith("component")


def test_source_text_and_contradiction():
    text = (CORPUS / "Contradiction.mrsl").read_text()
    r = parsivc.check_source(text, file="inline.mrsl")
    assert r["vcs"][0]["status"] == "vacuous"
    assert parsivc.exit_status(r) == 3
    assert json.loads(json.dumps(r)) == r


def test_errors_are_raised():
    with pytest.raises(parsivc.ParsivcError):
        parsivc.check_source("Theory T; Assertive_Code A(); Confirm y; end A; end T;")
    with pytest.raises(ValueError):
        parsivc.vcs(CORPUS / "Flip_Capability.mrsl", mode="eager")
