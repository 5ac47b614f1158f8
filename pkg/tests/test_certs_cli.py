"""Certificate serialization, re-verification, tamper detection, and the CLI."""

from __future__ import annotations

import json
import random

import pytest

import shacert.certs as certs
import shacert.cli as cli
from shacert import SearchParams, search_tuple
from shacert.certs import (
    build_build_payload,
    build_paper_example_payload,
    build_search_payload,
    canonical_dumps,
    dump_document,
    make_document,
    verify_document,
)


@pytest.fixture(scope="module")
def tup5():
    return search_tuple(SearchParams(5, 1, -1, t=2, limit=1_000_000))


@pytest.fixture(scope="module")
def build5(tup5):
    return build_build_payload(tup5, (1,), (1,))


@pytest.fixture(scope="module")
def paper_payload():
    return build_paper_example_payload()


def test_payload_round_trip_bytes(build5):
    text = canonical_dumps(build5)
    assert canonical_dumps(json.loads(text)) == text


def test_documents_are_deterministic_modulo_timestamp(tup5):
    a = make_document(build_search_payload(tup5))
    b = make_document(build_search_payload(tup5))
    assert canonical_dumps(a["payload"]) == canonical_dumps(b["payload"])


def test_paper_example_payload_passes_everything(paper_payload):
    assert paper_payload["golden_match"]
    assert paper_payload["membership"]["passed"]
    assert paper_payload["obstruction"]["verdict"] == "infeasible"
    assert paper_payload["conclusion"]["order_p_certified"]
    assert paper_payload["sha_bound"]["established"]
    assert paper_payload["sha_bound"]["bound"] == "1"
    assert len(paper_payload["equations"]["lines"]) == 29


def test_verify_accepts_generated_certificates(tup5, build5, paper_payload):
    for payload in (build_search_payload(tup5), build5, paper_payload):
        assert verify_document(make_document(payload)) == []


def test_verify_rejects_schema_mismatch(build5):
    doc = make_document(build5)
    doc["schema"] = "something-else"
    assert any("schema" in f for f in verify_document(doc))


def test_verify_rejects_flipped_symbol(tup5):
    doc = make_document(build_search_payload(tup5))
    entry = doc["payload"]["tuple"]["evidence"][2]
    entry["got"] = "-1" if entry["got"] == "1" else "1"
    failures = verify_document(doc)
    assert failures and any("evidence" in f for f in failures)


def test_verify_rejects_forged_obstruction_solution(build5):
    doc = make_document(json.loads(canonical_dumps(build5)))
    section = doc["payload"]["obstruction"]
    assert section["verdict"] == "feasible"  # p = 5 coupling degenerates
    solution = [int(x) for x in section["solution"]]
    solution[0] = (solution[0] + 1) % 5
    section["solution"] = [str(x) for x in solution]
    failures = verify_document(doc)
    assert any("solution" in f for f in failures)


def test_verify_rejects_forged_witness(paper_payload):
    doc = make_document(json.loads(canonical_dumps(paper_payload)))
    reports = doc["payload"]["membership"]["reports"]
    idx, report = next(
        (i, r) for i, r in enumerate(reports) if r["case"] == "torsion-combination"
    )
    a, b = (int(x) for x in report["witness"])
    report["witness"] = [str((a + 1) % 29), str(b)]
    failures = verify_document(doc)
    assert any(f"reports[{idx}]" in f and "witness" in f for f in failures)


def test_verify_rejects_mutated_equation_line(paper_payload):
    doc = make_document(json.loads(canonical_dumps(paper_payload)))
    doc["payload"]["equations"]["lines"][0] += " "
    failures = verify_document(doc)
    assert any("equations" in f for f in failures)


def mutate_leaf(node, path, rng):
    """Mutate the leaf at ``path`` in place; returns a description."""
    *parents, last = path
    for key in parents:
        node = node[key]
    value = node[last]
    if isinstance(value, bool):
        node[last] = not value
    elif isinstance(value, str):
        try:
            node[last] = str(int(value) + rng.choice([-1, 1]))
        except ValueError:
            node[last] = value + "x"
    else:
        raise AssertionError(f"unexpected leaf type at {path}: {value!r}")
    return f"{path}: {value!r} -> {node[last]!r}"


def leaf_paths(node, prefix=()):
    if isinstance(node, dict):
        for key, value in node.items():
            yield from leaf_paths(value, prefix + (key,))
    elif isinstance(node, list):
        for i, value in enumerate(node):
            yield from leaf_paths(value, prefix + (i,))
    elif node is not None:
        yield prefix


EVIDENCE_SECTIONS = (
    "ramified_set",
    "tuple",
    "curve",
    "twist",
    "equations",
    "membership",
    "obstruction",
    "conclusion",
    "sha_bound",
    "assumed_lemmas",
    "golden_match",
)


def test_random_single_field_mutations_are_rejected(build5):
    rng = random.Random(20240817)
    baseline = json.loads(canonical_dumps(build5))
    paths = [
        p for p in leaf_paths(baseline)
        if p[0] in EVIDENCE_SECTIONS
    ]
    assert len(paths) > 200
    for _ in range(25):  # the acceptance suite runs the full 100
        doc = make_document(json.loads(canonical_dumps(build5)))
        path = rng.choice(paths)
        description = mutate_leaf(doc["payload"], path, rng)
        assert verify_document(doc), f"mutation not caught: {description}"


def run_cli(*argv):
    return cli.main(list(argv))


def test_cli_exit_codes(tmp_path, capsys):
    out = tmp_path / "search.json"
    assert run_cli("search", "--p", "5", "--u", "1", "--v", "-1", "--t", "1",
                   "--limit", "100000", "--out", str(out), "--quiet") == 0
    assert run_cli("verify", str(out), "--quiet") == 0

    # parameter error: 3 | u
    assert run_cli("search", "--p", "5", "--u", "3", "--v", "1", "--t", "1") == 1
    # parameter error: malformed subset list
    assert run_cli("build", "--p", "5", "--u", "1", "--v", "-1", "--t", "1",
                   "--limit", "100000", "--subset", "1;2") == 1
    # parameter error: exponent out of range
    assert run_cli("build", "--p", "5", "--u", "1", "--v", "-1", "--t", "1",
                   "--limit", "100000", "--subset", "1", "--exponents", "5") == 1
    # usage errors also exit 1 (argparse's default of 2 would collide)
    assert run_cli("search", "--p", "5") == 1
    # search exhaustion: 2
    assert run_cli("search", "--p", "5", "--u", "1", "--v", "-1", "--t", "3",
                   "--limit", "300") == 2
    # tampering: 3
    doc = json.loads(out.read_text())
    doc["payload"]["tuple"]["primes"][0] = str(int(doc["payload"]["tuple"]["primes"][0]) + 1)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert run_cli("verify", str(bad), "--quiet") == 3
    # unreadable path: 4
    assert run_cli("verify", str(tmp_path / "absent.json")) == 4
    # garbage JSON: certificate failure
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert run_cli("verify", str(garbage)) == 3
    capsys.readouterr()


def test_cli_build_writes_a_verifiable_certificate(tmp_path):
    out = tmp_path / "build.json"
    assert run_cli("build", "--p", "7", "--u", "1", "--v", "-1", "--t", "2",
                   "--limit", "1000000", "--subset", "1,2", "--exponents", "2,2",
                   "--out", str(out), "--quiet") == 0
    assert run_cli("verify", str(out), "--quiet") == 0
    doc = json.loads(out.read_text())
    # full-set equal exponents: all-or-none says feasible, not certified
    assert doc["payload"]["obstruction"]["verdict"] == "feasible"
    assert not doc["payload"]["conclusion"]["order_p_certified"]
    assert doc["payload"]["sha_bound"]["established"]  # the bound itself holds


def test_cli_build_empty_subset_is_the_trivial_class(tmp_path):
    out = tmp_path / "trivial.json"
    assert run_cli("build", "--p", "5", "--u", "1", "--v", "-1", "--t", "1",
                   "--limit", "100000", "--out", str(out), "--quiet") == 0
    doc = json.loads(out.read_text())
    assert doc["payload"]["twist"]["value"] == "1"
    assert "trivial class" in doc["payload"]["conclusion"]["reason"]


def test_cli_paper_example_passes_and_is_stable(tmp_path, capsys):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert run_cli("paper-example", "--quiet", "--out", str(out1)) == 0
    assert run_cli("paper-example", "--quiet", "--out", str(out2)) == 0
    a = json.loads(out1.read_text())
    b = json.loads(out2.read_text())
    assert canonical_dumps(a["payload"]) == canonical_dumps(b["payload"])
    assert run_cli("verify", str(out1), "--quiet") == 0
    capsys.readouterr()


def test_cli_paper_example_detects_golden_perturbation(monkeypatch, capsys):
    good = certs.load_golden_equations()
    perturbed = good.replace("386029093", "386029094", 1)
    monkeypatch.setattr(certs, "load_golden_equations", lambda: perturbed)
    monkeypatch.setattr(cli, "load_golden_equations", lambda: perturbed)
    assert run_cli("paper-example", "--quiet") == 3
    err = capsys.readouterr().err
    assert "differ from golden" in err and "-386029094" in err.replace("+386029094", "-386029094")


def test_stdout_emission(capsys):
    assert run_cli("search", "--p", "5", "--u", "1", "--v", "-1", "--t", "1",
                   "--limit", "100000", "--quiet") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == certs.SCHEMA
    assert verify_document(doc) == []


def test_dump_document_ends_with_newline(build5):
    assert dump_document(make_document(build5)).endswith("\n")
