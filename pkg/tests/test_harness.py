import csv
import json
import os

import pytest

import oracles
from conftest import module
from samod.harness.figures import write_bar_chart, write_csv
from samod.harness.hierarchy import hierarchy_pipeline
from samod.harness.instances import InstanceSpec, generate_instances
from samod.harness.report import SCHEMA_VERSION, exit_code, render_json, render_text, report_json, violation_instances
from samod.harness.suites import closure_fuzz, run_generated, run_suite
from samod.harness.theorems import REGISTRY, resolve_suite
from samod.errors import PreconditionError, SamodError
from samod.io import dumps
from samod.lattice import ElementSet, generate, generate_submonoid, parse_set, whole
from samod.order import cbar_of_set
from samod.retraction import v5_spec

GOLDEN = os.path.join(os.path.dirname(__file__), "data", "instances_seed1_budget3.json")


def pinned(fid, **sets):
    V = module(fid)
    sel = {k: sorted(oracles.elems(parse_set(V, v))) for k, v in sets.items()}
    return InstanceSpec(0, 7, "PINNED", fid, [[V.zero]], sel, v5_spec().to_json(), {"pinned": True})


# --- instance generation -----------------------------------------------------------------

def test_generated_instances_match_golden_file():
    with open(GOLDEN, encoding="utf-8") as fh:
        golden = fh.read()
    assert dumps([s.to_json() for s in generate_instances(1, 3)]) == golden


def test_zero_budget_is_empty():
    assert list(generate_instances(5, 0)) == []


def test_same_seed_same_stream():
    a = [s.to_json() for s in generate_instances(9, 20)]
    b = [s.to_json() for s in generate_instances(9, 20)]
    assert a == b


def test_generated_instances_respect_caps():
    for spec in generate_instances(3, 60):
        V = spec.validate()
        assert V.size <= 10
        assert 1 <= len(spec.factors) <= 3


def test_spec_parser_rejects_bad_selection():
    data = pinned("C3", A="{0,1}").to_json()
    data["selections"]["A"] = [0, 2, 1, 9]
    with pytest.raises(SamodError):
        InstanceSpec.from_json(data)
    data["selections"]["A"] = [1]
    with pytest.raises(SamodError):
        InstanceSpec.from_json(data)


# --- suite runner --------------------------------------------------------------------------

def test_unique_complement_pin_passes():
    res = run_suite(resolve_suite("T6.5"), [pinned("B2", W="{00,01}", D="{00}")])
    assert res.tallies["T6.5"].passed == 1 and res.ok


def test_extension_pin_passes():
    res = run_suite(resolve_suite("T7.7"), [pinned("C4", A="{0,1,3}", D="{0,1}", T="{0,1}")])
    assert res.tallies["T7.7"].passed == 1 and res.ok


def test_failed_hypothesis_is_vacuous():
    spec = pinned("C3", A1="{0,1,2}", A2="{0,1,2}", W1="{0,1}", W2="{0}")
    res = run_suite(resolve_suite("T3.1"), [spec])
    t = res.tallies["T3.1"]
    assert (t.passed, t.vacuous, t.violations) == (0, 1, 0)


def test_violation_gives_exit_one_and_round_trips():
    spec = pinned("FREE(BOOL,3)", A="{000,001,010,011,101,110,111}", D="{000,001,101}",
                  T="{000,001,100,101}")
    res = run_suite(resolve_suite("T7.7"), [spec])
    assert exit_code(res) == 1
    report = json.loads(render_json(res))
    assert report["violations"][0]["theorem"] == "T7.7"
    back = violation_instances(report)
    assert [b.to_json() for b in back] == [spec.to_json()]
    assert "FAIL" in render_text(res)


def test_clean_run_gives_exit_zero():
    res = run_suite(resolve_suite("T6.5"), [pinned("B2", W="{00,01}", D="{00}")])
    assert exit_code(res) == 0


def test_report_schema_and_ordering():
    res = run_generated(resolve_suite("P1.3,C3.3,T3.1"), seed=2, budget=4)
    rep = report_json(res)
    assert rep["schema_version"] == SCHEMA_VERSION
    assert [t["id"] for t in rep["theorems"]] == ["P1.3", "T3.1", "C3.3"]
    assert "wall_time" not in rep
    assert render_json(res) == render_json(run_generated(resolve_suite("P1.3,C3.3,T3.1"), 2, 4))


def test_worker_pool_matches_serial():
    th = resolve_suite("T3,P6")
    a = run_generated(th, seed=4, budget=6, jobs=1)
    b = run_generated(th, seed=4, budget=6, jobs=2)
    assert render_json(a) == render_json(b)


def test_by_design_entries_are_vacuous():
    res = run_generated(resolve_suite("S4.9"), seed=1, budget=2)
    assert res.tallies["S4.9"].vacuous == 2
    assert REGISTRY["S4.9"].reason


# --- registry coverage --------------------------------------------------------------------

# Every proposition, theorem, corollary, lemma and scholium has an entry.
REQUIRED = ["P1.3", "P1.6", "P2.1", "T3.1", "T3.2", "C3.3", "P4.2", "T4.3", "T4.5", "T4.6", "C4.7",
            "S4.9", "P5.1", "P5.2", "T5.3", "T5.4", "C5.5", "P6.2", "P6.3", "P6.4", "T6.5", "P7.3",
            "T7.5", "T7.7", "T7.9", "P8.1", "S8.2", "P9.4", "T9.5", "P9.6", "T9.7", "P10.3", "P10.6",
            "P10.7", "T10.8", "L10.9", "P10.10", "P11.3", "P11.4", "T11.7", "L11.9", "T11.9",
            "P12.2", "P12.3", "P12.4", "P12.8", "C12.10", "P13.1", "P13.2", "P13.3", "L13.6",
            "P13.7", "T13.8"]


@pytest.mark.parametrize("tid", REQUIRED)
def test_registry_covers(tid):
    hits = resolve_suite(tid)
    assert hits
    for th in hits:
        assert th.check is not None or th.reason
        assert th.claim


def test_unknown_suite_id():
    with pytest.raises(SamodError):
        resolve_suite("T99.9")


# --- closure fuzz -------------------------------------------------------------------------

def test_closure_fuzz_small():
    res = closure_fuzz(3, 10)
    assert res.ok and res.spaces >= 10 and res.bfs_checked == res.spaces


# --- hierarchy pipeline ---------------------------------------------------------------------

def test_hierarchy_single_factor_is_trivial():
    V = module("C3")
    rep = hierarchy_pipeline(V, [whole(V)], [ElementSet(V, parse_set(V, "{2}"))])
    assert rep.module.size == 3
    assert rep.cbar_total == rep.module.full_mask
    assert rep.ok


def _amalgam_oracle(V, As, Ss):
    """C̄(S) computed on oracle exchange classes, as a set of classes."""
    classes = list(oracles.exchange_classes(V, As))
    of = {t: c for c in classes for t in c}

    def plus(c1, c2):
        t1, t2 = next(iter(c1)), next(iter(c2))
        return of[tuple(V.add[a][b] for a, b in zip(t1, t2))]

    def leq(c1, c2):
        return any(plus(c1, w) == c2 for w in classes)

    def unit(k, a):
        t = [V.zero] * len(As)
        t[k] = a
        return of[tuple(t)]

    S = {plus(unit(0, s1), unit(1, s2)) for s1 in Ss[0] for s2 in Ss[1]}
    return {z for z in classes if any(leq(plus(z, s), s) for s in S)}, of


def test_hierarchy_two_factors_against_oracle():
    V = module("C3")
    As = [generate(V, parse_set(V, "{1}")), generate(V, parse_set(V, "{2}"))]
    Ss = [ElementSet(V, parse_set(V, "{1}")), ElementSet(V, parse_set(V, "{2}"))]
    rep = hierarchy_pipeline(V, As, Ss)
    M = rep.module
    assert M.size == 4
    expect, of = _amalgam_oracle(V, [{0, 1}, {0, 2}], [{1}, {2}])
    got = {of[tuple(int(x) for x in M.labels[c].split("|"))] for c in oracles.elems(rep.cbar_total)}
    assert got == expect


def test_hierarchy_nested_factors_collapse():
    V = module("C3")
    As = [whole(V), generate(V, parse_set(V, "{1}"))]
    Ss = [ElementSet(V, parse_set(V, "{2}")), ElementSet(V, parse_set(V, "{1}"))]
    rep = hierarchy_pipeline(V, As, Ss)
    assert rep.module.size == 3
    direct = cbar_of_set(V, ElementSet(V, parse_set(V, "{2}")))
    assert len(oracles.elems(rep.cbar_total)) == len(direct)


def test_hierarchy_rejects_bad_subsets():
    V = module("NSAT4")
    with pytest.raises(PreconditionError):
        hierarchy_pipeline(V, [whole(V)], [ElementSet(V, parse_set(V, "{1}"))])
    with pytest.raises(PreconditionError):
        hierarchy_pipeline(V, [generate(V, 0)], [generate_submonoid(V, parse_set(V, "{1}"))])


# --- figures ------------------------------------------------------------------------------

def test_csv_and_chart(tmp_path):
    res = run_generated(resolve_suite("P1.3,S4.9"), seed=1, budget=2)
    c, png = tmp_path / "r.csv", tmp_path / "r.png"
    write_csv(res, str(c))
    write_bar_chart(res, str(png))
    rows = list(csv.reader(open(c, encoding="utf-8")))
    assert rows == [["theorem", "pass", "vacuous", "violation", "non_vacuous"],
                    ["P1.3", "2", "0", "0", "2"], ["S4.9", "0", "2", "0", "0"]]
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
