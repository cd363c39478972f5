"""The eight acceptance criteria, one test each."""

import json
import subprocess
import sys
import time

import pytest

import oracles
from conftest import module
from samod.exchange import TupleSpace, exchange_partition, has_amalgamation
from samod.extensions import is_complementary, is_sa_extension, is_saturated
from samod.harness.suites import closure_fuzz
from samod.harness.theorems import resolve_suite
from samod.lattice import enumerate_sa, enumerate_submodules, generate, parse_set, subtractive_hull, whole, zero_set
from samod.retraction import build_from_retraction, v5_spec

# Literal statements covered by the fuzz criterion; corrected variants (suffix *) are reported
# separately and do not count here.
FUZZ_SUITE = ("T3.1,T3.2,C3.3,T4.3,T4.5,T4.6,C4.7,P5.1,P5.2,T5.3,T5.4,C5.5,P6.2,P6.3,T6.5,P7.3,"
              "T7.5,T7.7,T7.9,P8.1,P9.4,P9.6,T9.5,T9.7,P10.3,P10.6,P10.7,T10.8,L10.9,P10.10,P11.3,"
              "T11.7,L11.9,T11.9,P12.2,P12.3,P12.4,P12.8,C12.10,P13.1,P13.2,P13.3,L13.6,P13.7,T13.8")
SUITE_CMD = [sys.executable, "-m", "samod.cli", "suite", "--seed", "42", "--budget", "500"]


def sub(V, text):
    return generate(V, parse_set(V, text))


@pytest.fixture(scope="module")
def suite_runs():
    """Two CLI runs of the full suite: raw stdout bytes, exit codes and wall times."""
    runs = []
    for _ in range(2):
        start = time.perf_counter()
        r = subprocess.run(SUITE_CMD, capture_output=True)
        runs.append((r.stdout, r.returncode, time.perf_counter() - start, r.stderr))
    return runs


def test_criterion_1_fixture_counts():
    for fid, subs, sa in (("B2", 7, 4), ("C3", 4, 3), ("NSAT4", 4, None)):
        V = module(fid)
        found = enumerate_submodules(V)
        assert len(found) == subs == len(oracles.all_submodules(V))
        if sa is not None:
            assert len(enumerate_sa(whole(V), zero_set(V))) == sa
            assert sum(oracles.is_sa(V, S, range(V.size)) for S in oracles.all_submodules(V)) == sa


def test_criterion_2_hull_pins():
    for fid, D, hull in (("C3", "{0,2}", "{0,1,2}"), ("C4", "{0,1}", "{0,1}"), ("NSAT4", "{0,3}", "{0,1,2,3}")):
        V = module(fid)
        Dm = sub(V, D)
        got = subtractive_hull(Dm)
        assert got.mask == parse_set(V, hull)
        assert set(got.elements) == oracles.subtractive_hull(V, set(Dm.elements))


def test_criterion_3_am_dichotomy():
    B2, C3 = module("B2"), module("C3")
    assert has_amalgamation(TupleSpace([sub(B2, "{00,01}"), sub(B2, "{00,10}")])).ok
    res = has_amalgamation(TupleSpace([sub(C3, "{0,1}"), sub(C3, "{0,2}")]))
    assert not res.ok and res.certificate == ((0, 2), (1, 2))


def test_criterion_4_extension_pin():
    V = module("C4")
    A, D, T = sub(V, "{0,1,3}"), sub(V, "{0,1}"), sub(V, "{0,1}")
    assert is_sa_extension(A, D) and is_complementary(A, D, T) and is_saturated(A, D, T)
    sp = TupleSpace([A, T])
    p = exchange_partition(sp)
    assert has_amalgamation(sp, p).ok
    assert p.class_sets() == {frozenset({(0, 0)}), frozenset({(1, 0), (0, 1), (1, 1)}),
                              frozenset({(3, 0), (3, 1)})}


def test_criterion_5_closure_oracles():
    start = time.perf_counter()
    res = closure_fuzz(42, 200)
    elapsed = time.perf_counter() - start
    assert res.spaces >= 200
    assert res.bfs_checked == res.spaces
    assert res.congruence_checked >= 200
    assert res.mismatches == []
    assert elapsed < 60


def test_criterion_6_theorem_fuzz(suite_runs):
    out, _, elapsed, err = suite_runs[0]
    assert out, err.decode()
    report = json.loads(out)
    assert report["instances"] >= 500
    rows = {t["id"]: t for t in report["theorems"]}
    wanted = [th.tid for th in resolve_suite(FUZZ_SUITE) if not th.tid.endswith("*")]
    violated = {tid: rows[tid]["violation"] for tid in wanted if rows[tid]["violation"]}
    thin = {tid: rows[tid]["non_vacuous"] for tid in wanted if rows[tid]["non_vacuous"] < 20}
    assert elapsed < 600
    assert not violated and not thin, f"violations: {violated}; under 20 non-vacuous: {thin}"


def test_criterion_7_retraction_pin():
    b = build_from_retraction(v5_spec())
    M, phi = b.module, b.retraction.phi
    assert M.size == 5
    assert M.add[M.index("a")][M.index("b")] == M.index("1")
    assert b.report.upper_bound and b.report.fibers_convex
    assert all(M.add[v][v] == phi[v] for v in range(M.size))
    assert b.report.ok


def test_criterion_8_determinism(suite_runs):
    (a, *_), (b, *_) = suite_runs
    assert a and a == b
