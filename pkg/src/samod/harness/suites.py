"""Running the theorem registry over generated instances, and the closure-oracle fuzz."""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..exchange import TupleSpace, bfs_partition, congruence_partition, exchange_partition
from ..lattice import enumerate_submodules
from .context import Context, space_size
from .instances import SPACE_CAP, InstanceSpec, generate_instances
from .theorems import REGISTRY, Theorem, run_theorem

MAX_COUNTEREXAMPLES = 3  # kept per theorem; counts stay exact
CONGRUENCE_CAP = 200


@dataclass
class Tally:
    tid: str
    passed: int = 0
    vacuous: int = 0
    violations: int = 0

    @property
    def non_vacuous(self) -> int:
        return self.passed + self.violations

    def add(self, status: str) -> None:
        if status == "pass":
            self.passed += 1
        elif status == "vacuous":
            self.vacuous += 1
        else:
            self.violations += 1


@dataclass
class SuiteResult:
    suite: list[str]
    seed: int | None
    budget: int
    instances: int
    tallies: dict[str, Tally]
    violations: list[tuple[str, dict]] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not any(t.violations for t in self.tallies.values())


def _run_instance(job: tuple[dict, list[str]]) -> list[tuple[str, str, int, dict | None]]:
    spec_json, tids = job
    ctx = Context(InstanceSpec.from_json(spec_json))
    out = []
    for tid in tids:
        o = run_theorem(REGISTRY[tid], ctx)
        out.append((tid, o.status, o.checked, o.counterexample))
    return out


def run_suite(theorems: list[Theorem], instances, jobs: int = 1, seed: int | None = None,
              budget: int | None = None) -> SuiteResult:
    """Run each theorem on each instance; results are merged in instance order."""
    start = time.perf_counter()
    specs = list(instances)
    tids = [th.tid for th in theorems]
    tallies = {tid: Tally(tid) for tid in tids}
    kept = {tid: 0 for tid in tids}
    violations = []
    jobs_in = [(s.to_json(), tids) for s in specs]
    if jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_instance, jobs_in, chunksize=max(1, len(specs) // (4 * jobs))))
    else:
        results = [_run_instance(j) for j in jobs_in]
    for spec, res in zip(specs, results):
        for tid, status, _, cex in res:
            tallies[tid].add(status)
            if status == "violation" and kept[tid] < MAX_COUNTEREXAMPLES:
                kept[tid] += 1
                violations.append((tid, {"instance": spec.to_json(), "counterexample": cex}))
    return SuiteResult(tids, seed, len(specs) if budget is None else budget, len(specs), tallies,
                       violations, time.perf_counter() - start)


def run_generated(theorems: list[Theorem], seed: int, budget: int, jobs: int = 1) -> SuiteResult:
    return run_suite(theorems, generate_instances(seed, budget), jobs, seed, budget)


# --- closure oracles ------------------------------------------------------------------------------

@dataclass
class ClosureFuzzResult:
    spaces: int = 0
    bfs_checked: int = 0
    congruence_checked: int = 0
    mismatches: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"spaces": self.spaces, "bfs_checked": self.bfs_checked,
                "congruence_checked": self.congruence_checked, "mismatches": self.mismatches,
                "ok": self.ok}


def _spaces_for(spec: InstanceSpec, rng: random.Random, extra: int):
    ctx = Context(spec)
    yield ctx.factors
    subs = enumerate_submodules(ctx.V)
    for _ in range(extra):
        fs = [rng.choice(subs) for _ in range(rng.randint(1, 3))]
        if space_size(fs) <= SPACE_CAP:
            yield fs


def closure_fuzz(seed: int, budget: int, per_instance: int = 1,
                 congruence_cap: int = CONGRUENCE_CAP) -> ClosureFuzzResult:
    """Compare union-find classes with BFS reachability on every generated space, and with the
    smallest additive congruence on spaces of at most ``congruence_cap`` tuples."""
    start = time.perf_counter()
    out = ClosureFuzzResult()
    rng = random.Random(f"{seed}:closure")
    for spec in generate_instances(seed, budget):
        for factors in _spaces_for(spec, rng, per_instance):
            space = TupleSpace(list(factors))
            uf = exchange_partition(space).root
            out.spaces += 1
            where = {"module": spec.module, "factors": [f.elements for f in factors]}
            out.bfs_checked += 1
            if bfs_partition(space).root != uf:
                out.mismatches.append(dict(where, oracle="bfs"))
            if space.size <= congruence_cap:
                out.congruence_checked += 1
                if congruence_partition(space).root != uf:
                    out.mismatches.append(dict(where, oracle="congruence"))
    out.wall_time = time.perf_counter() - start
    return out
