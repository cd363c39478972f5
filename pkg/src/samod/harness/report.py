"""Suite reports: canonical JSON, a text summary and exit codes."""

from __future__ import annotations

from ..io import dumps
from .instances import InstanceSpec
from .suites import SuiteResult
from .theorems import REGISTRY

SCHEMA_VERSION = 1

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def report_json(result: SuiteResult) -> dict:
    """Everything but wall time, so equal runs serialise to equal bytes."""
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": list(result.suite),
        "seed": result.seed,
        "budget": result.budget,
        "instances": result.instances,
        "ok": result.ok,
        "theorems": [
            {"id": tid, "claim": REGISTRY[tid].claim, "pass": t.passed, "vacuous": t.vacuous,
             "violation": t.violations, "non_vacuous": t.non_vacuous,
             **({"vacuous_by_design": REGISTRY[tid].reason} if REGISTRY[tid].reason else {})}
            for tid, t in ((tid, result.tallies[tid]) for tid in result.suite)
        ],
        "violations": [{"theorem": tid, **v} for tid, v in result.violations],
    }


def render_json(result: SuiteResult) -> str:
    return dumps(report_json(result))


def render_text(result: SuiteResult) -> str:
    lines = [f"instances: {result.instances}  seed: {result.seed}  budget: {result.budget}"]
    w = max((len(t) for t in result.suite), default=4)
    for tid in result.suite:
        t = result.tallies[tid]
        mark = "VIOLATION" if t.violations else ("vacuous" if not t.non_vacuous else "ok")
        lines.append(f"{tid:<{w}}  pass={t.passed:<4} vacuous={t.vacuous:<4} "
                     f"violation={t.violations:<4} {mark}")
    for tid, v in result.violations:
        spec = v["instance"]
        lines.append(f"counterexample {tid} on instance {spec['index']} ({spec['module']}): "
                     f"{v['counterexample']}")
    lines.append("PASS" if result.ok else "FAIL")
    return "\n".join(lines) + "\n"


def exit_code(result: SuiteResult) -> int:
    return EXIT_PASS if result.ok else EXIT_VIOLATION


def violation_instances(report: dict) -> list[InstanceSpec]:
    """Parse the instance specs embedded in a JSON report."""
    return [InstanceSpec.from_json(v["instance"]) for v in report.get("violations", [])]
