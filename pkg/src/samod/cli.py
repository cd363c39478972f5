"""Command-line interface: ``samod <verb> [options]``.

Exit codes: 0 success or pass, 1 a violation was found, 2 usage or structural error.
"""

from __future__ import annotations

import argparse
import sys

from .actions import c_alpha, quotient_action, translation_action
from .algebra import describe, validate_module
from .errors import SamodError
from .exchange import TupleSpace, build_amalgam, exchange_partition, has_amalgamation
from .extensions import extension_report, find_d_complements
from .io import dumps, load_module, load_retraction_spec, module_to_json
from .lattice import (
    ElementSet, as_submodule, enumerate_sa, enumerate_submodules, format_set, is_sa, parse_set,
    sa_closure, subtractive_hull, whole, zero_set,
)
from .order import coset_order, d_isolated, d_max, fix_set, is_d_ordered, is_upper_bound
from .retraction import build_from_retraction, v5_spec

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(SamodError):
    """Missing or malformed command-line input."""


# --- argument helpers -----------------------------------------------------------------------------

def _module(args):
    if not args.module:
        raise UsageError("--module is required")
    return load_module(args.module)


def _set(V, text, name):
    if text is None:
        raise UsageError(f"--{name} is required")
    try:
        return parse_set(V, text)
    except ValueError as e:
        raise UsageError(f"--{name}: {e}") from None


def _sub(V, text, name):
    return as_submodule(V, _set(V, text, name))


def _factors(V, text):
    if not text:
        raise UsageError("--factors is required, e.g. '{0,1};{0,2}'")
    return [_sub(V, part, "factors") for part in text.split(";")]


def _emit(args, data: dict, text: str) -> None:
    sys.stdout.write(dumps(data) if args.json else text.rstrip("\n") + "\n")


def _fmt(V, mask):
    return format_set(V, mask)


def _tuple_labels(space: TupleSpace, t) -> str:
    V = space.module
    return "(" + ",".join(V.labels[x] for x in t) + ")"


# --- verbs ----------------------------------------------------------------------------------------

def cmd_validate(args) -> int:
    V = _module(args)
    rep = validate_module(V)
    data = {"module": describe(V), **rep.to_json()}
    lines = [f"{V.name}: {V.size} elements over {V.ring.name}"]
    lines += [f"violation {n} at {w}" for n, w in rep.violations] or ["all module laws hold"]
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_submodules(args) -> int:
    V = _module(args)
    subs = enumerate_submodules(V)
    _emit(args, {"count": len(subs), "submodules": [_fmt(V, s.mask) for s in subs]},
          "\n".join([f"{len(subs)} submodules"] + [_fmt(V, s.mask) for s in subs]))
    return EXIT_OK


def cmd_sa(args) -> int:
    V = _module(args)
    amb = _sub(V, args.A, "A") if args.A else whole(V)
    if args.D:
        W = ElementSet(V, _set(V, args.D, "D"))
        ok = is_sa(W, amb)
        _emit(args, {"set": _fmt(V, W.mask), "ambient": _fmt(V, amb.mask), "sa": ok},
              f"{_fmt(V, W.mask)} is {'' if ok else 'not '}SA in {_fmt(V, amb.mask)}")
        return EXIT_OK
    sas = enumerate_sa(amb, zero_set(V))
    _emit(args, {"ambient": _fmt(V, amb.mask), "count": len(sas), "sa": [_fmt(V, s.mask) for s in sas]},
          "\n".join([f"{len(sas)} SA submodules of {_fmt(V, amb.mask)}"] + [_fmt(V, s.mask) for s in sas]))
    return EXIT_OK


def cmd_hull(args) -> int:
    V = _module(args)
    D = _sub(V, args.D, "D")
    H, C = subtractive_hull(D), sa_closure(D)
    _emit(args, {"D": _fmt(V, D.mask), "subtractive_hull": _fmt(V, H.mask), "sa_closure": _fmt(V, C.mask)},
          f"subtractive hull: {_fmt(V, H.mask)}\nSA closure: {_fmt(V, C.mask)}")
    return EXIT_OK


def _space(args):
    V = _module(args)
    return TupleSpace(_factors(V, args.factors))


def cmd_closure(args) -> int:
    space = _space(args)
    p = exchange_partition(space)
    data = {"tuples": space.size, "classes": p.class_count}
    lines = [f"{space.size} tuples, {p.class_count} exchange classes"]
    if args.dump_classes:
        cls = [[_tuple_labels(space, t) for t in c] for c in p.classes()]
        data["partition"] = cls
        lines += ["{" + ", ".join(c) + "}" for c in cls]
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_am(args) -> int:
    space = _space(args)
    res = has_amalgamation(space)
    cert = None if res.certificate is None else [_tuple_labels(space, t) for t in res.certificate]
    data = {"am": res.ok, "classes": res.class_count, "certificate": cert}
    text = f"AM holds ({res.class_count} classes)" if res.ok else \
        f"AM fails: {cert[0]} and {cert[1]} have equal sums but are not exchange equivalent"
    if args.dump_classes:
        am = build_amalgam(space)
        data["amalgam"] = module_to_json(am.module)
        text += f"\namalgam has {am.module.size} elements"
    _emit(args, data, text)
    return EXIT_OK


def cmd_complement(args) -> int:
    V = _module(args)
    W = _sub(V, args.W, "W")
    D = _sub(V, args.D, "D")
    found = find_d_complements(W, D)
    _emit(args, {"W": _fmt(V, W.mask), "D": _fmt(V, D.mask), "complements": [_fmt(V, c.mask) for c in found]},
          "\n".join([f"{len(found)} D-complements"] + [_fmt(V, c.mask) for c in found]))
    return EXIT_OK


def cmd_ext(args) -> int:
    V = _module(args)
    A, D = _sub(V, args.A, "A"), _sub(V, args.D, "D")
    T = _sub(V, args.T, "T") if args.T else None
    rep = extension_report(A, D, T)
    data = rep.to_json()
    lines = [f"SA extension: {rep.is_sa_extension}"]
    if T is not None:
        lines += [f"complementary: {rep.is_complementary}",
                  f"saturation: {_fmt(V, rep.saturation.mask)}", f"saturated: {rep.is_saturated}"]
        res = has_amalgamation(TupleSpace([A, T]))
        data["am"] = {"ok": res.ok, "classes": res.class_count}
        lines.append(f"(A, T) has AM: {res.ok} ({res.class_count} classes)")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_order(args) -> int:
    V = _module(args)
    D = ElementSet(V, _set(V, args.D, "D"))
    ordered = is_d_ordered(V, D)
    data = {"D": _fmt(V, D.mask), "d_ordered": ordered, "upper_bound": is_upper_bound(V),
            "d_isolated": _fmt(V, d_isolated(V, D).mask)}
    if ordered:
        m = d_max(V, D)
        data["d_max"] = None if m is None else V.labels[m]
        q = coset_order(V, D)
        data["coset_order"] = {V.labels[x]: [V.labels[y] for y in range(V.size) if q.leq(x, y)]
                               for x in range(V.size)}
    if args.A:
        try:
            data["fix"] = _fmt(V, fix_set(ElementSet(V, _set(V, args.A, "A")), D).mask)
        except SamodError as e:
            data["fix"] = f"undefined: {e}"
    text = "\n".join(f"{k}: {v}" for k, v in data.items() if k != "coset_order")
    _emit(args, data, text)
    return EXIT_OK


def cmd_retraction(args) -> int:
    spec = load_retraction_spec(args.spec) if args.spec else v5_spec()
    b = build_from_retraction(spec)
    data = {"size": b.module.size, "add": [list(r) for r in b.module.add], **b.report.to_json()}
    lines = [f"{b.module.size} elements"] + [f"{k}: {v}" for k, v in b.report.to_json().items()]
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if b.report.ok else EXIT_VIOLATION


def cmd_action(args) -> int:
    V = _module(args)
    a = translation_action(V) if args.kind == "translation" else quotient_action(V)
    X = a.target
    rows = {}
    for s in range(V.size):
        rows[V.labels[s]] = _fmt(X, c_alpha(a, s, check=False).mask)
    _emit(args, {"kind": args.kind, "target_size": X.size, "c_alpha": rows},
          "\n".join(f"C_alpha({k}) = {v}" for k, v in rows.items()))
    return EXIT_OK


def cmd_hierarchy(args) -> int:
    from .harness.hierarchy import hierarchy_pipeline

    V = _module(args)
    As = _factors(V, args.factors)
    if not args.S:
        raise UsageError("--S is required, one set per factor separated by ';'")
    Ss = [ElementSet(V, _set(V, part, "S")) for part in args.S.split(";")]
    rep = hierarchy_pipeline(V, As, Ss)
    data = rep.to_json()
    _emit(args, data, "\n".join(f"{k}: {v}" for k, v in data.items()))
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_fuzz(args) -> int:
    from .harness.suites import closure_fuzz

    res = closure_fuzz(args.seed, args.budget)
    data = res.to_json()
    _emit(args, data, f"{res.spaces} spaces, {res.bfs_checked} checked against BFS, "
                      f"{res.congruence_checked} against the congruence oracle, "
                      f"{len(res.mismatches)} mismatches")
    return EXIT_OK if res.ok else EXIT_VIOLATION


def cmd_suite(args) -> int:
    from .harness import figures, report
    from .harness.suites import run_generated
    from .harness.theorems import resolve_suite

    theorems = resolve_suite(args.suite)
    if not theorems:
        raise UsageError(f"no theorem matches {args.suite!r}")
    res = run_generated(theorems, args.seed, args.budget, args.jobs)
    body = report.render_text(res) if args.text else report.render_json(res)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    if args.csv:
        figures.write_csv(res, args.csv)
    if args.figures:
        figures.write_bar_chart(res, args.figures)
    return report.exit_code(res)


# --- parser ---------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="samod", description="Finite semiring modules: submodules, "
                                "SA sets, exchange amalgams and theorem fuzzing.")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_, *flags):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--json", action="store_true", help="print JSON instead of text")
        for f in flags:
            if f == "module":
                sp.add_argument("--module", help="fixture id (e.g. 'CHAIN(3)') or JSON path")
            elif f == "factors":
                sp.add_argument("--factors", help="submodules separated by ';', e.g. '{0,1};{0,2}'")
            elif f == "dump":
                sp.add_argument("--dump-classes", action="store_true", help="list exchange classes")
            else:
                sp.add_argument(f"--{f}", help=f"set literal for {f}, e.g. '{{0,1}}'")
        return sp

    verb("validate", cmd_validate, "check the module laws", "module")
    verb("submodules", cmd_submodules, "list all submodules", "module")
    verb("sa", cmd_sa, "test or list SA submodules", "module", "A", "D")
    verb("hull", cmd_hull, "subtractive hull and SA closure of D", "module", "D")
    verb("closure", cmd_closure, "exchange classes of a tuple space", "module", "factors", "dump")
    verb("am", cmd_am, "amalgamation test for a tuple space", "module", "factors", "dump")
    verb("complement", cmd_complement, "D-complements of W", "module", "W", "D")
    verb("ext", cmd_ext, "SA-extension, complementarity and saturation", "module", "A", "D", "T")
    verb("order", cmd_order, "D-quasiorder, D-isolated set, d_max and Fix_D(A)", "module", "D", "A")
    r = verb("retraction", cmd_retraction, "build a monoid from a bipotent retraction spec")
    r.add_argument("--spec", help="retraction spec JSON (default: the five-element example)")
    a = verb("action", cmd_action, "stabilizer sets C_alpha(s) of a standard action", "module")
    a.add_argument("--kind", choices=["translation", "quotient"], default="translation")
    verb("hierarchy", cmd_hierarchy, "amalgam hierarchy of C-bar sets", "module", "factors", "S")
    for name, func, help_ in (("fuzz", cmd_fuzz, "cross-check exchange closure against oracles"),
                              ("suite", cmd_suite, "run theorem checks over generated instances")):
        sp = verb(name, func, help_)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--budget", type=int, default=100, help="number of generated instances")
    s = sub.choices["suite"]
    s.add_argument("--suite", default="all", help="theorem ids or prefixes, comma separated")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s.add_argument("--out", help="write the report here instead of stdout")
    s.add_argument("--csv", help="write per-theorem counts as CSV")
    s.add_argument("--figures", help="write a bar chart PNG of per-theorem counts")
    s.add_argument("--text", action="store_true", help="human-readable report instead of JSON")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if getattr(args, "budget", 1) is not None and getattr(args, "budget", 1) < 0:
        print("samod: --budget must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (SamodError, ValueError, OSError) as e:
        print(f"samod: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
