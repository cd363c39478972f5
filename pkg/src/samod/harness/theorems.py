"""The theorem registry: one checker per result, run against a single instance.

A checker draws hypothesis-satisfying configurations from the instance,
asserts the conclusion on each through a Probe, and stores the first
counterexample.  No qualifying configuration means the outcome is vacuous.
Ids ending in ``*`` are corrected readings of results whose literal
statement admits counterexamples; both readings are checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..actions import c_alpha, c_alpha_set, quotient_action, stabilizer_sum_law, translation_action
from ..algebra import Monoid, ModuleMap, identity_map, is_lzs, validate_homomorphism
from ..errors import SamodError
from ..exchange import (TupleSpace, bfs_partition, build_amalgam, congruence_partition,
                        restriction_compare, transport_report)
from ..extensions import (compl_posets, find_d_complements, hull_is_universal_complement, is_complementary,
                          is_d_complement, is_saturated, nac_extension, rest_closed_and_absorbing, saturation,
                          sum_of_units)
from ..lattice import (ElementSet, SubmoduleSet, bits, coset, cyclic, format_set, generate,
                       generate_submonoid, is_sa, is_submodule, is_submonoid, is_subtractive,
                       mask_of, nac, popcount, sa_closure, set_sum, subtractive_hull, sum_,
                       zero_set)
from ..order import (arch_class, c_omega, cbar_of, cofinal, coset_order, d_isolated, d_max,
                     fix_set, is_convex, is_d_ordered, is_o_closed, is_subsemiring, is_upper_bound,
                     leq_v, maximal_elements, multiples_mask, naturals_image, sa_through_quotient, quotient,
                     scalar_stabilizer)
from ..retraction import (is_bipotent, is_monotone, is_special_retraction, lift_submonoid,
                          monoid_from_chain, order_from_bipotent, reach_downset, x_downset,
                          x_isolated)
from .context import CONFIGS, Context, space_size
from .hierarchy import hierarchy_pipeline
from .instances import SPACE_CAP

BFS_CAP = 150
ORACLE_CAP = 64
HIERARCHY_CAP = 100


class Probe:
    """Counts non-vacuous checks and keeps the first failing configuration."""

    def __init__(self):
        self.checked = 0
        self.counterexample: dict | None = None

    def check(self, ok: bool, **cex) -> bool:
        self.checked += 1
        if not ok and self.counterexample is None:
            self.counterexample = cex
        return ok


@dataclass(frozen=True)
class Outcome:
    status: str  # pass | vacuous | violation
    checked: int
    counterexample: dict | None = None


@dataclass(frozen=True)
class Theorem:
    tid: str
    claim: str
    check: Callable | None
    reason: str = ""  # why the entry is vacuous by design


REGISTRY: dict[str, Theorem] = {}


def theorem(tid: str, claim: str):
    def deco(fn):
        REGISTRY[tid] = Theorem(tid, claim, fn)
        return fn
    return deco


def by_design(tid: str, claim: str, reason: str) -> None:
    REGISTRY[tid] = Theorem(tid, claim, None, reason)


def run_theorem(th: Theorem, ctx: Context) -> Outcome:
    if th.check is None:
        return Outcome("vacuous", 0)
    pr = Probe()
    try:
        th.check(ctx, ctx.rng(th.tid), pr)
    except SamodError as e:
        pr.check(False, error=f"{type(e).__name__}: {e}")
    if pr.counterexample is not None:
        return Outcome("violation", pr.checked, pr.counterexample)
    return Outcome("pass" if pr.checked else "vacuous", pr.checked)


# --- formatting -----------------------------------------------------------------------------

def _f(s) -> str:
    return format_set(s.module, s.mask)


def _fs(sets) -> list[str]:
    return [_f(s) for s in sets]


def _t(V, t) -> str:
    return "(" + ",".join(V.labels[x] for x in t) + ")"


# --- tuple-space helpers --------------------------------------------------------------------

def _linear_failure(sp, p):
    """A tuple whose scaled class is not determined by its class, if any."""
    if not sp.is_module_space():
        return None
    tuples, idx, root = sp.tuples(), sp.index, p.root
    for lam in range(sp.module.ring.size):
        for k, t in enumerate(tuples):
            r = root[k]
            if r != k and root[idx(sp.scale(lam, t))] != root[idx(sp.scale(lam, tuples[r]))]:
                return lam, _t(sp.module, t)
    return None


def _additive_failure(sp, p, rng, samples: int = 12):
    """Equivalent t ~ t' whose translates t + u, t' + u are not equivalent."""
    tuples, idx, root = sp.tuples(), sp.index, p.root
    for u in rng.sample(tuples, min(samples, len(tuples))):
        for k, t in enumerate(tuples):
            r = root[k]
            if r != k and root[idx(sp.add_tuples(t, u))] != root[idx(sp.add_tuples(tuples[r], u))]:
                return [_t(sp.module, x) for x in (t, tuples[r], u)]
    return None


def _union_failure(sp, p, members):
    """A class that meets the product of ``members`` without lying inside it."""
    inside = [all(m.mask >> x & 1 for m, x in zip(members, t)) for t in sp.tuples()]
    for k, t in enumerate(sp.tuples()):
        if inside[k] != inside[p.root[k]]:
            return _t(sp.module, t)
    return None


def _coincide(ctx: Context, sub, sup) -> bool:
    a, pa, _ = ctx.space(sub)
    b, pb, _ = ctx.space(sup)
    return restriction_compare(a, b, pa, pb) == "coincide"


def _zero_mask(V) -> int:
    return 1 << V.zero


def _w_families(ctx: Context, rng, As, k: int = 2):
    """Tuples W_i ∈ SA(A_i) with W_i ∩ A_j ⊆ W_j, drawn directly or as W ∩ A_i."""
    V, n, out = ctx.V, len(As), []
    for _ in range(8):
        if len(out) >= k:
            break
        if rng.random() < 0.5:
            Ws = [rng.choice(ctx.sa_in(A)) for A in As]
        else:
            W = rng.choice(ctx.sa_in(ctx.total(As)))
            Ws = [SubmoduleSet(V, W.mask & A.mask) for A in As]
            if not all(is_sa(w, A) for w, A in zip(Ws, As)):
                continue
        if all(Ws[i].mask & As[j].mask & ~Ws[j].mask == 0 for i in range(n) for j in range(n) if i != j):
            out.append(Ws)
    return out


def _arity(rng) -> int:
    return rng.choice((2, 2, 3))


# --- exchange equivalence ------------------------------------------------------------

@theorem("P1.3", "Exchange equivalence on A1 x A2 is R-linear and is the finest additive "
                 "equivalence identifying (d,0) with (0,d) for d in A1 ∩ A2.")
def _p13(ctx, rng, pr):
    for As in ctx.factor_tuples(2, rng):
        sp, p, _ = ctx.space(As)
        w = _linear_failure(sp, p)
        pr.check(w is None, factors=_fs(As), law="linear", witness=w)
        if sp.size <= ORACLE_CAP:
            pr.check(congruence_partition(sp).root == p.root, factors=_fs(As), law="finest")


@theorem("P1.6", "For A'_i ⊆ A_i with (A1, A2) amalgamated, (A'1, A'2) is amalgamated iff the "
                 "restricted equivalence of A1 x A2 equals that of A'1 x A'2.")
def _p16(ctx, rng, pr):
    z = _zero_mask(ctx.V)
    for As in ctx.factor_tuples(2, rng, need_am=True):
        for _ in range(2):
            sub = [rng.choice(ctx.subs_between(z, A.mask)) for A in As]
            pr.check(ctx.am(sub) == _coincide(ctx, sub, As), factors=_fs(As), sub=_fs(sub),
                     am=ctx.am(sub))


@theorem("P2.1", "Exchange equivalence on A1 x A2 is additive.")
def _p21(ctx, rng, pr):
    for As in ctx.factor_tuples(2, rng):
        sp, p, _ = ctx.space(As)
        w = _additive_failure(sp, p, rng)
        pr.check(w is None, factors=_fs(As), witness=w)


# --- SA pairs inherit amalgamation ------------------------------------------------------

def _t3_configs(ctx, rng, n: int = 2):
    sel = ctx.sel
    if n == 2 and {"A1", "A2", "W1", "W2"} <= sel.keys():
        As, Ws = [sel["A1"], sel["A2"]], [sel["W1"], sel["W2"]]
        if ctx.am(As) and all(W <= A and is_sa(W, A) for W, A in zip(Ws, As)) \
                and Ws[0] & As[1] <= Ws[1] and As[0] & Ws[1] <= Ws[0]:
            yield As, Ws
    if ctx.pinned:
        return
    for As in ctx.factor_tuples(n, rng, need_am=True):
        for Ws in _w_families(ctx, rng, As):
            yield As, Ws


@theorem("T3.1", "If (A1, A2) is amalgamated, W_i ∈ SA(A_i) and W1 ∩ A2 ⊆ W2, A1 ∩ W2 ⊆ W1, "
                 "then (W1, W2) is amalgamated.")
def _t31(ctx, rng, pr):
    for As, Ws in _t3_configs(ctx, rng):
        pr.check(ctx.am(Ws), A=_fs(As), W=_fs(Ws))


@theorem("T3.2a", "Under the same hypotheses W1 x W2 is a union of exchange classes of A1 x A2.")
def _t32a(ctx, rng, pr):
    for As, Ws in _t3_configs(ctx, rng):
        sp, p, _ = ctx.space(As)
        w = _union_failure(sp, p, Ws)
        pr.check(w is None, A=_fs(As), W=_fs(Ws), tuple=w)


@theorem("T3.2b", "Under the same hypotheses W1 + W2 is SA in A1 + A2.")
def _t32b(ctx, rng, pr):
    for As, Ws in _t3_configs(ctx, rng):
        pr.check(is_sa(ctx.total(Ws), ctx.total(As)), A=_fs(As), W=_fs(Ws))


@theorem("C3.3", "If (A1, A2) is amalgamated and A1 ∩ A2 is SA in A2, then A1 is SA in A1 + A2.")
def _c33(ctx, rng, pr):
    for As in ctx.factor_tuples(2, rng, k=6, need_am=True):
        A1, A2 = As
        if is_sa(A1 & A2, A2):
            pr.check(is_sa(A1, ctx.total(As)), A=_fs(As))


# --- multiple amalgamation ------------------------------------------------------------------

@theorem("P4.2", "Exchange equivalence on A1 x ... x An is additive.")
def _p42(ctx, rng, pr):
    for As in ctx.factor_tuples(3, rng):
        sp, p, _ = ctx.space(As)
        w = _additive_failure(sp, p, rng)
        pr.check(w is None, factors=_fs(As), witness=w)


@theorem("T4.3", "Exchange equivalence on an n-fold product is the finest additive equivalence "
                 "identifying d in slot i with d in slot j, and it is R-linear.")
def _t43(ctx, rng, pr):
    for As in ctx.factor_tuples(_arity(rng), rng):
        sp, p, _ = ctx.space(As)
        w = _linear_failure(sp, p)
        pr.check(w is None, factors=_fs(As), law="linear", witness=w)
        if sp.size <= BFS_CAP:
            pr.check(bfs_partition(sp).root == p.root, factors=_fs(As), law="closure")
        if sp.size <= ORACLE_CAP:
            pr.check(congruence_partition(sp).root == p.root, factors=_fs(As), law="finest")


@theorem("T4.5", "If (A_1..A_n) is amalgamated, W_k ∈ SA(A_k) and W_i ∩ A_j ⊆ W_j, then "
                 "(W_1..W_n) is amalgamated.")
def _t45(ctx, rng, pr):
    for As, Ws in _t3_configs(ctx, rng, _arity(rng)):
        pr.check(ctx.am(Ws), A=_fs(As), W=_fs(Ws))


@theorem("T4.6a", "Under the same hypotheses a tuple equivalent to one in W_1 x ... x W_n lies in "
                  "it, and the two equivalences agree there.")
def _t46a(ctx, rng, pr):
    for As, Ws in _t3_configs(ctx, rng, _arity(rng)):
        sp, p, _ = ctx.space(As)
        w = _union_failure(sp, p, Ws)
        pr.check(w is None and _coincide(ctx, Ws, As), A=_fs(As), W=_fs(Ws), tuple=w)


@theorem("T4.6b", "Under the same hypotheses W_1 + ... + W_n is SA in A_1 + ... + A_n.")
def _t46b(ctx, rng, pr):
    for As, Ws in _t3_configs(ctx, rng, _arity(rng)):
        pr.check(is_sa(ctx.total(Ws), ctx.total(As)), A=_fs(As), W=_fs(Ws))


def _c47_configs(ctx, rng, need_am: bool):
    V = ctx.V
    for As in ctx.factor_tuples(_arity(rng), rng, need_am=need_am):
        for W in ctx.pick(rng, ctx.sa_in(ctx.total(As)), 2):
            yield As, W, [SubmoduleSet(V, W.mask & A.mask) for A in As]


@theorem("C4.7a", "For W SA in A_1 + ... + A_n and (A_i) amalgamated, (W ∩ A_i) is amalgamated.")
def _c47a(ctx, rng, pr):
    for As, W, Ws in _c47_configs(ctx, rng, True):
        pr.check(ctx.am(Ws), A=_fs(As), W=_f(W))


@theorem("C4.7b", "For W SA in the sum, tuples of the W ∩ A_i are equivalent in the A-product "
                  "iff they are equivalent in the W-product.")
def _c47b(ctx, rng, pr):
    for As, W, Ws in _c47_configs(ctx, rng, False):
        pr.check(_coincide(ctx, Ws, As), A=_fs(As), W=_f(W))


@theorem("C4.7c", "For W SA in the sum, the product of the W ∩ A_i is a union of exchange classes.")
def _c47c(ctx, rng, pr):
    for As, W, Ws in _c47_configs(ctx, rng, False):
        sp, p, _ = ctx.space(As)
        w = _union_failure(sp, p, Ws)
        pr.check(w is None, A=_fs(As), W=_f(W), tuple=w)


by_design("S4.9", "Amalgamation is the colimit of the diagram of pairwise intersections.",
          "universal property over arbitrary targets; amalgamation is decided by the sum-map "
          "injectivity criterion instead")


# --- permutation, transport, contraction ------------------------------------------------------

def _permuted(ctx, rng, As):
    n = len(As)
    perm = list(range(n))
    while perm == list(range(n)):
        rng.shuffle(perm)
    return perm, [As[i] for i in perm]


@theorem("P5.1a", "Permuting the factors permutes exchange equivalence.")
def _p51a(ctx, rng, pr):
    for As in ctx.factor_tuples(_arity(rng), rng):
        perm, Bs = _permuted(ctx, rng, As)
        sp, p, _ = ctx.space(As)
        _, q, _ = ctx.space(Bs)
        fwd, back, ok = {}, {}, True
        for k, t in enumerate(sp.tuples()):
            c1, c2 = p.root[k], q.class_of(tuple(t[i] for i in perm))
            if fwd.setdefault(c1, c2) != c2 or back.setdefault(c2, c1) != c1:
                ok = False
                break
        pr.check(ok, A=_fs(As), perm=perm)


@theorem("P5.1b", "Permuting the factors preserves amalgamation.")
def _p51b(ctx, rng, pr):
    for As in ctx.factor_tuples(_arity(rng), rng):
        perm, Bs = _permuted(ctx, rng, As)
        pr.check(ctx.am(As) == ctx.am(Bs), A=_fs(As), perm=perm)


def _homs(ctx, rng):
    """Linear maps into V: identity, scalings by ring elements, and the sum map of an amalgam."""
    V, R = ctx.V, ctx.ring
    out = [("identity", identity_map(V))]
    for lam in range(R.size):
        if lam not in (R.zero, R.one):
            phi = ModuleMap(V, V, tuple(V.act[lam]))
            if not validate_homomorphism(phi):
                out.append((f"scale {R.labels[lam]}", phi))
    if space_size(ctx.factors) <= BFS_CAP:
        sp, p, _ = ctx.space(ctx.factors)
        out.append(("amalgam sum map", build_amalgam(sp, p).kappa))
    return ctx.pick(rng, out, CONFIGS)


def _p52_configs(ctx, rng):
    for name, phi in _homs(ctx, rng):
        for As in ctx.factor_tuples(_arity(rng), rng, k=2):
            pre = [popcount(phi.preimage_mask(A.mask)) for A in As]
            n = 1
            for m in pre:
                n *= m
            if n <= BFS_CAP:
                yield name, As, transport_report(phi, TupleSpace(list(As)))


@theorem("P5.2a", "A linear map carries equivalent tuples of preimages to equivalent tuples.")
def _p52a(ctx, rng, pr):
    for name, As, rep in _p52_configs(ctx, rng):
        pr.check(rep["forward"], map=name, A=_fs(As))


@theorem("P5.2b", "If the map is injective on the preimage of the sum (and onto the factors), "
                  "equivalence reflects back and amalgamation transfers both ways.")
def _p52b(ctx, rng, pr):
    for name, As, rep in _p52_configs(ctx, rng):
        if rep["converse"] is not None:
            pr.check(rep["converse"] and rep["am_transfer"], map=name, A=_fs(As), report=rep)


def _t53_configs(ctx, rng, need_am: bool):
    z = _zero_mask(ctx.V)
    for As in ctx.factor_tuples(rng.choice((1, 2)), rng, need_am=need_am):
        A0 = rng.choice(ctx.subs_between(z, As[0].mask))
        big = [A0] + list(As)
        if space_size(big) <= SPACE_CAP:
            yield As, A0, big


@theorem("T5.3a", "If (A_1..A_n) is amalgamated and A_0 ⊆ A_1, then (A_0, A_1..A_n) is amalgamated.")
def _t53a(ctx, rng, pr):
    for As, A0, big in _t53_configs(ctx, rng, True):
        pr.check(ctx.am(big), A=_fs(As), A0=_f(A0))


@theorem("T5.3b", "For A_0 ⊆ A_1, tuples are equivalent in A_0 x A_1 x ... iff their contractions "
                  "a_0 + a_1 are equivalent in A_1 x ...")
def _t53b(ctx, rng, pr):
    V = ctx.V
    for As, A0, big in _t53_configs(ctx, rng, False):
        spb, pb, _ = ctx.space(big)
        _, ps, _ = ctx.space(As)
        tuples = spb.tuples()

        def contract(t):
            return (V.add[t[0]][t[1]],) + tuple(t[2:])

        img = [ps.class_of(contract(t)) for t in tuples]
        fwd = all(img[k] == img[pb.root[k]] for k in range(len(tuples)))
        back, seen = True, {}
        for k in range(len(tuples)):
            if seen.setdefault(img[k], pb.root[k]) != pb.root[k]:
                back = False
                break
        pr.check(fwd and back, A=_fs(As), A0=_f(A0), forward=fwd, backward=back)


def _set_partitions(n: int):
    if n == 0:
        yield []
        return
    for part in _set_partitions(n - 1):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [n - 1]] + part[i + 1:]
        yield part + [[n - 1]]


@theorem("T5.4", "Contracting an amalgamated tuple along a partition of its indices keeps "
                 "amalgamation.")
def _t54(ctx, rng, pr):
    for As in ctx.factor_tuples(3, rng, need_am=True):
        parts = [p for p in _set_partitions(3) if 1 < len(p) < 3]
        for blocks in ctx.pick(rng, parts, 2):
            Bs = [ctx.total([As[i] for i in b]) for b in blocks]
            if space_size(Bs) <= SPACE_CAP:
                pr.check(ctx.am(Bs), A=_fs(As), blocks=blocks)


@theorem("C5.5", "If (A_0, A_1..A_n) is amalgamated, so is (A_0 + A_1, ..., A_0 + A_n).")
def _c55(ctx, rng, pr):
    for As in ctx.factor_tuples(_arity(rng), rng, need_am=True):
        Bs = [ctx.total([As[0], A]) for A in As[1:]]
        if space_size(Bs) <= SPACE_CAP:
            pr.check(ctx.am(Bs), A=_fs(As))


# --- D-complements --------------------------------------------------------------------------

def _full(ctx) -> SubmoduleSet:
    return SubmoduleSet(ctx.V, ctx.V.full_mask)


def _sa_sum_configs(ctx, rng):
    """(W, T) with T SA in V and W + T = V."""
    V = _full(ctx)
    out = []
    for T in ctx.pick(rng, ctx.sa_in(V), CONFIGS):
        Ws = [W for W in ctx.subs if sum_(W, T).mask == V.mask]
        for W in ctx.pick(rng, Ws, 2):
            out.append((W, T))
    return out


@theorem("P6.2", "If T is SA in V and W + T = V, then T is a (W ∩ T)-complement of W and W ∩ T "
                 "is SA in W.")
def _p62(ctx, rng, pr):
    for W, T in _sa_sum_configs(ctx, rng):
        D = W & T
        pr.check(is_d_complement(W, D, T) and is_sa(D, W), W=_f(W), T=_f(T))


def _complement_configs(ctx, rng):
    """(W, D, T) with D SA in W and T a D-complement of W in V."""
    out = []
    sel = ctx.sel
    if {"W", "D"} <= sel.keys() and sel["D"] <= sel["W"] and is_sa(sel["D"], sel["W"]):
        out += [(sel["W"], sel["D"], T) for T in find_d_complements(sel["W"], sel["D"])]
    if ctx.pinned:
        return out
    for W, T in _sa_sum_configs(ctx, rng):
        out.append((W, SubmoduleSet(ctx.V, W.mask & T.mask), T))
    for W in ctx.pick(rng, ctx.subs, CONFIGS):
        for D in ctx.pick(rng, ctx.sa_in(W), 2):
            for T in find_d_complements(W, D):
                out.append((W, D, T))
    return out


@theorem("P6.3", "A D-complement of W with D SA in W is SA in V.")
def _p63(ctx, rng, pr):
    for W, D, T in _complement_configs(ctx, rng):
        pr.check(is_sa(T), W=_f(W), D=_f(D), T=_f(T))


def _p64_configs(ctx, rng):
    for W, D, T in _complement_configs(ctx, rng):
        Us = [U for U in ctx.subs if sum_(W, U).mask == ctx.V.full_mask]
        for U in ctx.pick(rng, Us, 2):
            yield W, D, T, U


@theorem("P6.4", "If D is SA in W, T a D-complement of W and W + U = V, then T ⊆ U.")
def _p64(ctx, rng, pr):
    for W, D, T, U in _p64_configs(ctx, rng):
        pr.check(T <= U, W=_f(W), D=_f(D), T=_f(T), U=_f(U))


@theorem("P6.4*", "If D is SA in W, T a D-complement of W, W + U = V and D ⊆ U, then T ⊆ U.")
def _p64s(ctx, rng, pr):
    for W, D, T, U in _p64_configs(ctx, rng):
        if D <= U:
            pr.check(T <= U, W=_f(W), D=_f(D), T=_f(T), U=_f(U))


@theorem("T6.5", "For D SA in W, W has at most one D-complement in V.")
def _t65(ctx, rng, pr):
    seen = set()
    for W, D, _ in _complement_configs(ctx, rng):
        if (W.mask, D.mask) not in seen:
            seen.add((W.mask, D.mask))
            comps = find_d_complements(W, D)
            pr.check(len(comps) <= 1, W=_f(W), D=_f(D), complements=_fs(comps))


# --- SA-extensions and saturation -----------------------------------------------------------

@theorem("P7.3", "D ⊆ A is SA in A iff A∖D is closed under addition and (A∖D) + D ⊆ A∖D; "
                 "then (A∖D) + D = A∖D.")
def _p73(ctx, rng, pr):
    z = _zero_mask(ctx.V)
    for A in ctx.pick(rng, ctx.subs, CONFIGS):
        for D in ctx.pick(rng, ctx.subs_between(z, A.mask), 2):
            sa = is_sa(D, A)
            ok = sa == rest_closed_and_absorbing(A, D)
            rest = A - D
            if sa and rest.mask:
                ok = ok and set_sum(rest, D) == rest
            pr.check(ok, A=_f(A), D=_f(D), sa=sa)


def _ext_configs(ctx, rng):
    """(A, D, T) with D SA in A and T complementary to A over D."""
    out = []
    sel = ctx.sel
    if {"A", "D", "T"} <= sel.keys():
        A, D, T = sel["A"], sel["D"], sel["T"]
        if D <= A and is_sa(D, A) and is_complementary(A, D, T):
            out.append((A, D, T))
    if ctx.pinned:
        return out
    for _ in range(12):
        if len(out) >= CONFIGS:
            break
        A = rng.choice(ctx.subs)
        D = rng.choice(ctx.sa_in(A))
        for T in [subtractive_hull(D)] + [rng.choice(ctx.subs) for _ in range(3)]:
            if D <= T and is_complementary(A, D, T):
                out.append((A, D, T))
                break
    return out


@theorem("T7.5", "For an SA-extension (A, D) with complementary T ⊇ D, B = [(A∖D) + T] ∪ D is again "
                 "such an extension and B + T = A + T.")
def _t75(ctx, rng, pr):
    V = ctx.V
    for A, D, T in _ext_configs(ctx, rng):
        B = saturation(A, D, T)
        ok = is_submodule(V, B.mask) and A <= B and is_sa(D, B) and is_complementary(B, D, T) \
            and set_sum(B, T) == set_sum(A, T)
        pr.check(ok, A=_f(A), D=_f(D), T=_f(T), B=_f(B))


@theorem("T7.5*", "For an SA-extension (A, D) with complementary T ⊇ D, B is a submonoid with B∖D "
                  "closed under addition and D-stable, T is complementary to B and B + T = A + T; B is "
                  "a submodule when every scalar maps A∖D into itself or T into D.")
def _t75s(ctx, rng, pr):
    V, R = ctx.V, ctx.ring
    for A, D, T in _ext_configs(ctx, rng):
        B = saturation(A, D, T)
        cfg = dict(A=_f(A), D=_f(D), T=_f(T), B=_f(B))
        ok = is_submonoid(V, B.mask) and A <= B and rest_closed_and_absorbing(B, D) and is_complementary(B, D, T) \
            and set_sum(B, T) == set_sum(A, T)
        pr.check(ok, part="additive", **cfg)
        rest = (A - D).mask
        if all(all(rest >> V.act[lam][x] & 1 for x in bits(rest)) or
               all(D.mask >> V.act[lam][t] & 1 for t in T) for lam in range(R.size)):
            pr.check(is_submodule(V, B.mask), part="submodule", **cfg)


@theorem("T7.7", "An SA-extension (A, D) that is saturated by a complementary T has (A, T) "
                 "amalgamated.")
def _t77(ctx, rng, pr):
    V = ctx.V
    for A, D, T in _ext_configs(ctx, rng):
        B = saturation(A, D, T)
        for X in (A, B):
            if is_submodule(V, X.mask) and is_sa(D, X) and is_complementary(X, D, T) \
                    and is_saturated(X, D, T) and space_size([X, T]) <= SPACE_CAP:
                X = SubmoduleSet(V, X.mask)
                pr.check(ctx.am([X, T]), A=_f(X), D=_f(D), T=_f(T))


def _t79(ctx, rng, pr, with_am: bool):
    V = ctx.V
    if not sum_of_units(ctx.ring):
        return
    Z = zero_set(V)
    for A, D, T in _ext_configs(ctx, rng):
        m = (A.mask & ~D.mask) | Z.mask
        if not is_submodule(V, m):
            pr.check(False, A=_f(A), D=_f(D), T=_f(T), failure="A0 not a submodule")
            continue
        A0 = SubmoduleSet(V, m)
        cfg = dict(A=_f(A), D=_f(D), T=_f(T), A0=_f(A0))
        pr.check(is_sa(Z, A0) and is_complementary(A0, Z, T), part="extension", **cfg)
        sat = is_saturated(A0, Z, T)
        pr.check(sat == is_saturated(A, D, T), part="saturation", **cfg)
        if with_am and sat and space_size([A0, T]) <= SPACE_CAP:
            pr.check(ctx.am([A0, T]), part="amalgamation", **cfg)


@theorem("T7.9", "Over a semiring whose elements are sums of units, A_0 = (A∖D) ∪ {0} is an "
                 "SA-extension of {0} with complement T, saturated iff A is, and then (A_0, T) is "
                 "amalgamated.")
def _t79_literal(ctx, rng, pr):
    _t79(ctx, rng, pr, with_am=True)


@theorem("T7.9*", "Over a semiring whose elements are sums of units, A_0 = (A∖D) ∪ {0} is an "
                  "SA-extension of {0} with complement T, saturated iff A is.")
def _t79_parts(ctx, rng, pr):
    _t79(ctx, rng, pr, with_am=False)


# --- reducing a complement --------------------------------------------------------------------

def _reduced(V, A, T, U) -> int:
    """{x in T | A + Rx ⊆ U}."""
    add, u = V.add, U.mask
    return mask_of(x for x in T if all(u >> add[a][y] & 1 for a in A for y in cyclic(V, x)))


def _p81_configs(ctx, rng):
    for A, D, T in _ext_configs(ctx, rng):
        AT = sum_(A, T)
        for U in ctx.pick(rng, ctx.subs_between(D.mask, AT.mask), 2):
            yield A, D, T, U


@theorem("P8.1", "For T complementary to A over D and D ⊆ U' ⊆ A + T, T' = {x in T | A + Rx ⊆ U'} "
                 "is a submodule complementary to A over D with A + T' = U'.")
def _p81(ctx, rng, pr):
    V = ctx.V
    for A, D, T, U in _p81_configs(ctx, rng):
        m = _reduced(V, A, T, U)
        ok = is_submodule(V, m)
        if ok:
            Tp = SubmoduleSet(V, m)
            ok = is_complementary(A, D, Tp) and sum_(A, Tp) == U
        pr.check(ok, A=_f(A), D=_f(D), T=_f(T), U=_f(U), T_reduced=format_set(V, m))


@theorem("P8.1*", "With A ⊆ U' in addition, T' is a complementary submodule, the largest F ⊆ T with "
                  "A + F ⊆ U', and A + T' = U' iff U' = A + F for some submodule F ⊆ T.")
def _p81s(ctx, rng, pr):
    V = ctx.V
    for A, D, T, U in _p81_configs(ctx, rng):
        if not A <= U:
            continue
        m = _reduced(V, A, T, U)
        if not is_submodule(V, m):
            pr.check(False, A=_f(A), D=_f(D), T=_f(T), U=_f(U), failure="T' not a submodule")
            continue
        Tp = SubmoduleSet(V, m)
        Fs = [F for F in ctx.subs if F <= T and sum_(A, F) <= U]
        ok = is_complementary(A, D, Tp) and sum_(A, Tp) <= U and all(F <= Tp for F in Fs)
        ok = ok and (sum_(A, Tp) == U) == any(sum_(A, F) == U for F in Fs)
        pr.check(ok, A=_f(A), D=_f(D), T=_f(T), U=_f(U), T_reduced=_f(Tp))


@theorem("S8.2", "Compl' and Compl'' are lower sets in their intervals and T -> A + T is an "
                 "order isomorphism between them.")
def _s82(ctx, rng, pr):
    seen = set()
    for A, D, _ in _ext_configs(ctx, rng):
        if (A.mask, D.mask) in seen:
            continue
        seen.add((A.mask, D.mask))
        cp = compl_posets(A, D)
        failures = [name for name, ok in (("lower_prime", cp.lower1), ("lower_double_prime", cp.lower2),
                                          ("bijective", cp.bijective), ("monotone", cp.order_preserving),
                                          ("reflects", cp.order_reflecting)) if not ok]
        pr.check(not failures, A=_f(A), D=_f(D), failures=failures)


# --- subtractive hulls -------------------------------------------------------------------------

def _random_d(ctx, rng, k: int = CONFIGS):
    out = [ctx.sel["D"]] if "D" in ctx.sel else []
    return out + ctx.pick(rng, ctx.subs, k - len(out))


@theorem("P9.4", "{x | (x + D) ∩ D ≠ ∅} is the smallest subtractive submodule containing D.")
def _p94(ctx, rng, pr):
    V = ctx.V
    for D in _random_d(ctx, rng):
        H = subtractive_hull(D)
        oracle = V.full_mask
        for S in ctx.subs:
            if D <= S and is_subtractive(S):
                oracle &= S.mask
        pr.check(H.mask == oracle and is_subtractive(H), D=_f(D), hull=_f(H),
                 oracle=format_set(V, oracle))


@theorem("T9.5", "The subtractive hull of D is complementary over D to every SA-extension of D.")
def _t95(ctx, rng, pr):
    for D in _random_d(ctx, rng):
        ok, bad = hull_is_universal_complement(D)
        pr.check(ok, D=_f(D), failing=_fs(bad))


@theorem("P9.6", "Over a zerosumfree semifield, for T the subtractive hull of D, T' ⊋ T and x in "
                 "T'∖T, A = D + Rx is an SA-extension of D to which T' is not complementary.")
def _p96(ctx, rng, pr):
    V, R = ctx.V, ctx.ring
    units = set(R.units())
    if not is_lzs(R) or units != set(range(R.size)) - {R.zero}:
        return
    for D in _random_d(ctx, rng):
        T = subtractive_hull(D)
        bigger = [S for S in ctx.subs if T < S]
        for Tp in ctx.pick(rng, bigger, 2):
            x = rng.choice(bits(Tp.mask & ~T.mask))
            A = generate(V, D.mask | 1 << x)
            pr.check(is_sa(D, A) and not is_complementary(A, D, Tp), D=_f(D), T2=_f(Tp),
                     x=V.labels[x])


@theorem("T9.7", "A_0 = N_0 ∪ D is an SA-extension of D with A_0 ∩ D↓ = D, A_0 + D↓ = V, and D↓ "
                 "its unique D-complement.")
def _t97(ctx, rng, pr):
    for D in _random_d(ctx, rng):
        rep = nac_extension(D)
        pr.check(rep.ok, D=_f(D), A0=_f(rep.A0), failures=rep.failures)


@theorem("T9.7*", "A_0 = N_0 ∪ D is a submonoid in which D is SA, A_0 ∩ D↓ = D and A_0 + D↓ = V; "
                  "when A_0 is a submodule, D↓ is its unique D-complement.")
def _t97s(ctx, rng, pr):
    V = ctx.V
    for D in _random_d(ctx, rng):
        cl = sa_closure(D)
        m = nac(D, "V").mask | D.mask
        A0 = ElementSet(V, m)
        cfg = dict(D=_f(D), A0=_f(A0), closure=_f(cl))
        ok = is_submonoid(V, m) and rest_closed_and_absorbing(A0, D) and (A0 & cl) == D \
            and set_sum(A0, cl).mask == V.full_mask
        pr.check(ok, part="additive", **cfg)
        if is_submodule(V, m):
            comps = find_d_complements(SubmoduleSet(V, m), D)
            pr.check([T.mask for T in comps] == [cl.mask], part="complement", **cfg)


# --- minimal cosets -----------------------------------------------------------------------------

def _ordered_d(ctx, rng):
    Ds = [D for D in ctx.subs if is_d_ordered(ctx.V, D)]
    return ctx.pick(rng, Ds, CONFIGS)


@theorem("P10.3", "For D-ordered V and a submodule U ⊇ D, the maximal elements of U under the coset "
                 "order are Fix_D(U), so minimal D-cosets in U are singletons.")
def _p103(ctx, rng, pr):
    V = ctx.V
    for D in _ordered_d(ctx, rng):
        order = coset_order(V, D)
        for U in ctx.pick(rng, ctx.subs_between(D.mask, V.full_mask), 2):
            top = maximal_elements(order, U.mask)
            single = all(coset(x, D).mask == 1 << x for x in bits(top))
            pr.check(top == fix_set(U, D).mask and single, D=_f(D), U=_f(U),
                     maximal=format_set(V, top))


def _stable_sets(ctx, rng, D):
    V = ctx.V
    out = ctx.pick(rng, ctx.subs_between(D.mask, V.full_mask), 2)
    seed = ElementSet(V, mask_of(rng.sample(range(V.size), min(2, V.size))))
    out.append(set_sum(seed, D))
    return out


@theorem("P10.6", "For X stable under D and x in Fix_D(X), x + D↓ = {x}.")
def _p106(ctx, rng, pr):
    for D in _random_d(ctx, rng):
        Dd = subtractive_hull(D)
        for X in _stable_sets(ctx, rng, D):
            bad = [x for x in fix_set(X, D) if coset(x, Dd).mask != 1 << x]
            pr.check(not bad, D=_f(D), X=_f(X), bad=[ctx.V.labels[x] for x in bad])


@theorem("P10.7", "V + Fix_D(V) ⊆ Fix_D(V).")
def _p107(ctx, rng, pr):
    V = ctx.V
    for D in _random_d(ctx, rng):
        F = fix_set(ElementSet(V, V.full_mask), D)
        pr.check(set_sum(ElementSet(V, V.full_mask), F) <= F, D=_f(D), fix=_f(F))


@theorem("T10.8", "For D-ordered V, an SA-extension A of D and its saturation B by D↓: "
                  "Fix_D(A) = Fix_D(B); the minimal D-cosets in B are the singletons over Fix_D(A∖D) "
                  "and d_max; these x have x + D↓ = {x}; Fix_D(B) is an upper set within B.")
def _t108(ctx, rng, pr):
    V = ctx.V
    Vall = ElementSet(V, V.full_mask)
    for D in _ordered_d(ctx, rng):
        Dd = subtractive_hull(D)
        exts = [A for A in ctx.subs_between(D.mask, V.full_mask) if is_sa(D, A)]
        dm = d_max(V, D)
        order = coset_order(V, D)
        for A in ctx.pick(rng, exts, 2):
            B = saturation(A, D, Dd)
            cfg = dict(D=_f(D), A=_f(A), B=_f(B))
            fixB = fix_set(B, D)
            pr.check(fix_set(A, D) == fixB, part="fix", **cfg)
            expect = fix_set(A - D, D).mask | (1 << dm if dm is not None else 0)
            top = maximal_elements(order, B.mask)
            pr.check(top == expect, part="minimal", found=format_set(V, top),
                     expected=format_set(V, expect), **cfg)
            pr.check(all(coset(x, Dd).mask == 1 << x for x in bits(expect)), part="isolated", **cfg)
            fv = fix_set(Vall, D).mask
            up = all(fv >> V.add[x][v] & 1 and (not B.mask >> V.add[x][v] & 1 or fixB.mask >> V.add[x][v] & 1)
                     for x in fixB for v in range(V.size))
            pr.check(up, part="upper", **cfg)


def _minimal_cosets(cos: list[int]) -> list[int]:
    """Indices v whose coset contains no strictly smaller coset."""
    return [v for v, c in enumerate(cos) if not any(d != c and d & ~c == 0 for d in cos)]


@theorem("L10.9", "If v + E is a minimal E-coset, then u + E = v + E for every u in v + E.")
def _l109(ctx, rng, pr):
    V = ctx.V
    for E in ctx.pick(rng, ctx.subs, CONFIGS):
        cos = [coset(v, E).mask for v in range(V.size)]
        bad = [V.labels[v] for v in _minimal_cosets(cos) if any(cos[u] != cos[v] for u in bits(cos[v]))]
        pr.check(not bad, E=_f(E), bad=bad)


@theorem("P10.10", "A minimal D↓-coset v + D↓ contains at most one minimal D-coset u + D, and then "
                   "u + D↓ = v + D↓.")
def _p1010(ctx, rng, pr):
    V = ctx.V
    for D in _random_d(ctx, rng):
        Dd = subtractive_hull(D)
        cd = [coset(v, D).mask for v in range(V.size)]
        cdd = [coset(v, Dd).mask for v in range(V.size)]
        mins_d = _minimal_cosets(cd)
        ok, bad = True, None
        for v in _minimal_cosets(cdd):
            inside = {cd[u] for u in mins_d if cd[u] & ~cdd[v] == 0}
            us = [u for u in mins_d if cd[u] & ~cdd[v] == 0]
            if len(inside) > 1 or any(cdd[u] != cdd[v] for u in us):
                ok, bad = False, V.labels[v]
                break
        pr.check(ok, D=_f(D), v=bad)


# --- bipotent monoids and retractions ------------------------------------------------------------

def _restrict(M, mask: int, name: str = "") -> Monoid:
    xs = bits(mask)
    pos = {x: i for i, x in enumerate(xs)}
    add = [[pos[M.add[x][y]] for y in xs] for x in xs]
    return Monoid(len(xs), add, pos[M.zero], [M.labels[x] for x in xs], name)


def _random_chain(rng, n: int) -> tuple[int, ...]:
    rest = list(range(1, n))
    rng.shuffle(rest)
    return (0,) + tuple(rest)


@theorem("P11.3", "A bipotent monoid is upper bound and totally ordered by x ≤ y iff x + y = y.")
def _p113(ctx, rng, pr):
    sources = []
    if is_bipotent(ctx.V):
        sources.append(ctx.V)
    for ret in ctx.retractions():
        sources.append(_restrict(ret.monoid, ret.X))
    sources.append(monoid_from_chain(_random_chain(rng, rng.randint(1, 6))))
    for M in sources:
        q = leq_v(M)
        n = M.size
        total = all(q.leq(x, y) or q.leq(y, x) for x in range(n) for y in range(n))
        agrees = all(q.leq(x, y) == (M.add[x][y] == y) for x in range(n) for y in range(n))
        pr.check(is_lzs(M) and q.is_antisymmetric() and total and agrees and
                 all(q.leq(M.zero, x) for x in range(n)), monoid=M.name or str(M.labels))


@theorem("P11.4", "Bipotent monoids and totally ordered sets with least element determine each "
                  "other, and monotone maps fixing the least element are exactly the homomorphisms.")
def _p114(ctx, rng, pr):
    for _ in range(CONFIGS):
        a = _random_chain(rng, rng.randint(1, 5))
        b = _random_chain(rng, rng.randint(1, 5))
        Ma, Mb = monoid_from_chain(a), monoid_from_chain(b)
        rt = order_from_bipotent(Ma) == a and monoid_from_chain(order_from_bipotent(Mb)).add == Mb.add
        f = [rng.randrange(Mb.size) for _ in range(Ma.size)]
        if rng.random() < 0.5:  # bias toward monotone maps
            ranks = sorted(rng.randrange(len(b)) for _ in a)
            ranks[0] = 0
            f = [0] * Ma.size
            for x, r in zip(a, ranks):
                f[x] = b[r]
        hom = not validate_homomorphism(ModuleMap(Ma, Mb, tuple(f)))
        pr.check(rt and hom == is_monotone(a, b, f), A=list(a), B=list(b), map=f)


@theorem("T11.7", "The monoid built from a set retraction onto a chain is upper bound, has convex "
                  "fibers with trivial zero fiber, follows the three-case addition, and v + v = φ(v).")
def _t117(ctx, rng, pr):
    from ..retraction import build_from_retraction
    from .instances import random_retraction_spec
    for spec in (None, random_retraction_spec(rng)):
        build = ctx.build() if spec is None else build_from_retraction(spec)
        pr.check(build.report.ok and is_special_retraction(build.module, build.retraction.X,
                                                            build.retraction.phi),
                 spec=build.spec.to_json(), failures=list(build.report.failures))


def _dbars(ret, rng, k: int = 2):
    """D̄ ∋ 0 with D̄∖{0} an interval of the chain X."""
    order = ret.order
    out = [1 << order[0]]
    for _ in range(k):
        if len(order) > 1:
            i = rng.randrange(1, len(order))
            j = rng.randrange(i, len(order))
            out.append(mask_of((order[0],) + order[i:j + 1]))
    return out


@theorem("L11.9", "For a bipotent retraction φ and D = φ⁻¹(D̄) with D̄∖{0} convex, D is a submonoid "
                  "with the sandwich property and D↓ = φ⁻¹(D̄↓).")
def _l119(ctx, rng, pr):
    for ret in ctx.retractions():
        V = ret.monoid
        for dbar in _dbars(ret, rng):
            try:
                D = lift_submonoid(ret, dbar).mask
                ok = reach_downset(V, D) == ret.preimage(x_downset(ret, dbar))
                err = None
            except SamodError as e:
                ok, err = False, str(e)
            pr.check(ok, monoid=V.name, dbar=format_set(V, dbar), error=err)


def _t119(ctx, rng, pr, special_only: bool):
    for ret in ctx.retractions(special_only=special_only):
        V = ret.monoid
        if special_only and not is_special_retraction(V, ret.X, ret.phi):
            continue
        for dbar in _dbars(ret, rng):
            D = ret.preimage(dbar)
            iso = d_isolated(V, D).mask
            for lam in bits(x_isolated(ret, dbar)):
                bad = ret.fiber(lam) & ~iso
                pr.check(not bad, monoid=V.name, dbar=format_set(V, dbar), lam=V.labels[lam],
                         not_isolated=format_set(V, bad))


@theorem("T11.9", "For a bipotent retraction and λ D̄-isolated in X, every v in φ⁻¹(λ) is D-isolated.")
def _t119_literal(ctx, rng, pr):
    _t119(ctx, rng, pr, special_only=False)


@theorem("T11.9*", "For a special bipotent retraction and λ D̄-isolated in X, every v in φ⁻¹(λ) is "
                   "D-isolated.")
def _t119_special(ctx, rng, pr):
    _t119(ctx, rng, pr, special_only=True)


# --- actions ------------------------------------------------------------------------------------

def _actions(ctx):
    """Actions of V on an upper-bound target: the quotient action, and translation when V is."""
    V = ctx.V
    out = [("quotient", quotient_action(V))]
    if is_upper_bound(V):
        out.append(("translation", translation_action(V)))
    return [(n, a) for n, a in out if is_upper_bound(a.target)]


def _points(rng, X, k: int = 4) -> list[int]:
    return rng.sample(range(X.size), min(k, X.size))


def _submonoid(rng, X) -> ElementSet:
    return generate_submonoid(X, mask_of(rng.sample(range(X.size), min(rng.randint(1, 2), X.size))))


@theorem("P12.2", "For an action on an upper-bound monoid X, C_α(s) is an SA-submonoid of V.")
def _p122(ctx, rng, pr):
    V = ctx.V
    for name, a in _actions(ctx):
        for s in _points(rng, a.target):
            C = c_alpha(a, s, check=False)
            pr.check(is_submonoid(V, C.mask) and is_sa(C), action=name, s=a.target.labels[s], C=_f(C))


@theorem("P12.3", "C_α(s1) + C_α(s2) ⊆ C_α(s1 + s2); hence s ≤ t gives C_α(s) ⊆ C_α(t).")
def _p123(ctx, rng, pr):
    for name, a in _actions(ctx):
        X = a.target
        q = leq_v(X)
        pts = _points(rng, X)
        for s in pts:
            for t in pts:
                mono = not q.leq(s, t) or c_alpha(a, s, False) <= c_alpha(a, t, False)
                pr.check(stabilizer_sum_law(a, s, t) and mono, action=name, s=X.labels[s],
                         t=X.labels[t])


@theorem("P12.4a", "For S ⊆ X closed under addition, C_α(S) is an SA-submonoid of V.")
def _p124a(ctx, rng, pr):
    V = ctx.V
    for name, a in _actions(ctx):
        for _ in range(2):
            S = _submonoid(rng, a.target)
            C = c_alpha_set(a, S, check=False)
            pr.check(is_submonoid(V, C.mask) and is_sa(C), action=name, S=_f(S), C=_f(C))


@theorem("P12.4b", "For add-closed S, T ⊆ X, C_α(S) + C_α(T) ⊆ C_α(S + T).")
def _p124b(ctx, rng, pr):
    for name, a in _actions(ctx):
        for _ in range(2):
            S, T = _submonoid(rng, a.target), _submonoid(rng, a.target)
            lhs = set_sum(c_alpha_set(a, S, False), c_alpha_set(a, T, False))
            rhs = c_alpha_set(a, set_sum(S, T), False)
            pr.check(lhs <= rhs, action=name, S=_f(S), T=_f(T))


@theorem("P12.4c", "Cofinal add-closed S, T ⊆ X give C_α(S) = C_α(T).")
def _p124c(ctx, rng, pr):
    for name, a in _actions(ctx):
        X = a.target
        q = leq_v(X)
        for _ in range(2):
            S = _submonoid(rng, X)
            s = rng.choice(S.elements)
            y = rng.choice(bits(q.downset(s)))
            T = generate_submonoid(X, S.mask | 1 << y)
            if cofinal(q, S.mask, T.mask):
                pr.check(c_alpha_set(a, S, False) == c_alpha_set(a, T, False), action=name,
                         S=_f(S), T=_f(T))


@theorem("P12.8", "R_x = {λ | λ·C_α(x) ⊆ C_α(x)} is a subsemiring of R, convex under ≤_R and "
                  "containing N₀·1.")
def _p128(ctx, rng, pr):
    V, R = ctx.V, ctx.ring
    qR = leq_v(R)
    nat = naturals_image(R)
    for name, a in _actions(ctx):
        for x in _points(rng, a.target, 3):
            Rx = scalar_stabilizer(V, c_alpha(a, x, False).mask)
            pr.check(is_subsemiring(R, Rx) and is_convex(qR, Rx) and nat & ~Rx == 0, action=name,
                     x=a.target.labels[x], Rx=format_set(R, Rx))


@theorem("C12.10", "For add-closed S ⊆ X, C_α(S) is closed under scalars from o_R.")
def _c1210(ctx, rng, pr):
    V = ctx.V
    for name, a in _actions(ctx):
        for _ in range(2):
            S = _submonoid(rng, a.target)
            C = c_alpha_set(a, S, False)
            pr.check(is_o_closed(V, C.mask), action=name, S=_f(S), C=_f(C))


# --- the upper-bound quotient and C̄ -----------------------------------------------------------

@theorem("P13.1", "A submodule S is SA in V iff it is a union of ≡_V-classes whose image is SA in "
                  "the quotient.")
def _p131(ctx, rng, pr):
    q = quotient(ctx.V)
    for S in ctx.pick(rng, ctx.subs, 6):
        lhs, rhs = sa_through_quotient(q, S)
        pr.check(lhs == rhs, S=_f(S), sa=lhs)


@theorem("P13.2", "C̄(x) = {u | u + x ≤_V x} is an SA-submonoid of V.")
def _p132(ctx, rng, pr):
    V = ctx.V
    for x in _points(rng, V, 5):
        C = cbar_of(V, x, ctx.leq)
        pr.check(is_submonoid(V, C.mask) and is_sa(C), x=V.labels[x], C=_f(C))


def _leq_pairs(ctx, rng, k: int = 8):
    q, n = ctx.leq, ctx.V.size
    pairs = [(x, y) for x in range(n) for y in range(n) if q.leq(x, y)]
    return ctx.pick(rng, pairs, k)


@theorem("P13.3", "x ≤_V x' gives C̄(x) ⊆ C̄(x'); ≡_V-equivalent elements have equal C̄.")
def _p133(ctx, rng, pr):
    V, q = ctx.V, ctx.leq
    for x, y in _leq_pairs(ctx, rng):
        cx, cy = cbar_of(V, x, q), cbar_of(V, y, q)
        ok = cx <= cy and (not q.leq(y, x) or cx == cy)
        pr.check(ok, x=V.labels[x], y=V.labels[y])


@theorem("L13.6", "x ≤_V my gives C̄(x) ⊆ C̄(my) and C̄_ω(x) ⊆ C̄_ω(y).")
def _l136(ctx, rng, pr):
    V, q = ctx.V, ctx.leq
    for x in _points(rng, V, 4):
        for y in _points(rng, V, 3):
            for my in V.multiples(y):
                if q.leq(x, my):
                    ok = cbar_of(V, x, q) <= cbar_of(V, my, q) and c_omega(V, x) <= c_omega(V, y)
                    pr.check(ok, x=V.labels[x], y=V.labels[y], my=V.labels[my])
                    break


@theorem("P13.7", "Elements in the same archimedean class have equal C̄_ω.")
def _p137(ctx, rng, pr):
    V, q = ctx.V, ctx.leq
    for x in _points(rng, V, 4):
        cls = arch_class(V, x, q)
        ox = c_omega(V, x)
        bad = [V.labels[y] for y in cls if c_omega(V, y) != ox]
        pr.check(not bad, x=V.labels[x], arch=_f(cls), bad=bad)


def _hierarchy_configs(ctx, rng):
    V, z = ctx.V, _zero_mask(ctx.V)
    cands = [list(ctx.factors)]
    for _ in range(6):
        cands.append([rng.choice(ctx.subs) for _ in range(rng.choice((1, 2, 2, 3)))])
    out = []
    for As in cands:
        if len(out) >= CONFIGS:
            break
        if space_size(As) > HIERARCHY_CAP:
            continue
        Ss = []
        for A in As:
            if rng.random() < 0.5 or A.mask == z:
                Ss.append(generate_submonoid(V, mask_of(rng.sample(A.elements, min(2, len(A))))))
            else:  # multiples of one element: add-closed, need not contain 0
                x = rng.choice([a for a in A if a != V.zero])
                Ss.append(ElementSet(V, multiples_mask(V, x)))
        out.append((As, Ss))
    return out


@theorem("T13.8", "In V = A_1 ∞ ... ∞ A_r with add-closed S_k ⊆ A_k and S = S_1 + ... + S_r: each "
                  "C̄(S_k) is SA in A_k, C̄(S) is SA in V and is the amalgamation of the C̄(S_k), all "
                  "closed under o_R.")
def _t138(ctx, rng, pr):
    for As, Ss in _hierarchy_configs(ctx, rng):
        rep = hierarchy_pipeline(ctx.V, As, Ss, cap=HIERARCHY_CAP)
        pr.check(rep.ok, A=_fs(As), S=_fs(Ss), report=rep.to_json())


@theorem("T13.8*", "With the same data and (A_k) amalgamated in V, the traces C̄(S) ∩ A_k contain "
                   "C̄(S_k) and are amalgamated with sum C̄(S).")
def _t138s(ctx, rng, pr):
    for As, Ss in _hierarchy_configs(ctx, rng):
        rep = hierarchy_pipeline(ctx.V, As, Ss, cap=HIERARCHY_CAP)
        if rep.corrected["factors_am"]:
            pr.check(not rep.corrected_failures, A=_fs(As), S=_fs(Ss), report=rep.to_json())


def registry_ids() -> list[str]:
    return list(REGISTRY)


def resolve_suite(spec: str | None) -> list[Theorem]:
    """Theorem selection from a comma list of ids or prefixes ("T3", "P10.3"); all when empty."""
    if not spec or spec == "all":
        return list(REGISTRY.values())
    out = []
    for tok in (t.strip() for t in spec.split(",")):
        if not tok:
            continue
        if tok in REGISTRY:
            hits = [REGISTRY[tok]]
        else:
            hits = [th for tid, th in REGISTRY.items()
                    if tid.startswith(tok + ".") or tid.startswith(tok) and tid[len(tok):] in ("a", "b", "c", "*")]
        if not hits:
            raise SamodError(f"unknown theorem id {tok!r}")
        out += [h for h in hits if h not in out]
    return [th for th in REGISTRY.values() if th in out]
