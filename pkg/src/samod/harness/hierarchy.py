"""The amalgam hierarchy: C̄(S) inside V = A_1 ∞ ... ∞ A_r.

Given submodules A_k of V_0 and add-closed S_k ⊆ A_k, build the amalgam V,
carry A_k and S_k into V, and compare C̄(S) for S = S_1 + ... + S_r with the
pieces C̄(S_k).  Two readings are checked:

* literal: each C̄(S_k) = {z in A_k | z + s ≤ s for some s in S_k} is SA in
  A_k, and the tuple (C̄(S_1), ..., C̄(S_r)) has amalgamation with sum C̄(S);
* corrected: the traces W_k = C̄(S) ∩ A_k have amalgamation with sum C̄(S)
  and contain C̄(S_k).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra import FiniteModule
from ..errors import PreconditionError, SamodError
from ..exchange import TupleSpace, build_amalgam, exchange_partition, has_amalgamation
from ..lattice import ElementSet, bits, format_set, is_add_closed, is_sa, is_submonoid, mask_of, sum_all
from ..order import c_omega, cbar_of_set, is_o_closed, leq_v, o_ring, w_of

MAX_FACTORS = 3
SPACE_CAP = 400


@dataclass
class HierarchyReport:
    module: FiniteModule
    A: list[int]
    S: list[int]
    cbar_parts: list[int]
    cbar_total: int
    literal: dict[str, bool]
    corrected: dict[str, bool]
    omega: dict[str, bool]
    o_closed: bool | None
    failures: list[str] = field(default_factory=list)
    corrected_failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        V = self.module
        f = lambda m: format_set(V, m)  # noqa: E731
        return {
            "amalgam_size": V.size,
            "A": [f(m) for m in self.A],
            "S": [f(m) for m in self.S],
            "cbar_parts": [f(m) for m in self.cbar_parts],
            "cbar_total": f(self.cbar_total),
            "literal": dict(sorted(self.literal.items())),
            "corrected": dict(sorted(self.corrected.items())),
            "omega": dict(sorted(self.omega.items())),
            "o_closed": self.o_closed,
            "failures": list(self.failures),
            "corrected_failures": list(self.corrected_failures),
        }


def _am(V, masks: list[int], cap: int = SPACE_CAP) -> tuple[bool, int] | None:
    """(has amalgamation, sum mask), or None for non-submonoids or oversized spaces."""
    if any(not is_submonoid(V, m) for m in masks) or _space_size(masks) > cap:
        return None
    space = TupleSpace([ElementSet(V, m) for m in masks])
    p = exchange_partition(space)
    return bool(has_amalgamation(space, p)), space.sum_set().mask


def _part_cbar(V, q, A: int, S: int) -> int:
    """{z in A | z + s ≤_V s for some s in S}."""
    return mask_of(z for z in bits(A) if any(q.leq(V.add[z][s], s) for s in bits(S)))


def _space_size(masks: list[int]) -> int:
    n = 1
    for m in masks:
        n *= bin(m).count("1")
    return n


def hierarchy_pipeline(V0: FiniteModule, As: list[ElementSet], Ss: list[ElementSet],
                       cap: int = SPACE_CAP) -> HierarchyReport:
    r = len(As)
    if not 1 <= r <= MAX_FACTORS or len(Ss) != r:
        raise PreconditionError("need one to three factors with one subset each")
    for A, S in zip(As, Ss):
        if S.mask & ~A.mask:
            raise PreconditionError("each S_k must lie in A_k")
        if not S.mask or not is_add_closed(V0, S.mask):
            raise PreconditionError("each S_k must be nonempty and closed under addition")
    space = TupleSpace(list(As), cap=cap)
    am = build_amalgam(space)
    V = am.module
    A = [am.image(k, As[k].mask) for k in range(r)]
    S = [am.image(k, Ss[k].mask) for k in range(r)]
    q = leq_v(V)
    parts = [_part_cbar(V, q, A[k], S[k]) for k in range(r)]
    S_total = sum_all([ElementSet(V, m) for m in S])
    total = cbar_of_set(V, S_total).mask

    lit: dict[str, bool] = {}
    lit["parts_sa"] = all(is_submonoid(V, parts[k]) and is_sa(ElementSet(V, parts[k]), ElementSet(V, A[k]))
                          for k in range(r))
    lit["total_sa"] = is_submonoid(V, total) and is_sa(ElementSet(V, total))
    res = _am(V, parts)
    lit["parts_am"] = bool(res and res[0])
    lit["parts_sum"] = bool(res and res[1] == total)

    cor: dict[str, bool] = {}
    res = _am(V, A)
    cor["factors_am"] = bool(res and res[0] and res[1] == V.full_mask)
    traces = [total & A[k] for k in range(r)]
    res = _am(V, traces)
    cor["traces_am"] = bool(res and res[0])
    cor["traces_sum"] = bool(res and res[1] == total)
    cor["parts_in_traces"] = all(parts[k] & ~traces[k] == 0 for k in range(r))

    omega = _omega_checks(V, q, am, r)

    try:
        o = o_ring(V.ring)
        o_closed = all(is_o_closed(V, m, o) for m in parts + [total])
    except SamodError:
        o_closed = None

    fails = [k for k, v in sorted(lit.items()) if not v]
    if o_closed is False:
        fails.append("o_closed")
    # The corrected reading rests on the factors having amalgamation in V.
    cfails = [k for k, v in sorted(cor.items()) if not v] if cor["factors_am"] else []
    return HierarchyReport(V, A, S, parts, total, lit, cor, omega, o_closed, fails, cfails)


def _omega_checks(V, q, am, r: int, limit: int = 6) -> dict[str, bool]:
    """Nesting of W(x) and C̄_ω(x) along x ≤ x', and the pieces C̄_ω(x_k)."""
    reps = am.reps[:limit]
    xs = [am.class_index(t) for t in reps]
    out = {"W_nested": True, "omega_nested": True, "omega_in_W": True, "omega_parts_am": True,
           "omega_parts_sum": True}
    om = {x: c_omega(V, x).mask for x in xs}
    ws = {x: w_of(V, x).mask for x in xs}
    for x in xs:
        if om[x] & ~ws[x]:
            out["omega_in_W"] = False
        for y in xs:
            if q.leq(x, y):
                if ws[x] & ~ws[y]:
                    out["W_nested"] = False
                if om[x] & ~om[y]:
                    out["omega_nested"] = False
    for t, x in zip(reps, xs):
        pieces = [c_omega(V, am.embeddings[k][t[k]]).mask for k in range(r)]
        res = _am(V, pieces)
        if res is None:
            continue
        out["omega_parts_am"] &= res[0]
        out["omega_parts_sum"] &= res[1] == om[x]
    return out

