"""Additive actions u +_α x of a monoid V on a monoid X and the submonoids C_α."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .algebra import ModuleMap, Monoid, ValidationReport, validate_homomorphism
from .errors import MalformedTableError, NotAddClosedError, SamodError
from .lattice import ElementSet, bits, is_add_closed, is_sa, mask_of
from .order import is_upper_bound, quotient


@dataclass(frozen=True, eq=False)
class ActionTable:
    """``table[u][x]`` is u +_α x."""

    actor: Monoid
    target: Monoid
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        t = tuple(tuple(r) for r in self.table)
        object.__setattr__(self, "table", t)
        if len(t) != self.actor.size or any(len(r) != self.target.size for r in t):
            raise MalformedTableError("action table must be |V| x |X|")
        if any(not (isinstance(y, int) and 0 <= y < self.target.size) for r in t for y in r):
            raise MalformedTableError("action entry out of range")

    def __call__(self, u: int, x: int) -> int:
        return self.table[u][x]


def validate_action(a: ActionTable) -> ValidationReport:
    """Check the three action laws; each failure carries its first witness."""
    V, X, t = a.actor, a.target, a.table
    vr, xr = range(V.size), range(X.size)
    checks = [
        ("action-compatible", lambda u, x1, x2: t[u][X.add[x1][x2]] == X.add[t[u][x1]][x2], product(vr, xr, xr)),
        ("action-associative", lambda u1, u2, x: t[V.add[u1][u2]][x] == t[u1][t[u2][x]], product(vr, vr, xr)),
        ("action-unit", lambda x: t[V.zero][x] == x, product(xr)),
    ]
    out = []
    for name, pred, space in checks:
        for w in space:
            if not pred(*w):
                out.append((name, tuple(w)))
                break
    return ValidationReport(out)


def translation_action(V: Monoid) -> ActionTable:
    """V acting on itself by addition."""
    return ActionTable(V, V, V.add)


def quotient_action(V) -> ActionTable:
    """V acting on its upper-bound quotient by u +_α x̄ = ū + x̄."""
    q = quotient(V)
    Q, c = q.module, q.class_of
    return ActionTable(V, Q, [[Q.add[c[u]][x] for x in range(Q.size)] for u in range(V.size)])


def constant_action(V: Monoid, X: Monoid, value: int | None = None) -> ActionTable:
    v = X.zero if value is None else value
    return ActionTable(V, X, [[v] * X.size for _ in range(V.size)])


def tilde(a: ActionTable, u: int) -> int:
    """ũ = u +_α 0."""
    return a.table[u][a.target.zero]


def tilde_map(a: ActionTable) -> ModuleMap:
    """u ↦ ũ, checked to be a monoid homomorphism; with X upper bound also u +_α x = ũ + x."""
    V, X = a.actor, a.target
    f = ModuleMap(V, X, tuple(tilde(a, u) for u in range(V.size)))
    bad = [w for w in validate_homomorphism(f) if w[0] in ("zero", "additive")]
    if bad:
        raise SamodError(f"u ↦ ũ is not additive: {bad[0]}")
    if is_upper_bound(X):
        for u in range(V.size):
            for x in range(X.size):
                if a.table[u][x] != X.add[f.mapping[u]][x]:
                    raise SamodError("u +_α x differs from ũ + x")
    return f


def c_alpha(a: ActionTable, s: int, check: bool = True) -> ElementSet:
    """C_α(s) = {u | u +_α s = s}; SA in V whenever X is upper bound."""
    V = a.actor
    out = ElementSet(V, mask_of(u for u in range(V.size) if a.table[u][s] == s))
    if check and is_upper_bound(a.target) and not is_sa(out):
        raise SamodError("C_α(s) is not SA although the target is upper bound")
    return out


def c_alpha_set(a: ActionTable, S: ElementSet, check: bool = True) -> ElementSet:
    """C_α(S): the union of C_α(s) over s in S, for S closed under addition."""
    if not is_add_closed(a.target, S.mask):
        raise NotAddClosedError("S must be closed under addition")
    m = 0
    for s in S:
        m |= c_alpha(a, s, check=False).mask
    out = ElementSet(a.actor, m)
    if check and is_upper_bound(a.target) and not is_sa(out):
        raise SamodError("C_α(S) is not SA although the target is upper bound")
    return out


def stabilizer_sum_law(a: ActionTable, s1: int, s2: int) -> bool:
    """C_α(s1) + C_α(s2) ⊆ C_α(s1 + s2)."""
    V = a.actor
    c1, c2 = c_alpha(a, s1, False), c_alpha(a, s2, False)
    c12 = c_alpha(a, a.target.add[s1][s2], False).mask
    return all(c12 >> V.add[u][w] & 1 for u in c1 for w in c2)


def orbit_stabilization(a: ActionTable, x: int) -> tuple[int | None, ElementSet]:
    """For S = {nx}: the least n with nx = (n+1)x (None if it never happens) and C_α(S)."""
    X = a.target
    mult = X.multiples(x)
    n_star = None
    for n, y in enumerate(mult, start=1):
        if X.add[y][x] == y:
            n_star = n
            break
    S = ElementSet(X, mask_of(mult))
    return n_star, c_alpha_set(a, S, check=False)


def scalar_closed_under(a: ActionTable, mask: int, scalars: int) -> bool:
    """λ·C ⊆ C for all λ in ``scalars`` (actor must be a module)."""
    V = a.actor
    return all(mask >> V.act[lam][u] & 1 for lam in bits(scalars) for u in bits(mask))
