"""Bipotent monoids, bipotent retractions and the construction of monoids from
a set-theoretic retraction onto a totally ordered set."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .algebra import FiniteModule, Monoid, validate_module, validate_monoid
from .errors import ConvexityError, NotBipotentError, NotRetractionError, PreconditionError, SamodError
from .fixtures import ghost_map, nsat, supertropical
from .lattice import ElementSet, bits, mask_of
from .order import d_isolated, is_upper_bound, leq_v


def bipotent_witness(M: Monoid) -> tuple[int, int] | None:
    add = M.add
    for x in range(M.size):
        for y in range(x, M.size):
            if add[x][y] not in (x, y):
                return x, y
    return None


def is_bipotent(M: Monoid, mask: int | None = None) -> bool:
    """x + y is one of x, y (for all x, y in ``mask`` when given)."""
    if mask is None:
        return bipotent_witness(M) is None
    add, xs = M.add, bits(mask)
    return all(add[x][y] in (x, y) for x in xs for y in xs)


def order_from_bipotent(M: Monoid, mask: int | None = None) -> tuple[int, ...]:
    """Elements in ascending order of x ≤ y iff x + y = y."""
    if not is_bipotent(M, mask):
        raise NotBipotentError(f"{M.name or 'monoid'} is not bipotent")
    xs = bits(M.full_mask if mask is None else mask)
    add = M.add
    below = {x: sum(1 for y in xs if add[x][y] == x) for x in xs}
    return tuple(sorted(xs, key=below.__getitem__))


def monoid_from_chain(order: Sequence[int], size: int | None = None, labels=None, name: str = "") -> Monoid:
    """The max-monoid on a chain; ``order`` lists element indices ascending, least is zero."""
    n = size if size is not None else len(order)
    if sorted(order) != list(range(n)):
        raise SamodError("order must list every element exactly once")
    rank = {x: i for i, x in enumerate(order)}
    add = [[x if rank[x] >= rank[y] else y for y in range(n)] for x in range(n)]
    return Monoid(n, add, order[0], labels, name)


def is_monotone(order_a: Sequence[int], order_b: Sequence[int], f: Sequence[int]) -> bool:
    ra = {x: i for i, x in enumerate(order_a)}
    rb = {x: i for i, x in enumerate(order_b)}
    return f[order_a[0]] == order_b[0] and all(
        rb[f[x]] <= rb[f[y]] for x in order_a for y in order_a if ra[x] <= ra[y])


# --- retractions --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Retraction:
    """A monoid V with a bipotent submonoid X (``X`` mask) and a map φ: V → X."""

    monoid: Monoid
    X: int
    phi: tuple[int, ...]

    @property
    def order(self) -> tuple[int, ...]:
        return order_from_bipotent(self.monoid, self.X)

    def fiber(self, lam: int) -> int:
        return mask_of(v for v, p in enumerate(self.phi) if p == lam)

    def preimage(self, mask: int) -> int:
        return mask_of(v for v, p in enumerate(self.phi) if mask >> p & 1)


def retraction_failure(V: Monoid, X: int, phi: Sequence[int]) -> str | None:
    add = V.add
    if len(phi) != V.size or any(not X >> p & 1 for p in phi):
        return "phi must map into X"
    if not X >> V.zero & 1 or any(not X >> add[a][b] & 1 for a in bits(X) for b in bits(X)):
        return "X is not a submonoid"
    if not is_bipotent(V, X):
        return "X is not bipotent"
    if any(phi[x] != x for x in bits(X)):
        return "phi is not the identity on X"
    for a in range(V.size):
        for b in range(V.size):
            if phi[add[a][b]] != add[phi[a]][phi[b]]:
                return f"phi is not additive at ({a},{b})"
    return None


def is_bipotent_retraction(V: Monoid, X: int, phi: Sequence[int]) -> bool:
    return retraction_failure(V, X, phi) is None


def is_special_retraction(V: Monoid, X: int, phi: Sequence[int]) -> bool:
    """Sums of elements in different fibers pick one summand; equal fibers sum to φ."""
    bad = retraction_failure(V, X, phi)
    if bad:
        raise NotRetractionError(bad)
    add = V.add
    for a in range(V.size):
        for b in range(V.size):
            s = add[a][b]
            if phi[a] != phi[b]:
                if s not in (a, b):
                    return False
            elif s != phi[a]:
                return False
    rank = {x: i for i, x in enumerate(order_from_bipotent(V, X))}
    for a in range(V.size):
        for b in range(V.size):
            ra, rb = rank[phi[a]], rank[phi[b]]
            want = b if ra < rb else a if ra > rb else phi[a]
            if add[a][b] != want:
                raise SamodError("special retraction disagrees with the three-case sum rule")
    return True


@dataclass(frozen=True)
class RetractionSpec:
    """A set-theoretic retraction of ``carrier`` elements onto X, with X totally ordered.

    ``order`` lists X ascending; its first entry is the zero.
    """

    carrier: int
    X: tuple[int, ...]
    phi: tuple[int, ...]
    order: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if len(self.phi) != self.carrier:
            raise SamodError("phi must have one entry per carrier element")
        if sorted(self.order) != sorted(self.X) or len(set(self.X)) != len(self.X):
            raise SamodError("order must list X exactly once")
        xs = set(self.X)
        if any(p not in xs for p in self.phi) or any(self.phi[x] != x for x in self.X):
            raise SamodError("phi must be a retraction onto X")
        if self.labels is not None and len(self.labels) != self.carrier:
            raise SamodError("label count differs from carrier size")

    @property
    def zero(self) -> int:
        return self.order[0]

    def to_json(self) -> dict:
        out = {"carrier": self.carrier, "X": list(self.X), "phi": list(self.phi), "order": list(self.order)}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "RetractionSpec":
        labels = data.get("labels")
        return cls(int(data["carrier"]), tuple(data["X"]), tuple(data["phi"]), tuple(data["order"]),
                   tuple(labels) if labels is not None else None)


def v5_spec() -> RetractionSpec:
    """X = 0 < 1 < 2 with the fat fiber {1, a, b} over 1."""
    return RetractionSpec(5, (0, 1, 2), (0, 1, 2, 1, 1), (0, 1, 2), ("0", "1", "2", "a", "b"))


def saturation_index(M: Monoid) -> int | None:
    """Least k ≥ 1 with kx = (k+1)x for every x, or None when some multiple cycles."""
    k = 1
    for x in range(M.size):
        orbit = M.multiples(x)
        last = orbit[-1]
        if M.add[last][x] != last:
            return None
        k = max(k, len(orbit))
    return k


def as_nsat_module(M: Monoid, name: str = "") -> FiniteModule:
    """View a monoid with eventually constant multiples as a module over NSAT(k)."""
    k = saturation_index(M)
    if k is None:
        raise SamodError("multiples cycle; no saturated-naturals action")
    R = nsat(k)
    act = []
    for n in range(k + 1):
        row = []
        for x in range(M.size):
            y = M.zero
            for _ in range(n):
                y = M.add[y][x]
            row.append(y)
        act.append(row)
    return FiniteModule(R, M.size, M.add, act, M.zero, M.labels, name or M.name)


@dataclass
class RetractionReport:
    associative_commutative: bool
    upper_bound: bool
    special: bool
    fibers_convex: bool
    zero_fiber_trivial: bool
    fixed_point_laws: bool
    doubling: bool
    doubling_determines_sum: bool
    image_of_doubling_is_X: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        out = {k: v for k, v in self.__dict__.items() if k != "failures"}
        out["failures"] = list(self.failures)
        out["ok"] = self.ok
        return out


@dataclass(frozen=True, eq=False)
class RetractionBuild:
    spec: RetractionSpec
    module: FiniteModule
    retraction: Retraction
    report: RetractionReport


def build_from_retraction(spec: RetractionSpec) -> RetractionBuild:
    """The monoid on the carrier given by the three-case rule, with its checks."""
    phi, z = spec.phi, spec.zero
    if any(v != z for v in range(spec.carrier) if phi[v] == z):
        raise PreconditionError("the fiber over zero must be the zero alone")
    rank = {x: i for i, x in enumerate(spec.order)}
    n = spec.carrier

    def plus(a, b):
        ra, rb = rank[phi[a]], rank[phi[b]]
        return b if ra < rb else a if ra > rb else phi[a]

    add = [[plus(a, b) for b in range(n)] for a in range(n)]
    M = Monoid(n, add, z, spec.labels, "RETRACT")
    V = as_nsat_module(M, "RETRACT")
    X = mask_of(spec.X)
    ret = Retraction(V, X, tuple(phi))
    fails = []
    ac = validate_monoid(M).ok and validate_module(V).ok
    if not ac:
        fails.append("monoid axioms")
    ub = is_upper_bound(V)
    if not ub:
        fails.append("upper bound")
    special = is_special_retraction(V, X, phi)
    if not special:
        fails.append("special retraction")
    q = leq_v(V)
    convex = True
    for lam in spec.X:
        f = ret.fiber(lam)
        for a in bits(f):
            for b in bits(f):
                if q.up[a] & q.downset(b) & ~f:
                    convex = False
    if not convex:
        fails.append("fiber convexity")
    zero_fiber = ret.fiber(z) == 1 << z
    if not zero_fiber:
        fails.append("zero fiber")
    laws = all((add[v][x] == x) if rank[phi[v]] <= rank[x] else (add[v][x] == v)
               for v in range(n) for x in spec.X)
    if not laws:
        fails.append("sums with fixed points")
    doubling = all(add[v][v] == phi[v] for v in range(n))
    if not doubling:
        fails.append("v+v = phi(v)")
    determines = all(add[a][a] != add[b][b] or add[a][a] == add[a][b] for a in range(n) for b in range(n))
    if not determines:
        fails.append("equal doubles")
    image = mask_of(add[v][v] for v in range(n)) == X
    if not image:
        fails.append("doubling image")
    rep = RetractionReport(ac, ub, special, convex, zero_fiber, laws, doubling, determines, image, fails)
    return RetractionBuild(spec, V, ret, rep)


def supertropical_retraction(k: int) -> Retraction:
    """The ghost map of SUPERTROP(k) as a retraction of its additive monoid."""
    R = supertropical(k)
    nu = ghost_map(R)
    from .algebra import semiring_as_module

    return Retraction(semiring_as_module(R), mask_of(set(nu)), nu)


# --- lifting submonoids and isolated elements ---------------------------------------------


def _x_rank(ret: Retraction) -> dict[int, int]:
    return {x: i for i, x in enumerate(ret.order)}


def is_convex_in_chain(rank: dict[int, int], mask: int) -> bool:
    rs = sorted(rank[x] for x in bits(mask))
    return not rs or rs[-1] - rs[0] + 1 == len(rs)


def x_downset(ret: Retraction, dbar: int) -> int:
    """{x in X | x ≤ d̄ for some d̄ in D̄}."""
    rank = _x_rank(ret)
    if not dbar:
        return 0
    top = max(rank[d] for d in bits(dbar))
    return mask_of(x for x in bits(ret.X) if rank[x] <= top)


def reach_downset(V: Monoid, D: int) -> int:
    """{v | v + w in D for some w}."""
    add = V.add
    return mask_of(v for v in range(V.size) if any(D >> add[v][w] & 1 for w in range(V.size)))


def lift_submonoid(ret: Retraction, dbar: int) -> ElementSet:
    """D = φ⁻¹(D̄) for D̄ ∋ 0 with D̄∖{0} convex in X."""
    V = ret.monoid
    if dbar & ~ret.X:
        raise SamodError("D̄ must lie inside X")
    if not dbar >> V.zero & 1:
        raise PreconditionError("D̄ must contain zero")
    rank = _x_rank(ret)
    if not is_convex_in_chain(rank, dbar & ~(1 << V.zero)):
        raise ConvexityError("D̄ without zero is not convex in X")
    D = ret.preimage(dbar)
    add = V.add
    if not D >> V.zero & 1 or any(not D >> add[a][b] & 1 for a in bits(D) for b in bits(D)):
        raise SamodError("preimage is not a submonoid")
    q = leq_v(V)
    core = dbar & ~(1 << V.zero)
    ends = ret.preimage(core)
    for v in range(V.size):
        if q.up[v] & ends and q.downset(v) & ends and not D >> v & 1:
            raise SamodError("sandwich property fails")
    if reach_downset(V, D) != ret.preimage(x_downset(ret, dbar)):
        raise SamodError("downset of D is not the preimage of the downset of D̄")
    return ElementSet(V, D)


def x_isolated(ret: Retraction, dbar: int) -> int:
    """Elements of X that are D̄-isolated inside the monoid X."""
    V, add = ret.monoid, ret.monoid.add
    xs, ds = bits(ret.X), bits(dbar)
    out = 0
    for lam in xs:
        if any(add[lam][d] != lam for d in ds):
            continue
        if any(add[x][d] == lam for x in xs if x != lam for d in ds):
            continue
        out |= 1 << lam
    return out


def lift_isolated(ret: Retraction, dbar: int, require_special: bool = True) -> ElementSet:
    """Union of the fibers over D̄-isolated λ; each is checked to be D-isolated in V."""
    V = ret.monoid
    if require_special and not is_special_retraction(V, ret.X, ret.phi):
        raise PreconditionError("isolation lifting needs a special retraction")
    D = lift_submonoid(ret, dbar)
    iso = d_isolated(V, D).mask
    out = 0
    for lam in bits(x_isolated(ret, dbar)):
        f = ret.fiber(lam)
        if f & ~iso:
            raise SamodError(f"fiber over {V.labels[lam]} is not D-isolated")
        out |= f
    return ElementSet(V, out)


def product_retraction(chain_len: int, other: Monoid) -> Retraction:
    """C × M retracted onto C × {0} by forgetting the second coordinate."""
    n = chain_len
    pairs = list(product(range(n), range(other.size)))
    idx = {p: i for i, p in enumerate(pairs)}
    add = [[idx[(max(a, c), other.add[b][d])] for (c, d) in pairs] for (a, b) in pairs]
    labels = [f"{a}.{other.labels[b]}" for a, b in pairs]
    M = Monoid(len(pairs), add, idx[(0, other.zero)], labels, f"C{n}x{other.name}")
    X = mask_of(idx[(a, other.zero)] for a in range(n))
    phi = tuple(idx[(a, other.zero)] for (a, _) in pairs)
    return Retraction(M, X, phi)
