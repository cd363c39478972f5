"""Exchange equivalence on tuple spaces A_1 x ... x A_n and amalgamation.

A basic (i, j)-exchange of d moves a summand d in A_i ∩ A_j from coordinate
i to coordinate j: (.., a_i, .., a_j, ..) becomes (.., a_i', .., a_j + d, ..)
whenever a_i = a_i' + d.  Exchange equivalence is the equivalence relation
generated by these steps; the space has amalgamation (AM) when tuples with
equal component sums are always equivalent.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import NamedTuple, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .algebra import DEFAULT_ELEMENT_CAP, FiniteModule, ModuleMap, validate_homomorphism, validate_module
from .errors import (
    AmbientMismatchError,
    CapExceededError,
    ContainmentError,
    NotEquivalentError,
    NotHomomorphismError,
    PreconditionError,
    SamodError,
)
from .lattice import ElementSet, SubmoduleSet, bits, is_scalar_closed, is_submonoid, sum_all

TUPLE_CAP = 10 ** 6

Tup = tuple[int, ...]


class TupleSpace:
    """The product of additive submonoids A_1..A_n of one module."""

    def __init__(self, factors: Sequence[ElementSet], cap: int = TUPLE_CAP):
        if not factors:
            raise PreconditionError("a tuple space needs at least one factor")
        V = factors[0].module
        for A in factors:
            if A.module is not V:
                raise AmbientMismatchError("all factors must share one module")
            if not is_submonoid(V, A.mask):
                raise PreconditionError(f"factor {A} is not an additive submonoid")
        self.module = V
        self.factors = tuple(factors)
        self.elems = tuple(tuple(A.elements) for A in factors)
        self.radix = tuple(len(e) for e in self.elems)
        total = 1
        for r in self.radix:
            total *= r
        if total > cap:
            raise CapExceededError(f"{total} tuples exceeds the tuple cap {cap}")
        self.size = total
        self._pos = tuple({x: k for k, x in enumerate(e)} for e in self.elems)
        n = len(factors)
        self.intersections = tuple(
            tuple(factors[i].mask & factors[j].mask for j in range(n)) for i in range(n)
        )
        self._tuples: list[Tup] | None = None

    @property
    def n(self) -> int:
        return len(self.factors)

    def tuples(self) -> list[Tup]:
        """All tuples in index order, which is lexicographic order."""
        if self._tuples is None:
            self._tuples = list(product(*self.elems))
        return self._tuples

    def index(self, t: Sequence[int]) -> int:
        k = 0
        try:
            for pos, r, x in zip(self._pos, self.radix, t):
                k = k * r + pos[x]
        except KeyError:
            raise ContainmentError(f"tuple {tuple(t)} is not in the space") from None
        if len(t) != self.n:
            raise ContainmentError(f"tuple {tuple(t)} has the wrong length")
        return k

    def __contains__(self, t) -> bool:
        return len(t) == self.n and all(x in p for p, x in zip(self._pos, t))

    def tuple_sum(self, t: Sequence[int]) -> int:
        return self.module.sum_of(t)

    def add_tuples(self, t: Sequence[int], u: Sequence[int]) -> Tup:
        add = self.module.add
        return tuple(add[a][b] for a, b in zip(t, u))

    def scale(self, lam: int, t: Sequence[int]) -> Tup:
        row = self.module.act[lam]
        return tuple(row[a] for a in t)

    def sum_set(self) -> ElementSet:
        return sum_all(list(self.factors))

    def is_module_space(self) -> bool:
        V = self.module
        return isinstance(V, FiniteModule) and all(is_scalar_closed(V, A.mask) for A in self.factors)

    def decompositions(self, i: int, d: int, a: int) -> list[int]:
        """All a' in A_i with a' + d = a."""
        add = self.module.add
        return [x for x in self.elems[i] if add[x][d] == a]

    def __repr__(self):
        return f"TupleSpace({', '.join(str(A) for A in self.factors)})"


class Step(NamedTuple):
    source: Tup
    target: Tup
    i: int
    j: int
    d: int


def basic_exchange_steps(space: TupleSpace, t: Sequence[int], i: int, j: int, d: int) -> list[Tup]:
    """Every tuple reachable from t by one (i, j)-exchange of d."""
    if i == j:
        raise PreconditionError("an exchange needs two distinct coordinates")
    if not space.intersections[i][j] >> d & 1:
        raise PreconditionError(f"d={d} is not in A_{i} ∩ A_{j}")
    t = tuple(t)
    if t not in space:
        raise ContainmentError(f"tuple {t} is not in the space")
    add = space.module.add
    out = []
    tj = add[t[j]][d]
    for ai in space.decompositions(i, d, t[i]):
        s = list(t)
        s[i] = ai
        s[j] = tj
        out.append(tuple(s))
    return out


def _steps_from(space: TupleSpace, t: Tup):
    n = space.n
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for d in bits(space.intersections[i][j]):
                for u in basic_exchange_steps(space, t, i, j, d):
                    yield Step(t, u, i, j, d)


def exchange_edges(space: TupleSpace) -> list[tuple[int, int]]:
    """Nontrivial basic-exchange edges as index pairs, in deterministic order."""
    V = space.module
    add, zero = V.add, V.zero
    n = space.n
    dec = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                for d in bits(space.intersections[i][j]):
                    if d != zero and (i, d) not in dec:
                        table: dict[int, list[int]] = {}
                        for x in space.elems[i]:
                            table.setdefault(add[x][d], []).append(x)
                        dec[(i, d)] = table
    edges = []
    index = space.index
    for k, t in enumerate(space.tuples()):
        s = V.sum_of(t)
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                for d in bits(space.intersections[i][j]):
                    if d == zero:
                        continue
                    for ai in dec[(i, d)].get(t[i], ()):
                        u = list(t)
                        u[i] = ai
                        u[j] = add[t[j]][d]
                        if V.sum_of(u) != s:
                            raise SamodError("exchange step changed the component sum")
                        k2 = index(u)
                        if k2 != k:
                            edges.append((k, k2))
    return edges


def _components(size: int, edges: list[tuple[int, int]]) -> list[int]:
    """Root (least member) of each vertex's connected component."""
    if not edges:
        return list(range(size))
    e = np.asarray(edges, dtype=np.int64)
    g = coo_matrix((np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])), shape=(size, size))
    _, labels = connected_components(g, directed=False)
    first: dict[int, int] = {}
    roots = []
    for k, lab in enumerate(labels.tolist()):
        roots.append(first.setdefault(lab, k))
    return roots


@dataclass(frozen=True, eq=False)
class ExchangePartition:
    """Exchange-equivalence classes of a tuple space.

    ``root[k]`` is the least tuple index in the class of tuple k.
    """

    space: TupleSpace
    root: tuple[int, ...]

    @property
    def class_count(self) -> int:
        return sum(1 for k, r in enumerate(self.root) if k == r)

    def class_of(self, t: Sequence[int]) -> int:
        return self.root[self.space.index(t)]

    def equivalent(self, t1: Sequence[int], t2: Sequence[int]) -> bool:
        return self.class_of(t1) == self.class_of(t2)

    def classes(self) -> list[list[Tup]]:
        """Classes as lists of tuples, ordered by their least member."""
        groups: dict[int, list[Tup]] = {}
        for t, r in zip(self.space.tuples(), self.root):
            groups.setdefault(r, []).append(t)
        return [groups[r] for r in sorted(groups)]

    def class_sets(self) -> set[frozenset]:
        return {frozenset(c) for c in self.classes()}


def exchange_partition(space: TupleSpace) -> ExchangePartition:
    return ExchangePartition(space, tuple(_components(space.size, exchange_edges(space))))


def are_exchange_equivalent(p: ExchangePartition, t1, t2) -> bool:
    return p.equivalent(t1, t2)


# --- independent oracles ---------------------------------------------------------------

def bfs_partition(space: TupleSpace) -> ExchangePartition:
    """Reachability closure of the step relation by breadth-first search."""
    index = space.index
    root = [-1] * space.size
    for k, t in enumerate(space.tuples()):
        if root[k] != -1:
            continue
        root[k] = k
        queue = deque([t])
        while queue:
            u = queue.popleft()
            for st in _steps_from(space, u):
                k2 = index(st.target)
                if root[k2] == -1:
                    root[k2] = k
                    queue.append(st.target)
    return ExchangePartition(space, tuple(root))


def congruence_partition(space: TupleSpace) -> ExchangePartition:
    """Least congruence of the product monoid identifying d at i with d at j.

    Closed under translation by every tuple and, for module spaces, under
    scalars; computed as a fixpoint without reference to exchange steps.
    """
    V = space.module
    n, zero = space.n, V.zero
    tuples = space.tuples()
    index = space.index

    def unit(i, d):
        t = [zero] * n
        t[i] = d
        return tuple(t)

    pairs = set()
    for i in range(n):
        for j in range(i + 1, n):
            for d in bits(space.intersections[i][j]):
                a, b = index(unit(i, d)), index(unit(j, d))
                if a != b:
                    pairs.add((a, b))
    scalars = range(V.ring.size) if space.is_module_space() else ()
    while True:
        roots = _components(space.size, sorted(pairs))
        new = set()
        for a, b in sorted(pairs):
            ta, tb = tuples[a], tuples[b]
            for u in tuples:
                x, y = index(space.add_tuples(ta, u)), index(space.add_tuples(tb, u))
                if roots[x] != roots[y]:
                    new.add((x, y))
            for lam in scalars:
                x, y = index(space.scale(lam, ta)), index(space.scale(lam, tb))
                if roots[x] != roots[y]:
                    new.add((x, y))
        if not new:
            return ExchangePartition(space, tuple(roots))
        pairs |= new


# --- witness chains ------------------------------------------------------------------

def witness_chain(p: ExchangePartition, t1, t2, normalized: bool = False) -> list[Step]:
    """A shortest chain of basic exchanges from t1 to t2.

    With ``normalized`` (two factors only) consecutive steps of one type are
    merged and trivial d = 0 steps are inserted so that types alternate,
    starting with (0, 1) and ending with (1, 0).
    """
    space = p.space
    t1, t2 = tuple(t1), tuple(t2)
    if not p.equivalent(t1, t2):
        raise NotEquivalentError(f"{t1} and {t2} are not exchange equivalent")
    prev: dict[Tup, Step | None] = {t1: None}
    queue = deque([t1])
    while queue and t2 not in prev:
        u = queue.popleft()
        for st in _steps_from(space, u):
            if st.target not in prev:
                prev[st.target] = st
                queue.append(st.target)
    chain = []
    cur = t2
    while prev[cur] is not None:
        st = prev[cur]
        chain.append(st)
        cur = st.source
    chain.reverse()
    return normalize_chain(space, t1, chain) if normalized else chain


def normalize_chain(space: TupleSpace, start: Tup, chain: list[Step]) -> list[Step]:
    if space.n != 2:
        raise PreconditionError("normalized chains are defined for two factors")
    add, zero = space.module.add, space.module.zero
    merged: list[Step] = []
    for st in chain:
        if st.d == zero:
            continue
        if merged and (merged[-1].i, merged[-1].j) == (st.i, st.j):
            last = merged.pop()
            st = Step(last.source, st.target, st.i, st.j, add[last.d][st.d])
        merged.append(st)
    out: list[Step] = []
    cur = start
    for st in merged:
        if not out and (st.i, st.j) == (1, 0):
            out.append(Step(cur, cur, 0, 1, zero))
        out.append(st)
        cur = st.target
    if not out:
        out.append(Step(cur, cur, 0, 1, zero))
    if (out[-1].i, out[-1].j) == (0, 1):
        out.append(Step(cur, cur, 1, 0, zero))
    return out


def check_chain(space: TupleSpace, t1, t2, chain: list[Step]) -> bool:
    """Each step is a genuine basic exchange and the chain links t1 to t2."""
    cur = tuple(t1)
    for st in chain:
        if st.source != cur:
            return False
        if st.target not in basic_exchange_steps(space, st.source, st.i, st.j, st.d):
            return False
        cur = st.target
    return cur == tuple(t2)


# --- amalgamation -------------------------------------------------------------------

@dataclass(frozen=True)
class AMResult:
    ok: bool
    class_count: int
    certificate: tuple[Tup, Tup] | None

    def __bool__(self):
        return self.ok


def has_amalgamation(space: TupleSpace, p: ExchangePartition | None = None) -> AMResult:
    """AM iff every fibre of the sum map is a single class.

    On failure the certificate is the lexicographically least pair of
    inequivalent tuples with equal sums.
    """
    p = p or exchange_partition(space)
    groups: dict[int, list[int]] = {}
    V = space.module
    tuples = space.tuples()
    for k, t in enumerate(tuples):
        groups.setdefault(V.sum_of(t), []).append(k)
    best = None
    for g in groups.values():
        r0 = p.root[g[0]]
        for k in g[1:]:
            if p.root[k] != r0:
                cand = (tuples[g[0]], tuples[k])
                if best is None or cand < best:
                    best = cand
                break
    return AMResult(best is None, p.class_count, best)


@dataclass(frozen=True, eq=False)
class AmalgamModule:
    """The module of exchange classes with its sum map and factor embeddings."""

    module: FiniteModule
    space: TupleSpace
    partition: ExchangePartition
    reps: tuple[Tup, ...]
    kappa: ModuleMap
    embeddings: tuple[dict, ...]

    def class_index(self, t) -> int:
        return self._lookup[self.partition.class_of(t)]

    @property
    def _lookup(self) -> dict:
        return {self.space.index(r): c for c, r in enumerate(self.reps)}

    def image(self, k: int, mask: int) -> int:
        """Mask of j_k(S) for a subset S (mask) of A_k."""
        out = 0
        for a in bits(mask):
            out |= 1 << self.embeddings[k][a]
        return out


def build_amalgam(space: TupleSpace, p: ExchangePartition | None = None,
                  cap: int = DEFAULT_ELEMENT_CAP) -> AmalgamModule:
    V = space.module
    if not space.is_module_space():
        raise PreconditionError("amalgam construction needs submodule factors")
    p = p or exchange_partition(space)
    count = p.class_count
    if count > cap:
        raise CapExceededError(f"{count} classes exceeds the element cap {cap}")
    tuples = space.tuples()
    roots = sorted(set(p.root))
    cls = {r: c for c, r in enumerate(roots)}
    of = [cls[r] for r in p.root]
    reps = [tuples[r] for r in roots]
    index = space.index
    add = [[of[index(space.add_tuples(a, b))] for b in reps] for a in reps]
    act = [[of[index(space.scale(lam, a))] for a in reps] for lam in range(V.ring.size)]
    # Well-definedness on every tuple, not just on representatives.
    for k, t in enumerate(tuples):
        for c, r in enumerate(reps):
            if of[index(space.add_tuples(t, r))] != add[of[k]][c]:
                raise SamodError("class addition is not well defined")
        for lam in range(V.ring.size):
            if of[index(space.scale(lam, t))] != act[lam][of[k]]:
                raise SamodError("class scalar action is not well defined")
    zero = of[index((V.zero,) * space.n)]
    labels = ["|".join(V.labels[x] for x in r) for r in reps]
    M = FiniteModule(V.ring, count, add, act, zero, labels, name=f"AMALG({V.name})")
    if not validate_module(M).ok:
        raise SamodError("amalgam failed module validation")
    kappa = ModuleMap(M, V, tuple(V.sum_of(r) for r in reps))
    if validate_homomorphism(kappa):
        raise SamodError("sum map is not a homomorphism")
    embeddings = []
    for k in range(space.n):
        e = {}
        for a in space.elems[k]:
            t = [V.zero] * space.n
            t[k] = a
            e[a] = of[index(t)]
        embeddings.append(e)
    return AmalgamModule(M, space, p, tuple(reps), kappa, tuple(embeddings))


# --- comparisons and derived spaces ----------------------------------------------------

def restriction_compare(sub: TupleSpace, sup: TupleSpace, ps: ExchangePartition | None = None,
                        pp: ExchangePartition | None = None) -> str:
    """Compare sub's partition with the restriction of sup's partition."""
    if sub.module is not sup.module or sub.n != sup.n:
        raise AmbientMismatchError("spaces differ in module or arity")
    for a, b in zip(sub.factors, sup.factors):
        if a.mask & ~b.mask:
            raise ContainmentError("sub factors must lie inside super factors")
    ps = ps or exchange_partition(sub)
    pp = pp or exchange_partition(sup)
    forward: dict[int, int] = {}
    backward: dict[int, int] = {}
    coincide = True
    for k, t in enumerate(sub.tuples()):
        rs, rp = ps.root[k], pp.class_of(t)
        if forward.setdefault(rs, rp) != rp:
            raise SamodError("sub partition is coarser than the restricted one")
        if backward.setdefault(rp, rs) != rs:
            coincide = False
    return "coincide" if coincide else "strictly-finer"


def contract(space: TupleSpace, blocks: Sequence[Sequence[int]]) -> TupleSpace:
    """Replace the factors by the block sums A_J = sum of A_i over i in J."""
    flat = sorted(i for b in blocks for i in b)
    if flat != list(range(space.n)) or any(not b for b in blocks):
        raise PreconditionError("blocks must partition the factor indices")
    return TupleSpace([sum_all([space.factors[i] for i in b]) for b in blocks])


def permute(space: TupleSpace, perm: Sequence[int]) -> TupleSpace:
    if sorted(perm) != list(range(space.n)):
        raise PreconditionError("not a permutation")
    return TupleSpace([space.factors[i] for i in perm])


def transport(phi: ModuleMap, space: TupleSpace) -> TupleSpace:
    """The space of preimages phi^-1(A_i) in the domain of phi."""
    if phi.codomain is not space.module:
        raise AmbientMismatchError("phi must land in the space's module")
    if validate_homomorphism(phi):
        raise NotHomomorphismError("phi is not a homomorphism")
    W = phi.domain
    cls = SubmoduleSet if space.is_module_space() else ElementSet
    return TupleSpace([cls(W, phi.preimage_mask(A.mask)) for A in space.factors])


def transport_report(phi: ModuleMap, space: TupleSpace) -> dict:
    """Check forward transfer of equivalence, and the converse plus AM transfer
    when phi is injective on the preimage of the sum and onto each factor."""
    pre = transport(phi, space)
    pp, pv = exchange_partition(pre), exchange_partition(space)
    f = phi.mapping
    img = {k: pv.class_of(tuple(f[x] for x in t)) for k, t in enumerate(pre.tuples())}
    forward_ok = all(img[k] == img[pp.root[k]] for k in range(pre.size))
    total = space.sum_set().mask
    dom = bits(phi.preimage_mask(total))
    injective = len({f[x] for x in dom}) == len(dom)
    onto = all(phi.image_mask(B.mask) == A.mask for A, B in zip(space.factors, pre.factors))
    out = {"forward": forward_ok, "injective": injective, "onto": onto, "converse": None, "am_transfer": None}
    if injective and onto:
        by_img: dict[int, int] = {}
        converse = True
        for k in range(pre.size):
            r = pp.root[k]
            if by_img.setdefault(img[k], r) != r:
                converse = False
        out["converse"] = converse
        out["am_transfer"] = bool(has_amalgamation(space, pv)) == bool(has_amalgamation(pre, pp))
    return out
