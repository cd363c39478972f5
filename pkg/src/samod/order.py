"""Quasiorders induced by submodules, coset orders, fix sets, the upper-bound
quotient and the C / C̄ / C̄_ω family of SA-submonoids."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import FiniteModule, Monoid, SemiringTable, is_lzs
from .errors import NotAddClosedError, NotDOrderedError, NotStableError, SamodError
from .lattice import ElementSet, bits, is_add_closed, is_sa, mask_of


def _mask(D) -> int:
    return D.mask if isinstance(D, ElementSet) else int(D)


@dataclass(frozen=True, eq=False)
class QuasiOrder:
    """A reflexive transitive relation stored as upsets: ``up[x]`` is the mask of y with x ≤ y."""

    module: Monoid
    up: tuple[int, ...]

    def leq(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def downset(self, y: int) -> int:
        return mask_of(x for x in range(len(self.up)) if self.up[x] >> y & 1)

    def is_antisymmetric(self) -> bool:
        return all(not (self.up[y] >> x & 1) for x in range(len(self.up)) for y in bits(self.up[x]) if y != x)

    def is_transitive(self) -> bool:
        up = self.up
        return all(up[y] & ~up[x] == 0 for x in range(len(up)) for y in bits(up[x]))

    def matrix(self) -> list[list[int]]:
        n = len(self.up)
        return [[self.up[x] >> y & 1 for y in range(n)] for x in range(n)]

    def equivalence_classes(self) -> list[list[int]]:
        """Classes of the symmetric core, ordered by least member."""
        n = len(self.up)
        seen, out = 0, []
        for x in range(n):
            if seen >> x & 1:
                continue
            cls = [y for y in range(n) if self.leq(x, y) and self.leq(y, x)]
            out.append(cls)
            seen |= mask_of(cls)
        return out


def d_quasiorder(V: Monoid, D) -> QuasiOrder:
    """x ≤_D y iff x + d = y for some d in D."""
    add, d = V.add, _mask(D)
    ds = bits(d)
    up = tuple(mask_of(add[x][e] for e in ds) for x in range(V.size))
    q = QuasiOrder(V, up)
    if not q.is_transitive():
        raise SamodError("D-relation is not transitive; D must be a submonoid")
    return q


def leq_v(V: Monoid) -> QuasiOrder:
    """The natural quasiorder x ≤_V y iff x + z = y for some z."""
    return d_quasiorder(V, V.full_mask)


def is_d_ordered(V: Monoid, D) -> bool:
    return d_quasiorder(V, D).is_antisymmetric()


def is_upper_bound(V: Monoid) -> bool:
    return leq_v(V).is_antisymmetric()


def _require_d_ordered(V, D) -> None:
    if not is_d_ordered(V, D):
        raise NotDOrderedError("the D-quasiorder is not antisymmetric")


def _coset_mask(V: Monoid, x: int, d: int) -> int:
    return mask_of(V.add[x][e] for e in bits(d))


def coset_order(V: Monoid, D) -> QuasiOrder:
    """x ⪯_D y iff y + D ⊆ x + D; only defined when V is D-ordered."""
    _require_d_ordered(V, D)
    d = _mask(D)
    cos = [_coset_mask(V, x, d) for x in range(V.size)]
    up = tuple(mask_of(y for y in range(V.size) if cos[y] & ~cos[x] == 0) for x in range(V.size))
    return QuasiOrder(V, up)


def is_stable(X, D) -> bool:
    """X + D ⊆ X."""
    V, x, d = X.module, X.mask, _mask(D)
    return all(x >> V.add[a][e] & 1 for a in bits(x) for e in bits(d))


def fix_set(X: ElementSet, D) -> ElementSet:
    """{x in X | x + d = x for every d in D}."""
    if not is_stable(X, D):
        raise NotStableError("X + D is not inside X")
    V, d = X.module, bits(_mask(D))
    return ElementSet(V, mask_of(x for x in X if all(V.add[x][e] == x for e in d)))


def maximal_elements(order: QuasiOrder, mask: int) -> int:
    """Elements of ``mask`` with no strictly larger element in ``mask``."""
    out = 0
    for x in bits(mask):
        if not any(y != x and not order.leq(y, x) for y in bits(order.up[x] & mask)):
            out |= 1 << x
    return out


def minimal_cosets(U: ElementSet, D) -> list[ElementSet]:
    """The minimal cosets x + D for x in U, all of which are singletons over Fix_D(U)."""
    V = U.module
    order = coset_order(V, D)
    top = maximal_elements(order, U.mask)
    cosets = [ElementSet(V, _coset_mask(V, x, _mask(D))) for x in bits(top)]
    fix = fix_set(U, D).mask if is_stable(U, D) else None
    for x, c in zip(bits(top), cosets):
        if c.mask != 1 << x:
            raise SamodError(f"minimal coset over {V.labels[x]} is not a singleton")
    if fix is not None and fix != top:
        raise SamodError("maximal elements differ from the fix set")
    return cosets


def d_isolated(V: Monoid, D) -> ElementSet:
    """v with v + D = {v} and no x ≠ v, d in D with x + d = v."""
    add, ds = V.add, bits(_mask(D))
    out = 0
    for v in range(V.size):
        if any(add[v][e] != v for e in ds):
            continue
        if any(add[x][e] == v for x in range(V.size) if x != v for e in ds):
            continue
        out |= 1 << v
    return ElementSet(V, out)


def d_max(V: Monoid, D) -> int | None:
    """The greatest element of D under ≤_D, when there is one."""
    q = d_quasiorder(V, D)
    d = _mask(D)
    tops = [x for x in bits(d) if all(q.leq(y, x) for y in bits(d))]
    return tops[0] if len(tops) == 1 else None


# --- the upper-bound quotient ------------------------------------------------------------


def congruence(V: Monoid) -> tuple[QuasiOrder, list[list[int]]]:
    """x ≡ y iff x ≤_V y and y ≤_V x; returns the relation and its classes."""
    q = leq_v(V)
    classes = q.equivalence_classes()
    cls_of = {}
    for i, c in enumerate(classes):
        for x in c:
            cls_of[x] = i
    up = tuple(mask_of(c for c in classes[cls_of[x]]) for x in range(V.size))
    return QuasiOrder(V, up), classes


def _class_map(V: Monoid) -> tuple[tuple[int, ...], list[list[int]]]:
    _, classes = congruence(V)
    cmap = [0] * V.size
    for i, c in enumerate(classes):
        for x in c:
            cmap[x] = i
    return tuple(cmap), classes


def _quotient_table(table, cmap, classes):
    return [[cmap[table[c[0]][e[0]]] for e in classes] for c in classes]


@dataclass(frozen=True, eq=False)
class QuotientRing:
    source: SemiringTable
    class_of: tuple[int, ...]
    ring: SemiringTable


@dataclass(frozen=True, eq=False)
class QuotientModule:
    source: FiniteModule
    class_of: tuple[int, ...]
    module: FiniteModule
    ring_quotient: QuotientRing

    def project_mask(self, mask: int) -> int:
        return mask_of(self.class_of[x] for x in bits(mask))

    def preimage_mask(self, mask: int) -> int:
        return mask_of(x for x in range(self.source.size) if mask >> self.class_of[x] & 1)


def quotient_ring(R: SemiringTable) -> QuotientRing:
    cmap, classes = _class_map(R)
    labels = [R.labels[c[0]] for c in classes]
    Rb = SemiringTable(len(classes), _quotient_table(R.add, cmap, classes),
                       _quotient_table(R.mul, cmap, classes), cmap[R.zero], cmap[R.one],
                       labels, name=f"QUOT({R.name})")
    return QuotientRing(R, cmap, Rb)


def quotient(V: FiniteModule) -> QuotientModule:
    """V / ≡_V as a module over R / ≡_R, with ā·v̄ = class of a·v."""
    rq = quotient_ring(V.ring)
    Rb = rq.ring
    cmap, classes = _class_map(V)
    rclasses = [[a for a in range(V.ring.size) if rq.class_of[a] == i] for i in range(Rb.size)]
    add = _quotient_table(V.add, cmap, classes)
    act = [[cmap[V.act[rc[0]][c[0]]] for c in classes] for rc in rclasses]
    for rc in rclasses:
        for a in rc:
            for x in range(V.size):
                if cmap[V.act[a][x]] != act[rq.class_of[a]][cmap[x]]:
                    raise SamodError("scalar action is not compatible with the congruence")
    labels = [V.labels[c[0]] for c in classes]
    Vb = FiniteModule(Rb, len(classes), add, act, cmap[V.zero], labels, name=f"QUOT({V.name})")
    return QuotientModule(V, cmap, Vb, rq)


def sa_through_quotient(q: QuotientModule, S: ElementSet) -> tuple[bool, bool]:
    """(S is SA in V, S is a union of classes and its image is SA in the quotient)."""
    lhs = is_sa(S)
    img = q.project_mask(S.mask)
    union = q.preimage_mask(img) == S.mask
    rhs = union and is_sa(ElementSet(q.module, img))
    return lhs, rhs


# --- C, C̄ and relatives -------------------------------------------------------------------


def c_of(V: Monoid, x: int) -> ElementSet:
    """C(x) = {v | v + x = x}."""
    return ElementSet(V, mask_of(v for v in range(V.size) if V.add[v][x] == x))


def cbar_of(V: Monoid, x: int, order: QuasiOrder | None = None) -> ElementSet:
    """C̄(x) = {u | u + x ≤_V x}."""
    q = order or leq_v(V)
    return ElementSet(V, mask_of(u for u in range(V.size) if q.leq(V.add[u][x], x)))


def c_omega(V: Monoid, x: int, bar: bool = True) -> ElementSet:
    """Union of C̄(nx) (or C(nx)) over all n ≥ 1."""
    q = leq_v(V) if bar else None
    m = 0
    for y in V.multiples(x):
        m |= (cbar_of(V, y, q) if bar else c_of(V, y)).mask
    return ElementSet(V, m)


def cbar_of_set(V: Monoid, S: ElementSet) -> ElementSet:
    """C̄(S) = union of C̄(s) over s in S, for S closed under addition."""
    if not is_add_closed(V, S.mask):
        raise NotAddClosedError("S must be closed under addition")
    q = leq_v(V)
    m = 0
    for s in S:
        m |= cbar_of(V, s, q).mask
    return ElementSet(V, m)


def dominated(q: QuasiOrder, small: int, big: int) -> bool:
    """Every element of ``small`` lies below some element of ``big``."""
    return all(q.up[s] & big for s in bits(small))


def cofinal(q: QuasiOrder, S: int, T: int) -> bool:
    return dominated(q, S, T) and dominated(q, T, S)


def multiples_mask(V: Monoid, x: int) -> int:
    return mask_of(V.multiples(x))


def arch_class(V: Monoid, x: int, order: QuasiOrder | None = None) -> ElementSet:
    """{y | x ≤_V ny and y ≤_V mx for some n, m ≥ 1}."""
    q = order or leq_v(V)
    mx = multiples_mask(V, x)
    out = 0
    for y in range(V.size):
        if q.up[x] & multiples_mask(V, y) and dominated(q, 1 << y, mx):
            out |= 1 << y
    return ElementSet(V, out)


def arch_partition(V: Monoid) -> list[list[int]]:
    q = leq_v(V)
    seen, out = 0, []
    for x in range(V.size):
        if seen >> x & 1:
            continue
        cls = arch_class(V, x, q)
        out.append(cls.elements)
        seen |= cls.mask
    return out


def w_of(V: Monoid, x: int) -> ElementSet:
    """W(x) = {y | y ≤_V nx for some n ≥ 1}: the convex hull of the multiples of x."""
    q = leq_v(V)
    return ElementSet(V, q_downset(q, multiples_mask(V, x)))


def q_downset(q: QuasiOrder, mask: int) -> int:
    return mask_of(y for y in range(len(q.up)) if q.up[y] & mask)


# --- scalar stabilisers and o_R ---------------------------------------------------------------


def scalar_stabilizer(V: FiniteModule, mask: int) -> int:
    """{λ in R | λ·X ⊆ X} for X given by ``mask``."""
    act = V.act
    return mask_of(lam for lam in range(V.ring.size) if all(mask >> act[lam][x] & 1 for x in bits(mask)))


def r_sub_x(V: FiniteModule, x: int, bar: bool = False) -> int:
    """R_x = {λ | λ·C(x) ⊆ C(x)} (C̄(x) when ``bar``)."""
    c = cbar_of(V, x) if bar else c_of(V, x)
    return scalar_stabilizer(V, c.mask)


def is_subsemiring(R: SemiringTable, mask: int) -> bool:
    if not (mask >> R.zero & 1 and mask >> R.one & 1):
        return False
    xs = bits(mask)
    return all(mask >> R.add[a][b] & 1 and mask >> R.mul[a][b] & 1 for a in xs for b in xs)


def is_convex(q: QuasiOrder, mask: int) -> bool:
    """a ≤ λ ≤ b with a, b in the set forces λ in the set."""
    between = 0
    for a in bits(mask):
        for b in bits(mask):
            between |= q.up[a] & q.downset(b)
    return between & ~mask == 0


def naturals_image(R: SemiringTable) -> int:
    """N₀·1_R."""
    return mask_of([R.zero] + R.multiples(R.one))


def o_ring(R: SemiringTable) -> int:
    """Convex hull of N₀·1_R under ≤_R."""
    q = leq_v(R)
    n = naturals_image(R)
    out = 0
    for a in bits(n):
        for b in bits(n):
            out |= q.up[a] & q.downset(b)
    if not is_subsemiring(R, out) or not is_sa(ElementSet(R, out)):
        raise SamodError("o_R is not an SA-subsemiring")
    return out


def is_o_closed(V: FiniteModule, mask: int, o_mask: int | None = None) -> bool:
    """Closed under scalars from o_R."""
    o = o_ring(V.ring) if o_mask is None else o_mask
    return all(mask >> V.act[lam][x] & 1 for lam in bits(o) for x in bits(mask))


def upper_bound_matches_lzs(V: Monoid) -> bool:
    return is_upper_bound(V) == is_lzs(V)

