"""Subsets and submodules as bitmasks, with generation, the SA predicate and
the closure operators built from access to a submodule D.

A set is a pair (module, mask).  :class:`ElementSet` carries no closure
promise; :class:`SubmoduleSet` is only produced by code that has checked (or
constructed) closure under addition and scalar action.
"""

from __future__ import annotations

import re
import weakref
from typing import Iterable, Iterator

from .algebra import FiniteModule, Monoid
from .errors import AmbientMismatchError, CapExceededError, ContainmentError, PreconditionError

SUBSET_SCAN_CAP = 16
ENUMERATION_CAP = 64


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(xs: Iterable[int]) -> int:
    m = 0
    for x in xs:
        m |= 1 << x
    return m


class ElementSet:
    """A subset of a module's elements, stored as a bitmask."""

    __slots__ = ("module", "mask")

    def __init__(self, module: Monoid, mask: int):
        if mask < 0 or mask >> module.size:
            raise ValueError("mask has bits outside the module")
        self.module = module
        self.mask = mask

    @classmethod
    def of(cls, module: Monoid, xs: Iterable[int]):
        return cls(module, mask_of(xs))

    @property
    def elements(self) -> list[int]:
        return bits(self.mask)

    def __iter__(self) -> Iterator[int]:
        return iter(bits(self.mask))

    def __len__(self) -> int:
        return popcount(self.mask)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def __eq__(self, other):
        if not isinstance(other, ElementSet):
            return NotImplemented
        return self.module is other.module and self.mask == other.mask

    def __hash__(self):
        return hash((id(self.module), self.mask))

    def __le__(self, other: "ElementSet") -> bool:
        _same(self, other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "ElementSet") -> bool:
        return self <= other and self.mask != other.mask

    def __or__(self, other: "ElementSet") -> "ElementSet":
        _same(self, other)
        return ElementSet(self.module, self.mask | other.mask)

    def __and__(self, other: "ElementSet") -> "ElementSet":
        _same(self, other)
        return ElementSet(self.module, self.mask & other.mask)

    def __sub__(self, other: "ElementSet") -> "ElementSet":
        _same(self, other)
        return ElementSet(self.module, self.mask & ~other.mask)

    def labels(self) -> list[str]:
        return [self.module.labels[x] for x in self]

    def __str__(self):
        return format_set(self.module, self.mask)

    def __repr__(self):
        return f"{type(self).__name__}({self})"

    def as_elements(self) -> "ElementSet":
        return ElementSet(self.module, self.mask)


class SubmoduleSet(ElementSet):
    """A subset known to contain zero and be closed under + and scalars."""

    __slots__ = ()


def _same(a: ElementSet, b: ElementSet) -> None:
    if a.module is not b.module:
        raise AmbientMismatchError("sets live in different modules")


def _mask(s) -> int:
    return s.mask if isinstance(s, ElementSet) else s


def _as_mask(V: Monoid, gens) -> int:
    if isinstance(gens, ElementSet):
        if gens.module is not V:
            raise AmbientMismatchError("generators live in a different module")
        return gens.mask
    if isinstance(gens, int):
        return gens
    return mask_of(gens)


# --- parsing and printing --------------------------------------------------

def parse_set(V: Monoid, text: str) -> int:
    """Parse ``{a,b,...}`` (labels or indices) into a mask.  ``{}`` and ``∅`` are empty."""
    t = text.strip()
    if t in ("∅", "{}", ""):
        return 0
    if not (t.startswith("{") and t.endswith("}")):
        raise ValueError(f"set literal must be braced: {text!r}")
    body = t[1:-1].strip()
    if not body:
        return 0
    m = 0
    for tok in re.split(r"\s*,\s*", body):
        try:
            m |= 1 << V.index(tok)
        except KeyError as exc:
            raise ValueError(str(exc)) from None
    return m


def format_set(V: Monoid, mask: int) -> str:
    return "{" + ",".join(V.labels[x] for x in bits(mask)) + "}"


# --- closure ------------------------------------------------------------------

def _closure(V: Monoid, mask: int, scalars: bool) -> int:
    add = V.add
    acts = V.act if scalars and isinstance(V, FiniteModule) else ()
    mask |= 1 << V.zero
    todo = bits(mask)
    members = list(todo)
    while todo:
        x = todo.pop()
        new = []
        for row in acts:
            new.append(row[x])
        for y in members:
            new.append(add[x][y])
        for z in new:
            if not mask >> z & 1:
                mask |= 1 << z
                members.append(z)
                todo.append(z)
    return mask


def generate(V: FiniteModule, gens=0) -> SubmoduleSet:
    """Least submodule of V containing ``gens`` (a mask, iterable or ElementSet)."""
    return SubmoduleSet(V, _closure(V, _as_mask(V, gens), True))


def generate_submonoid(V: Monoid, gens=0) -> ElementSet:
    """Least additive submonoid of V containing ``gens``."""
    return ElementSet(V, _closure(V, _as_mask(V, gens), False))


def is_add_closed(V: Monoid, mask: int) -> bool:
    add = V.add
    xs = bits(mask)
    return all(mask >> add[x][y] & 1 for i, x in enumerate(xs) for y in xs[i:])


def is_submonoid(V: Monoid, mask: int) -> bool:
    return bool(mask >> V.zero & 1) and is_add_closed(V, mask)


def is_scalar_closed(V: FiniteModule, mask: int) -> bool:
    return all(mask >> row[x] & 1 for row in V.act for x in bits(mask))


def is_submodule(V: FiniteModule, mask: int) -> bool:
    return is_submonoid(V, mask) and is_scalar_closed(V, mask)


def as_submodule(V: FiniteModule, s) -> SubmoduleSet:
    """Check closure and wrap; raises PreconditionError when not a submodule."""
    m = _as_mask(V, s)
    if not is_submodule(V, m):
        raise PreconditionError(f"{format_set(V, m)} is not a submodule")
    return SubmoduleSet(V, m)


def whole(V: Monoid) -> SubmoduleSet:
    return SubmoduleSet(V, V.full_mask)


def zero_set(V: Monoid) -> SubmoduleSet:
    return SubmoduleSet(V, 1 << V.zero)


# --- enumeration ----------------------------------------------------------------

_ENUM_CACHE: "weakref.WeakKeyDictionary[Monoid, tuple]" = weakref.WeakKeyDictionary()


def _subset_scan(V: FiniteModule) -> list[int]:
    z = 1 << V.zero
    others = [x for x in range(V.size) if x != V.zero]
    out = []
    for k in range(1 << len(others)):
        m = z
        for i, x in enumerate(others):
            if k >> i & 1:
                m |= 1 << x
        if is_submodule(V, m):
            out.append(m)
    return out


def _closure_search(V: FiniteModule, cap: int) -> list[int]:
    start = generate(V).mask
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for x in range(V.size):
                if not m >> x & 1:
                    g = _closure(V, m | 1 << x, True)
                    if g not in seen:
                        seen.add(g)
                        nxt.append(g)
                        if len(seen) > cap:
                            raise CapExceededError(f"more than {cap} submodules")
        frontier = nxt
    return list(seen)


def enumerate_submodules(V: FiniteModule, method: str = "auto",
                         subset_cap: int = SUBSET_SCAN_CAP,
                         count_cap: int = 1 << 16) -> list[SubmoduleSet]:
    """All submodules of V sorted by (size, mask).

    ``method`` is ``"scan"`` (every subset containing zero), ``"closure"``
    (one-generator-at-a-time closure search) or ``"auto"`` (scan up to
    ``subset_cap`` elements).
    """
    if V.size > ENUMERATION_CAP:
        raise CapExceededError(f"module of size {V.size} is above the enumeration cap")
    if method == "auto":
        cached = _ENUM_CACHE.get(V)
        if cached is None:
            masks = _subset_scan(V) if V.size <= subset_cap else _closure_search(V, count_cap)
            cached = tuple(sorted(masks, key=lambda m: (popcount(m), m)))
            _ENUM_CACHE[V] = cached
        masks = cached
    elif method == "scan":
        if V.size > 20:
            raise CapExceededError("subset scan is limited to 20 elements")
        masks = sorted(_subset_scan(V), key=lambda m: (popcount(m), m))
    elif method == "closure":
        masks = sorted(_closure_search(V, count_cap), key=lambda m: (popcount(m), m))
    else:
        raise ValueError(f"unknown method {method!r}")
    return [SubmoduleSet(V, m) for m in masks]


# --- lattice operations ----------------------------------------------------------

def set_sum(A: ElementSet, B: ElementSet) -> ElementSet:
    """Elementwise sums {a + b}."""
    _same(A, B)
    V, add = A.module, A.module.add
    m = 0
    for a in A:
        for b in B:
            m |= 1 << add[a][b]
    return ElementSet(V, m)


def sum_(A: SubmoduleSet, B: SubmoduleSet) -> SubmoduleSet:
    """A + B; for submodules the elementwise sums are already closed."""
    s = set_sum(A, B)
    return SubmoduleSet(s.module, s.mask)


def sum_all(sets: list[ElementSet]) -> ElementSet:
    out = sets[0]
    for s in sets[1:]:
        out = set_sum(out, s)
    if all(isinstance(s, SubmoduleSet) for s in sets):
        return SubmoduleSet(out.module, out.mask)
    return out


def intersect(A: SubmoduleSet, B: SubmoduleSet) -> SubmoduleSet:
    _same(A, B)
    return SubmoduleSet(A.module, A.mask & B.mask)


def coset(x: int, D: ElementSet) -> ElementSet:
    """x + D."""
    add = D.module.add
    return ElementSet(D.module, mask_of(add[x][d] for d in D))


def scalar_image(lam: int, X: ElementSet) -> ElementSet:
    V = X.module
    return ElementSet(V, mask_of(V.act[lam][x] for x in X))


def cyclic(V: FiniteModule, x: int) -> SubmoduleSet:
    """Rx = {lam x}; for a module this is already a submodule."""
    return SubmoduleSet(V, mask_of(V.act[lam][x] for lam in range(V.ring.size)))


# --- summand absorption -------------------------------------------------------------

def sa_witness(W: ElementSet, ambient: ElementSet | None = None):
    """First pair (x, y) of ambient elements with x + y in W but x or y outside W."""
    V = W.module
    amb = ambient.mask if ambient is not None else V.full_mask
    if ambient is not None:
        _same(W, ambient)
    if W.mask & ~amb:
        raise ContainmentError(f"{W} is not inside the ambient set")
    add, w = V.add, W.mask
    xs = bits(amb)
    for x in xs:
        row = add[x]
        for y in xs:
            if w >> row[y] & 1 and not (w >> x & 1 and w >> y & 1):
                return (x, y)
    return None


def is_sa(W: ElementSet, ambient: ElementSet | None = None) -> bool:
    """x + y in W with x, y in the ambient forces x, y in W."""
    return sa_witness(W, ambient) is None


def enumerate_sa(A: SubmoduleSet, C: SubmoduleSet, ambient: SubmoduleSet | None = None) -> list[SubmoduleSet]:
    """SA-submodules W of A with C inside W.

    SA is judged in A, or in ``ambient`` when given (which realises the
    variant where absorption is demanded inside a bigger module).
    """
    _same(A, C)
    if C.mask & ~A.mask:
        raise ContainmentError("C must lie inside A")
    amb = ambient if ambient is not None else A
    out = []
    for W in enumerate_submodules(A.module):
        if W.mask & ~A.mask or C.mask & ~W.mask:
            continue
        if is_sa(W, amb):
            out.append(W)
    return out


def submodules_between(lo: ElementSet, hi: ElementSet) -> list[SubmoduleSet]:
    """Submodules W with lo inside W inside hi."""
    return [W for W in enumerate_submodules(lo.module)
            if lo.mask & ~W.mask == 0 and W.mask & ~hi.mask == 0]


# --- subtractive submodules and access sets -------------------------------------------

def subtractive_witness(T: ElementSet, ambient: ElementSet | None = None):
    """First x in the ambient with x + t1 = t2 for t1, t2 in T but x outside T."""
    V = T.module
    amb = ambient.mask if ambient is not None else V.full_mask
    add, t = V.add, T.mask
    for x in bits(amb & ~t):
        if any(t >> add[x][s] & 1 for s in T):
            return x
    return None


def is_subtractive(T: ElementSet, ambient: ElementSet | None = None) -> bool:
    return subtractive_witness(T, ambient) is None


def subtractive_hull(D: SubmoduleSet) -> SubmoduleSet:
    """{x | (x + D) meets D}: the least subtractive submodule containing D."""
    V, add, d = D.module, D.module.add, D.mask
    m = mask_of(x for x in range(V.size) if any(d >> add[x][e] & 1 for e in D))
    return SubmoduleSet(V, m)


def nac(D: ElementSet, mode: str = "D") -> ElementSet:
    """Elements without access to D.

    mode ``"D"``: {x | (x + D) misses D};  mode ``"V"``: {x | (x + V) misses D}.
    """
    V, add, d = D.module, D.module.add, D.mask
    if mode == "D":
        probe = D.elements
    elif mode == "V":
        probe = range(V.size)
    else:
        raise ValueError("mode must be 'D' or 'V'")
    return ElementSet(V, mask_of(x for x in range(V.size) if not any(d >> add[x][e] & 1 for e in probe)))


def sa_closure(D: ElementSet) -> SubmoduleSet:
    """{x | x + v in D for some v}: the least SA-submodule containing D."""
    return SubmoduleSet(D.module, D.module.full_mask & ~nac(D, "V").mask)


def downset(D: ElementSet, ambient: ElementSet | None = None) -> ElementSet:
    """{x in ambient | x + a in D for some a in ambient}."""
    V, add, d = D.module, D.module.add, D.mask
    amb = ambient.elements if ambient is not None else range(V.size)
    return ElementSet(V, mask_of(x for x in amb if any(d >> add[x][a] & 1 for a in amb)))
