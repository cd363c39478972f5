"""Finite semirings, finite modules and their axiom checks.

Elements are dense indices ``0..size-1`` and every operation is a row-major
table of indices.  Objects are immutable once built; equality of modules is
identity, so a module can key caches cheaply.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .errors import MalformedTableError, NotHomomorphismError

DEFAULT_ELEMENT_CAP = 64


def _freeze_table(table) -> tuple:
    return tuple(tuple(row) for row in table)


def _default_labels(size: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(size))


class Monoid:
    """A finite commutative additive monoid given by its Cayley table."""

    __slots__ = ("size", "add", "zero", "labels", "name", "_index", "__weakref__")

    def __init__(self, size: int, add, zero: int = 0, labels=None, name: str = ""):
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "add", _freeze_table(add))
        object.__setattr__(self, "zero", zero)
        labels = tuple(labels) if labels is not None else _default_labels(size)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})

    def __setattr__(self, key, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __repr__(self):
        return f"{type(self).__name__}({self.name or '?'}, size={self.size})"

    def __getstate__(self):
        slots = [s for c in type(self).__mro__ for s in getattr(c, "__slots__", ()) if s != "__weakref__"]
        return {s: getattr(self, s) for s in slots}

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def label(self, x: int) -> str:
        return self.labels[x]

    def index(self, token: str) -> int:
        """Resolve an element label (or a bare integer index) to an index."""
        token = token.strip()
        if token in self._index:
            return self._index[token]
        alt = token.replace("ν", "v")
        if alt in self._index:
            return self._index[alt]
        if token.isdigit() and int(token) < self.size:
            return int(token)
        raise KeyError(f"no element {token!r} in {self.name or 'module'}")

    def sum_of(self, xs: Iterable[int]) -> int:
        s = self.zero
        add = self.add
        for x in xs:
            s = add[s][x]
        return s

    def multiples(self, x: int) -> list[int]:
        """Distinct values of n*x for n >= 1, in order of first appearance.

        The sequence n*x is eventually periodic; the whole orbit is returned so
        that quantifiers over all n stay exact.
        """
        seen = []
        seen_set = set()
        y = x
        while y not in seen_set:
            seen.append(y)
            seen_set.add(y)
            y = self.add[y][x]
        return seen

    def check_structure(self) -> None:
        n = self.size
        if n < 1:
            raise MalformedTableError("size must be positive")
        _check_square(self.add, n, "add")
        if not 0 <= self.zero < n:
            raise MalformedTableError(f"zero index {self.zero} out of range")
        if len(self.labels) != n:
            raise MalformedTableError("label count differs from size")


class SemiringTable(Monoid):
    """A finite semiring: additive monoid plus a multiplication table."""

    __slots__ = ("mul", "one")

    def __init__(self, size, add, mul, zero=0, one=1, labels=None, name=""):
        super().__init__(size, add, zero, labels, name)
        object.__setattr__(self, "mul", _freeze_table(mul))
        object.__setattr__(self, "one", one if size > 1 else zero)

    @property
    def is_commutative(self) -> bool:
        m = self.mul
        return all(m[a][b] == m[b][a] for a in range(self.size) for b in range(a))

    def units(self) -> list[int]:
        """Elements with a two-sided multiplicative inverse."""
        m, one = self.mul, self.one
        r = range(self.size)
        return [a for a in r if any(m[a][b] == one and m[b][a] == one for b in r)]

    def check_structure(self) -> None:
        super().check_structure()
        _check_square(self.mul, self.size, "mul")
        if not 0 <= self.one < self.size:
            raise MalformedTableError(f"one index {self.one} out of range")


class FiniteModule(Monoid):
    """A finite left module over a :class:`SemiringTable`.

    ``act[lam][x]`` is the scalar multiple ``lam * x``.
    """

    __slots__ = ("ring", "act")

    def __init__(self, ring: SemiringTable, size, add, act, zero=0, labels=None, name=""):
        super().__init__(size, add, zero, labels, name)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "act", _freeze_table(act))

    def check_structure(self) -> None:
        super().check_structure()
        self.ring.check_structure()
        act = self.act
        if len(act) != self.ring.size:
            raise MalformedTableError("act must have one row per ring element")
        for row in act:
            if len(row) != self.size:
                raise MalformedTableError("ragged act table")
            for v in row:
                if not (isinstance(v, int) and 0 <= v < self.size):
                    raise MalformedTableError(f"act entry {v!r} out of range")


def _check_square(table, n: int, what: str) -> None:
    if len(table) != n:
        raise MalformedTableError(f"{what} table has {len(table)} rows, expected {n}")
    for row in table:
        if len(row) != n:
            raise MalformedTableError(f"ragged {what} table")
        for v in row:
            if not (isinstance(v, int) and 0 <= v < n):
                raise MalformedTableError(f"{what} entry {v!r} out of range")


@dataclass
class ValidationReport:
    violations: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def names(self) -> list[str]:
        return [name for name, _ in self.violations]

    def witness(self, name: str):
        for n, w in self.violations:
            if n == name:
                return w
        return None

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [[n, list(w)] for n, w in self.violations]}


def _first(pred, space) -> tuple | None:
    for w in space:
        if not pred(*w):
            return tuple(w)
    return None


def _monoid_violations(m: Monoid) -> list:
    n, a, z = m.size, m.add, m.zero
    r = range(n)
    checks = [
        ("add-associativity", lambda x, y, w: a[a[x][y]][w] == a[x][a[y][w]], product(r, r, r)),
        ("add-commutativity", lambda x, y: a[x][y] == a[y][x], product(r, r)),
        ("add-identity", lambda x: a[x][z] == x == a[z][x], product(r)),
    ]
    out = []
    for name, pred, space in checks:
        w = _first(pred, space)
        if w is not None:
            out.append((name, w))
    return out


def validate_monoid(m: Monoid) -> ValidationReport:
    m.check_structure()
    return ValidationReport(_monoid_violations(m))


def validate_semiring(t: SemiringTable) -> ValidationReport:
    """Exhaustively check the semiring axioms; each entry has the first failing witness."""
    t.check_structure()
    out = _monoid_violations(t)
    n, a, m, z, one = t.size, t.add, t.mul, t.zero, t.one
    r = range(n)
    checks = [
        ("mul-associativity", lambda x, y, w: m[m[x][y]][w] == m[x][m[y][w]], product(r, r, r)),
        ("mul-identity", lambda x: m[one][x] == x == m[x][one], product(r)),
        ("left-distributivity", lambda x, y, w: m[x][a[y][w]] == a[m[x][y]][m[x][w]], product(r, r, r)),
        ("right-distributivity", lambda x, y, w: m[a[y][w]][x] == a[m[y][x]][m[w][x]], product(r, r, r)),
        ("zero-annihilation", lambda x: m[z][x] == z == m[x][z], product(r)),
    ]
    for name, pred, space in checks:
        w = _first(pred, space)
        if w is not None:
            out.append((name, w))
    if n > 1 and z == one:
        out.append(("zero-distinct-from-one", (z,)))
    return ValidationReport(out)


def validate_module(v: FiniteModule) -> ValidationReport:
    """Exhaustively check the module axioms (the ring itself is assumed validated)."""
    v.check_structure()
    out = _monoid_violations(v)
    R = v.ring
    ra, rm = R.add, R.mul
    a, act, z = v.add, v.act, v.zero
    rr, vr = range(R.size), range(v.size)
    checks = [
        ("unit-action", lambda x: act[R.one][x] == x, product(vr)),
        ("action-additive-in-vector", lambda l, x, y: act[l][a[x][y]] == a[act[l][x]][act[l][y]], product(rr, vr, vr)),
        ("action-additive-in-scalar", lambda l, k, x: act[ra[l][k]][x] == a[act[l][x]][act[k][x]], product(rr, rr, vr)),
        ("action-associative", lambda l, k, x: act[rm[l][k]][x] == act[l][act[k][x]], product(rr, rr, vr)),
        ("zero-scalar", lambda x: act[R.zero][x] == z, product(vr)),
        ("zero-vector", lambda l: act[l][z] == z, product(rr)),
    ]
    for name, pred, space in checks:
        w = _first(pred, space)
        if w is not None:
            out.append((name, w))
    return ValidationReport(out)


def is_lzs(m: Monoid) -> bool:
    """True iff no two nonzero elements sum to zero."""
    a, z = m.add, m.zero
    return not any(a[x][y] == z for x in range(m.size) for y in range(m.size) if x != z or y != z)


def semiring_as_module(t: SemiringTable) -> FiniteModule:
    """The semiring viewed as a left module over itself."""
    return FiniteModule(t, t.size, t.add, t.mul, t.zero, t.labels, name=t.name)


# --- module homomorphisms ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """An explicit element map between two modules (or monoids)."""

    domain: Monoid
    codomain: Monoid
    mapping: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def preimage_mask(self, mask: int) -> int:
        out = 0
        for x, y in enumerate(self.mapping):
            if mask >> y & 1:
                out |= 1 << x
        return out

    def image_mask(self, mask: int) -> int:
        out = 0
        for x, y in enumerate(self.mapping):
            if mask >> x & 1:
                out |= 1 << y
        return out


def validate_homomorphism(phi: ModuleMap) -> list[tuple[str, tuple]]:
    """Return the violated homomorphism laws, empty when phi is a homomorphism.

    Scalar compatibility is only checked when both sides are modules over the
    same ring object.
    """
    V, W, f = phi.domain, phi.codomain, phi.mapping
    out = []
    if len(f) != V.size or any(not 0 <= y < W.size for y in f):
        raise NotHomomorphismError("map has wrong length or out-of-range values")
    if f[V.zero] != W.zero:
        out.append(("zero", (V.zero,)))
    for x in range(V.size):
        for y in range(V.size):
            if f[V.add[x][y]] != W.add[f[x]][f[y]]:
                out.append(("additive", (x, y)))
                break
        else:
            continue
        break
    if isinstance(V, FiniteModule) and isinstance(W, FiniteModule):
        if V.ring is not W.ring and V.ring.mul != W.ring.mul:
            out.append(("ring-mismatch", ()))
        else:
            for lam in range(V.ring.size):
                bad = [x for x in range(V.size) if f[V.act[lam][x]] != W.act[lam][f[x]]]
                if bad:
                    out.append(("scalar", (lam, bad[0])))
                    break
    return out


def require_homomorphism(phi: ModuleMap) -> ModuleMap:
    bad = validate_homomorphism(phi)
    if bad:
        raise NotHomomorphismError(f"not a homomorphism: {bad[0]}")
    return phi


def identity_map(V: Monoid) -> ModuleMap:
    return ModuleMap(V, V, tuple(range(V.size)))


def describe(m: Monoid) -> dict:
    """Small JSON-ready summary of a monoid/module."""
    out = {"name": m.name, "size": m.size, "lzs": is_lzs(m)}
    if isinstance(m, FiniteModule):
        out["ring"] = m.ring.name
        out["ring_commutative"] = m.ring.is_commutative
    return out


def labels_of(m: Monoid, xs: Sequence[int]) -> list[str]:
    return [m.labels[x] for x in xs]
