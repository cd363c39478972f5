"""Constructors for the fixture families and a parser for fixture ids.

Accepted ids (nesting allowed)::

    BOOL  CHAIN(k)  NSAT(k)  ZMOD(n)  SUPERTROP(k)
    FREE(R, n)  PRODUCT(V, W)  QUOT(V)  AMALG(V, {..}, {..}, ...)

plus the short aliases B2, C3, C4, NSAT4 and Z2.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import product

from .algebra import (
    DEFAULT_ELEMENT_CAP,
    FiniteModule,
    SemiringTable,
    semiring_as_module,
    validate_module,
    validate_semiring,
)
from .errors import CapExceededError, FixtureError

ALIASES = {
    "B2": "FREE(BOOL,2)",
    "C3": "CHAIN(2)",
    "C4": "CHAIN(3)",
    "NSAT4": "NSAT(3)",
    "Z2": "ZMOD(2)",
}


def _cap(size: int, cap: int) -> None:
    if size > cap:
        raise CapExceededError(f"{size} elements exceeds the element cap {cap}")


@lru_cache(maxsize=None)
def boolean_semiring() -> SemiringTable:
    return SemiringTable(2, [[0, 1], [1, 1]], [[0, 0], [0, 1]], name="BOOL")


def chain(k: int) -> FiniteModule:
    """The chain {0..k} under max, as a module over BOOL."""
    if k < 0:
        raise FixtureError("CHAIN needs k >= 0")
    n = k + 1
    add = [[max(x, y) for y in range(n)] for x in range(n)]
    act = [[0] * n, list(range(n))]
    return FiniteModule(boolean_semiring(), n, add, act, name=f"CHAIN({k})")


def nsat(k: int) -> SemiringTable:
    """Naturals saturated at k: {0..k} with sums and products capped at k."""
    if k < 1:
        raise FixtureError("NSAT needs k >= 1")
    n = k + 1
    add = [[min(x + y, k) for y in range(n)] for x in range(n)]
    mul = [[min(x * y, k) for y in range(n)] for x in range(n)]
    return SemiringTable(n, add, mul, name=f"NSAT({k})")


def zmod(n: int) -> SemiringTable:
    if n < 1:
        raise FixtureError("ZMOD needs n >= 1")
    add = [[(x + y) % n for y in range(n)] for x in range(n)]
    mul = [[(x * y) % n for y in range(n)] for x in range(n)]
    return SemiringTable(n, add, mul, zero=0, one=1 % n, name=f"ZMOD({n})")


def supertropical(k: int) -> SemiringTable:
    """Finite supertropical semiring with tangibles 1..k and ghosts 1v..kv.

    Index 0 is zero, 1..k are tangibles, k+1..2k are ghosts.  Addition keeps
    the higher level and turns equal levels into the ghost of that level.
    Multiplication adds exponents (level - 1); a product is a ghost if either
    factor is, and anything past level k collapses to the top ghost kv.
    """
    if k < 1:
        raise FixtureError("SUPERTROP needs k >= 1")
    n = 2 * k + 1

    def level(x):
        return x if x <= k else x - k

    def ghost(lv):
        return lv + k

    def add(x, y):
        lx, ly = level(x), level(y)
        if lx != ly:
            return x if lx > ly else y
        return 0 if lx == 0 else ghost(lx)

    def mul(x, y):
        if x == 0 or y == 0:
            return 0
        e = level(x) - 1 + level(y) - 1
        if e > k - 1:
            return ghost(k)
        lv = e + 1
        return ghost(lv) if (x > k or y > k) else lv

    labels = ["0"] + [str(i) for i in range(1, k + 1)] + [f"{i}v" for i in range(1, k + 1)]
    r = range(n)
    return SemiringTable(
        n,
        [[add(x, y) for y in r] for x in r],
        [[mul(x, y) for y in r] for x in r],
        labels=labels,
        name=f"SUPERTROP({k})",
    )


def ghost_map(t: SemiringTable) -> tuple[int, ...]:
    """The ghost map nu of a SUPERTROP table: tangibles go to their ghosts."""
    k = (t.size - 1) // 2
    return tuple(0 if x == 0 else (x + k if x <= k else x) for x in range(t.size))


def product_semiring(r: SemiringTable, s: SemiringTable) -> SemiringTable:
    if r is s:
        return r
    pairs = list(product(range(r.size), range(s.size)))
    idx = {p: i for i, p in enumerate(pairs)}
    add = [[idx[(r.add[a][c], s.add[b][d])] for (c, d) in pairs] for (a, b) in pairs]
    mul = [[idx[(r.mul[a][c], s.mul[b][d])] for (c, d) in pairs] for (a, b) in pairs]
    labels = [f"{r.labels[a]}.{s.labels[b]}" for a, b in pairs]
    return SemiringTable(
        len(pairs), add, mul, idx[(r.zero, s.zero)], idx[(r.one, s.one)], labels,
        name=f"{r.name}x{s.name}",
    )


def _same_ring(r: SemiringTable, s: SemiringTable) -> bool:
    return r is s or (r.size == s.size and r.add == s.add and r.mul == s.mul)


def free_module(ring: SemiringTable, n: int, cap: int = DEFAULT_ELEMENT_CAP) -> FiniteModule:
    """R^n with coordinatewise operations; the first coordinate is most significant."""
    if n < 1:
        raise FixtureError("FREE needs rank >= 1")
    _cap(ring.size ** n, cap)
    vecs = list(product(range(ring.size), repeat=n))
    idx = {v: i for i, v in enumerate(vecs)}
    add = [[idx[tuple(ring.add[a][b] for a, b in zip(u, w))] for w in vecs] for u in vecs]
    act = [[idx[tuple(ring.mul[lam][a] for a in u)] for u in vecs] for lam in range(ring.size)]
    sep = "" if all(len(lab) == 1 for lab in ring.labels) else "."
    labels = [sep.join(ring.labels[a] for a in v) for v in vecs]
    return FiniteModule(ring, len(vecs), add, act, idx[(ring.zero,) * n], labels,
                        name=f"FREE({ring.name},{n})")


def product_module(V: FiniteModule, W: FiniteModule, cap: int = DEFAULT_ELEMENT_CAP) -> FiniteModule:
    """V x W.  Over a shared ring this is the usual direct product; over two
    different rings it is a module over the product semiring."""
    _cap(V.size * W.size, cap)
    pairs = list(product(range(V.size), range(W.size)))
    idx = {p: i for i, p in enumerate(pairs)}
    add = [[idx[(V.add[a][c], W.add[b][d])] for (c, d) in pairs] for (a, b) in pairs]
    if _same_ring(V.ring, W.ring):
        ring = V.ring
        act = [[idx[(V.act[lam][a], W.act[lam][b])] for (a, b) in pairs] for lam in range(ring.size)]
    else:
        ring = product_semiring(V.ring, W.ring)
        rp = list(product(range(V.ring.size), range(W.ring.size)))
        act = [[idx[(V.act[l1][a], W.act[l2][b])] for (a, b) in pairs] for (l1, l2) in rp]
    labels = [f"{V.labels[a]}.{W.labels[b]}" for a, b in pairs]
    return FiniteModule(ring, len(pairs), add, act, idx[(V.zero, W.zero)], labels,
                        name=f"PRODUCT({V.name},{W.name})")


# --- id parsing --------------------------------------------------------------

_TOKEN = re.compile(r"\s*([A-Za-z][A-Za-z0-9]*|\d+|\{[^{}]*\}|[(),])")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FixtureError(f"cannot parse fixture id {text!r} at offset {pos}")
        out.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def _parse(tokens: list[str], i: int):
    """Return (node, next index).  A node is an int, a set string, or (name, args)."""
    if i >= len(tokens):
        raise FixtureError("unexpected end of fixture id")
    tok = tokens[i]
    if tok.isdigit():
        return int(tok), i + 1
    if tok.startswith("{"):
        return tok, i + 1
    if not tok[0].isalpha():
        raise FixtureError(f"unexpected token {tok!r}")
    name = tok.upper()
    i += 1
    args = []
    if i < len(tokens) and tokens[i] == "(":
        i += 1
        while True:
            node, i = _parse(tokens, i)
            args.append(node)
            if i >= len(tokens):
                raise FixtureError("unclosed parenthesis in fixture id")
            if tokens[i] == ")":
                i += 1
                break
            if tokens[i] != ",":
                raise FixtureError(f"expected ',' got {tokens[i]!r}")
            i += 1
    return (name, args), i


def _need(args, kinds: str, name: str):
    ok = len(args) == len(kinds) and all(
        (isinstance(a, int) if k == "i" else isinstance(a, tuple)) for a, k in zip(args, kinds)
    )
    if not ok:
        raise FixtureError(f"bad arguments for {name}: {args!r}")


def _build(node, cap: int):
    """Build (ring, module) from a parsed node."""
    if not isinstance(node, tuple):
        raise FixtureError(f"expected a fixture, got {node!r}")
    name, args = node
    if name in ALIASES and not args:
        return _build(_parse(_tokenize(ALIASES[name]), 0)[0], cap)
    if name == "BOOL":
        _need(args, "", name)
        r = boolean_semiring()
        return r, semiring_as_module(r)
    if name == "CHAIN":
        _need(args, "i", name)
        _cap(args[0] + 1, cap)
        m = chain(args[0])
        return m.ring, m
    if name in ("NSAT", "ZMOD", "SUPERTROP"):
        _need(args, "i", name)
        k = args[0]
        _cap({"NSAT": k + 1, "ZMOD": k, "SUPERTROP": 2 * k + 1}[name], cap)
        r = {"NSAT": nsat, "ZMOD": zmod, "SUPERTROP": supertropical}[name](k)
        return r, semiring_as_module(r)
    if name == "FREE":
        if len(args) != 2 or not isinstance(args[1], int):
            raise FixtureError(f"bad arguments for FREE: {args!r}")
        ring, _ = _build(args[0], cap)
        m = free_module(ring, args[1], cap)
        return ring, m
    if name == "PRODUCT":
        _need(args, "tt", name)
        _, V = _build(args[0], cap)
        _, W = _build(args[1], cap)
        m = product_module(V, W, cap)
        return m.ring, m
    if name == "QUOT":
        _need(args, "t", name)
        from .order import quotient

        _, V = _build(args[0], cap)
        q = quotient(V).module
        return q.ring, q
    if name == "AMALG":
        if len(args) < 2 or not isinstance(args[0], tuple) or not all(isinstance(a, str) for a in args[1:]):
            raise FixtureError(f"bad arguments for AMALG: {args!r}")
        from .exchange import TupleSpace, build_amalgam
        from .lattice import parse_set, generate

        _, V = _build(args[0], cap)
        factors = [generate(V, parse_set(V, s)) for s in args[1:]]
        am = build_amalgam(TupleSpace(factors), cap=cap)
        return am.module.ring, am.module
    raise FixtureError(f"unknown fixture {name!r}")


def make_fixture(fixture_id: str, cap: int = DEFAULT_ELEMENT_CAP) -> tuple[SemiringTable, FiniteModule]:
    """Build and validate the fixture named by ``fixture_id``."""
    ring, module = _make_cached(fixture_id.replace(" ", ""), cap)
    return ring, module


@lru_cache(maxsize=256)
def _make_cached(fixture_id: str, cap: int):
    tokens = _tokenize(fixture_id)
    node, end = _parse(tokens, 0)
    if end != len(tokens):
        raise FixtureError(f"trailing input in fixture id {fixture_id!r}")
    ring, module = _build(node, cap)
    if not validate_semiring(ring).ok:
        raise FixtureError(f"{fixture_id}: semiring failed validation")
    if not validate_module(module).ok:
        raise FixtureError(f"{fixture_id}: module failed validation")
    return ring, module


def fixture_module(fixture_id: str, cap: int = DEFAULT_ELEMENT_CAP) -> FiniteModule:
    return make_fixture(fixture_id, cap)[1]
