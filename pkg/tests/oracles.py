"""Brute-force reference implementations built on plain sets, used as test oracles."""

from itertools import product


def elems(mask):
    return {i for i in range(mask.bit_length()) if mask >> i & 1}


def to_mask(xs):
    m = 0
    for x in xs:
        m |= 1 << x
    return m


def is_submodule(V, xs):
    xs = set(xs)
    return (V.zero in xs
            and all(V.add[a][b] in xs for a in xs for b in xs)
            and all(V.act[r][a] in xs for r in range(V.ring.size) for a in xs))


def all_submodules(V):
    """Every subset scanned; only for tiny modules."""
    out = []
    for m in range(1 << V.size):
        xs = elems(m)
        if is_submodule(V, xs):
            out.append(frozenset(xs))
    return out


def is_sa(V, W, amb):
    return all(x in W and y in W for x in amb for y in amb if V.add[x][y] in W)


def is_subtractive(V, T):
    return all(x in T for x in range(V.size) for t in T if V.add[x][t] in T)


def subtractive_hull(V, D):
    """Intersection of all subtractive submodules containing D."""
    out = set(range(V.size))
    for S in all_submodules(V):
        if D <= S and is_subtractive(V, S):
            out &= S
    return out


def sa_closure(V, D):
    """Intersection of all SA submodules of V containing D."""
    out = set(range(V.size))
    for S in all_submodules(V):
        if D <= S and is_sa(V, S, range(V.size)):
            out &= S
    return out


def exchange_classes(V, factors):
    """Connected components of single exchange moves, by plain graph search."""
    tuples = list(product(*[sorted(f) for f in factors]))
    tset = set(tuples)
    adj = {t: set() for t in tuples}
    n = len(factors)
    for t in tuples:
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                for d in factors[i] & factors[j]:
                    for a in factors[i]:
                        if V.add[a][d] != t[i]:
                            continue
                        u = list(t)
                        u[i] = a
                        u[j] = V.add[t[j]][d]
                        u = tuple(u)
                        if u in tset:
                            adj[t].add(u)
                            adj[u].add(t)
    seen, classes = set(), []
    for t in tuples:
        if t in seen:
            continue
        comp, stack = {t}, [t]
        while stack:
            for u in adj[stack.pop()]:
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        classes.append(frozenset(comp))
    return set(classes)


def tuple_sum(V, t):
    s = V.zero
    for x in t:
        s = V.add[s][x]
    return s


def has_am(V, factors):
    """Tuples with equal sums always lie in one exchange class."""
    by_sum = {}
    for c in exchange_classes(V, factors):
        for t in c:
            by_sum.setdefault(tuple_sum(V, t), set()).add(c)
    return all(len(cs) == 1 for cs in by_sum.values())
