"""D-complements, SA-extensions, complementary modules and saturation.

Throughout, D ⊆ A are submodules of a module V.  A is an SA-extension of D
when D absorbs summands inside A.  T is complementary to A over D when
A ∩ T = D and [(A∖D) + T] ∩ T = ∅; the saturation of A by T is
B = [(A∖D) + T] ∪ D.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import FiniteModule, SemiringTable
from .errors import AmbientMismatchError, ContainmentError, PreconditionError, SamodError
from .lattice import (
    ElementSet,
    SubmoduleSet,
    bits,
    coset,
    cyclic,
    enumerate_submodules,
    format_set,
    generate,
    is_add_closed,
    is_sa,
    is_submodule,
    mask_of,
    nac,
    sa_closure,
    set_sum,
    subtractive_hull,
    sum_,
    whole,
    zero_set,
)


def _inside(small: ElementSet, big: ElementSet, what: str) -> None:
    if small.module is not big.module:
        raise AmbientMismatchError("sets live in different modules")
    if small.mask & ~big.mask:
        raise ContainmentError(f"{what}: {small} is not inside {big}")


def _module(s: ElementSet) -> FiniteModule:
    return s.module  # type: ignore[return-value]


def _submodule(V, mask: int) -> SubmoduleSet:
    if not is_submodule(V, mask):
        raise SamodError(f"{format_set(V, mask)} was expected to be a submodule")
    return SubmoduleSet(V, mask)


# --- D-complements -----------------------------------------------------------------

def d_complement_failure(W: SubmoduleSet, D: SubmoduleSet, T: SubmoduleSet,
                         V: SubmoduleSet | None = None) -> str | None:
    """Name of the first failing clause of the D-complement definition, or None."""
    _inside(D, W, "D-complement")
    amb = V.mask if V is not None else W.module.full_mask
    if set_sum(W, T).mask != amb:
        return "W+T"
    if W.mask & T.mask != D.mask:
        return "W∩T"
    for w in bits(W.mask & ~D.mask):
        if coset(w, T).mask & T.mask:
            return f"coset:{w}"
    return None


def is_d_complement(W, D, T, V=None) -> bool:
    """W + T = V, W ∩ T = D and (w + T) ∩ T = ∅ for every w in W∖D."""
    return d_complement_failure(W, D, T, V) is None


def find_d_complements(W: SubmoduleSet, D: SubmoduleSet, V: SubmoduleSet | None = None) -> list[SubmoduleSet]:
    _inside(D, W, "D-complement")
    amb = V.mask if V is not None else W.module.full_mask
    return [T for T in enumerate_submodules(_module(W))
            if T.mask & ~amb == 0 and is_d_complement(W, D, T, V)]


# --- SA-extensions ---------------------------------------------------------------------

def rest_closed_and_absorbing(A: ElementSet, D: ElementSet) -> bool:
    """A∖D closed under addition and (A∖D) + D inside A∖D."""
    V = A.module
    rest = A.mask & ~D.mask
    if not is_add_closed(V, rest):
        return False
    add = V.add
    return all(rest >> add[x][d] & 1 for x in bits(rest) for d in D)


def is_sa_extension(A: ElementSet, D: ElementSet) -> bool:
    """D is SA in A; cross-checked against the intrinsic A∖D characterisation."""
    _inside(D, A, "SA-extension")
    direct = is_sa(D, A)
    if direct != rest_closed_and_absorbing(A, D):
        raise SamodError("SA-extension characterisations disagree")
    return direct


def sa_extensions_of(D: SubmoduleSet) -> list[SubmoduleSet]:
    """Every submodule A containing D in which D is SA."""
    return [A for A in enumerate_submodules(_module(D))
            if D.mask & ~A.mask == 0 and is_sa(D, A)]


def maximal_sa_extension(A: SubmoduleSet, D: SubmoduleSet) -> SubmoduleSet:
    """Greedily enlarge A by single generators while D stays SA."""
    if not is_sa_extension(A, D):
        raise PreconditionError("A is not an SA-extension of D")
    V = _module(A)
    cur = A
    changed = True
    while changed:
        changed = False
        for x in range(V.size):
            if x in cur:
                continue
            bigger = generate(V, cur.mask | 1 << x)
            if is_sa(D, bigger):
                cur = bigger
                changed = True
                break
    return cur


# --- complementary modules and saturation --------------------------------------------------

def is_complementary(A: ElementSet, D: ElementSet, T: ElementSet) -> bool:
    """A ∩ T = D and [(A∖D) + T] ∩ T = ∅."""
    _inside(D, A, "complementary")
    if A.mask & T.mask != D.mask:
        return False
    rest = A - D
    return set_sum(rest, T).mask & T.mask == 0 if rest.mask else True


def saturation(A: ElementSet, D: ElementSet, T: ElementSet) -> ElementSet:
    """B = [(A∖D) + T] ∪ D."""
    rest = A - D
    if not rest.mask:
        return D.as_elements()
    return ElementSet(A.module, set_sum(rest, T).mask | D.mask)


def is_saturated(A, D, T) -> bool:
    return saturation(A, D, T).mask == A.mask


def saturate(A: SubmoduleSet, D: SubmoduleSet, T: SubmoduleSet) -> SubmoduleSet:
    """The saturation of A by T, with the enlargement guarantees asserted."""
    if D.mask & ~T.mask:
        raise PreconditionError("D must lie inside T")
    if not is_sa_extension(A, D):
        raise PreconditionError("A is not an SA-extension of D")
    if not is_complementary(A, D, T):
        raise PreconditionError("T is not complementary to A over D")
    V = _module(A)
    B = saturation(A, D, T)
    if not is_submodule(V, B.mask):
        raise SamodError("saturation is not a submodule")
    B = SubmoduleSet(V, B.mask)
    if not (is_sa_extension(B, D) and is_complementary(B, D, T)):
        raise SamodError("saturation lost the SA-extension or complementarity")
    if sum_(B, T).mask != sum_(A, T).mask:
        raise SamodError("saturation changed A + T")
    return B


@dataclass
class ExtensionReport:
    is_sa_extension: bool
    is_complementary: bool | None
    saturation: ElementSet | None
    is_saturated: bool | None
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        V = self.saturation.module if self.saturation is not None else None
        return {
            "is_sa_extension": self.is_sa_extension,
            "is_complementary": self.is_complementary,
            "saturation": self.saturation.elements if self.saturation is not None else None,
            "saturation_labels": format_set(V, self.saturation.mask) if V is not None else None,
            "is_saturated": self.is_saturated,
            "witnesses": self.witnesses,
        }


def extension_report(A: SubmoduleSet, D: SubmoduleSet, T: SubmoduleSet | None = None) -> ExtensionReport:
    from .lattice import sa_witness

    ext = is_sa_extension(A, D)
    wit = {}
    if not ext:
        wit["sa_pair"] = list(sa_witness(D, A))
    if T is None:
        return ExtensionReport(ext, None, None, None, wit)
    comp = is_complementary(A, D, T)
    B = saturation(A, D, T)
    return ExtensionReport(ext, comp, B, B.mask == A.mask, wit)


# --- descending to {0} -------------------------------------------------------------------

def sum_of_units(R: SemiringTable) -> bool:
    """Every element is a (possibly empty) sum of units."""
    units = R.units()
    reach = {R.zero}
    todo = [R.zero]
    while todo:
        x = todo.pop()
        for u in units:
            y = R.add[x][u]
            if y not in reach:
                reach.add(y)
                todo.append(y)
    return len(reach) == R.size


def strip_to_zero(A: SubmoduleSet, D: SubmoduleSet, T: SubmoduleSet | None = None) -> SubmoduleSet:
    """A_0 = (A∖D) ∪ {0}, a submodule whenever every scalar is a sum of units."""
    V = _module(A)
    if not sum_of_units(V.ring):
        raise PreconditionError("ring has elements that are not sums of units")
    if not is_sa_extension(A, D):
        raise PreconditionError("A is not an SA-extension of D")
    if T is not None and not is_complementary(A, D, T):
        raise PreconditionError("T is not complementary to A over D")
    A0 = _submodule(V, (A.mask & ~D.mask) | 1 << V.zero)
    Z = zero_set(V)
    if not is_sa_extension(A0, Z):
        raise SamodError("A_0 is not an SA-extension of {0}")
    if T is not None:
        if not is_complementary(A0, Z, T):
            raise SamodError("T is not complementary to A_0 over {0}")
        if is_saturated(A0, Z, T) != is_saturated(A, D, T):
            raise SamodError("saturation of A_0 and A disagree")
    return A0


# --- reducing a complement --------------------------------------------------------------

def reduce_complement(A: SubmoduleSet, D: SubmoduleSet, T: SubmoduleSet, U: SubmoduleSet,
                      check_additive_form: bool | None = None) -> SubmoduleSet:
    """T' = {x in T | A + Rx inside U'} for D ⊆ U' ⊆ A + T."""
    V = _module(A)
    if not is_complementary(A, D, T):
        raise PreconditionError("T is not complementary to A over D")
    AT = sum_(A, T)
    if D.mask & ~U.mask or U.mask & ~AT.mask:
        raise PreconditionError("need D ⊆ U' ⊆ A + T")
    add, u = V.add, U.mask
    keep = [x for x in T if all(u >> add[a][y] & 1 for a in A for y in cyclic(V, x))]
    Tp = _submodule(V, mask_of(keep))
    if not is_complementary(A, D, Tp) or sum_(A, Tp).mask != U.mask:
        raise SamodError("reduced complement fails its guarantees")
    if check_additive_form is None:
        check_additive_form = ones_generate(V.ring)
    if check_additive_form:
        alt = mask_of(x for x in T if all(u >> add[a][x] & 1 for a in A))
        if alt != Tp.mask:
            raise SamodError("additive form of the reduced complement disagrees")
    return Tp


def ones_generate(R: SemiringTable) -> bool:
    """Every scalar is a sum of copies of 1 (the image of the naturals is all of R)."""
    seen, y = {R.zero}, R.zero
    while True:
        y = R.add[y][R.one]
        if y in seen:
            break
        seen.add(y)
    return len(seen) == R.size


# --- posets of complements ------------------------------------------------------------------

def compl_prime(A: SubmoduleSet, D: SubmoduleSet) -> list[SubmoduleSet]:
    """Submodules T ⊇ D with A ∩ T = D and [(A∖D) + T] ∩ T = ∅."""
    return [T for T in enumerate_submodules(_module(A))
            if D.mask & ~T.mask == 0 and is_complementary(A, D, T)]


def compl_double_prime(A: SubmoduleSet, D: SubmoduleSet) -> list[SubmoduleSet]:
    """Submodules U ⊇ A in which A has a D-complement."""
    subs = enumerate_submodules(_module(A))
    out = []
    for U in subs:
        if A.mask & ~U.mask:
            continue
        if any(T.mask & ~U.mask == 0 and is_d_complement(A, D, T, U) for T in subs):
            out.append(U)
    return out


@dataclass
class ComplPosets:
    compl1: list[SubmoduleSet]
    compl2: list[SubmoduleSet]
    pairing: list[tuple[SubmoduleSet, SubmoduleSet]]
    bijective: bool
    order_preserving: bool
    order_reflecting: bool
    lower1: bool
    lower2: bool


def compl_posets(A: SubmoduleSet, D: SubmoduleSet) -> ComplPosets:
    """Compl′ and Compl″ with the map T ↦ A + T between them."""
    if not is_sa_extension(A, D):
        raise PreconditionError("A is not an SA-extension of D")
    c1, c2 = compl_prime(A, D), compl_double_prime(A, D)
    pairing = [(T, sum_(A, T)) for T in c1]
    images = [U.mask for _, U in pairing]
    bij = len(set(images)) == len(images) and set(images) == {U.mask for U in c2}
    pres = all(U1.mask & ~U2.mask == 0
               for T1, U1 in pairing for T2, U2 in pairing if T1.mask & ~T2.mask == 0)
    refl = all(T1.mask & ~T2.mask == 0
               for T1, U1 in pairing for T2, U2 in pairing if U1.mask & ~U2.mask == 0)
    subs = enumerate_submodules(_module(A))
    m1, m2 = {T.mask for T in c1}, {U.mask for U in c2}
    lower1 = all(S.mask in m1 for T in c1 for S in subs
                 if D.mask & ~S.mask == 0 and S.mask & ~T.mask == 0)
    lower2 = all(S.mask in m2 for U in c2 for S in subs
                 if A.mask & ~S.mask == 0 and S.mask & ~U.mask == 0)
    return ComplPosets(c1, c2, pairing, bij, pres, refl, lower1, lower2)


# --- hulls as complements -------------------------------------------------------------------

def hull_is_universal_complement(D: SubmoduleSet) -> tuple[bool, list[SubmoduleSet]]:
    """Is the subtractive hull complementary over D to every SA-extension of D?"""
    T = subtractive_hull(D)
    bad = [A for A in sa_extensions_of(D) if not is_complementary(A, D, T)]
    return not bad, bad


@dataclass
class NacExtensionReport:
    A0: SubmoduleSet
    closure: SubmoduleSet
    ok: bool
    failures: list[str]


def nac_extension(D: SubmoduleSet) -> NacExtensionReport:
    """A_0 = Nac_V(D) ∪ D with the SA-closure as its unique D-complement in V."""
    V = _module(D)
    N0 = nac(D, "V")
    cl = sa_closure(D)
    fails = []
    m = N0.mask | D.mask
    if not is_submodule(V, m):
        return NacExtensionReport(SubmoduleSet(V, m), cl, False, ["A0 not a submodule"])
    A0 = SubmoduleSet(V, m)
    if N0.mask & D.mask:
        fails.append("N0 meets D")
    if not is_sa_extension(A0, D):
        fails.append("A0 not an SA-extension")
    if A0.mask & cl.mask != D.mask:
        fails.append("A0 ∩ D↓ ≠ D")
    if sum_(A0, cl).mask != V.full_mask:
        fails.append("A0 + D↓ ≠ V")
    comps = find_d_complements(A0, D)
    if [T.mask for T in comps] != [cl.mask]:
        fails.append("D↓ is not the unique D-complement")
    return NacExtensionReport(A0, cl, not fails, fails)


