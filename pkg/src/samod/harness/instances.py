"""Seeded generation of test instances.

An instance names a module by fixture id and carries a few submodule
selections (as element-index lists), a tuple of factors, a retraction spec
and a local seed.  Every module comes from a validated constructor; raw
random Cayley tables are never produced.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..algebra import FiniteModule
from ..errors import FixtureError, PreconditionError, SamodError
from ..fixtures import make_fixture
from ..lattice import SubmoduleSet, bits, generate, is_submodule, mask_of
from ..retraction import RetractionSpec

MAX_ELEMENTS = 10
MAX_FACTORS = 3
SPACE_CAP = 400

# Pieces small enough to combine in products and amalgams.
_SMALL = ["BOOL", "CHAIN(1)", "CHAIN(2)", "CHAIN(3)", "NSAT(1)", "NSAT(2)", "NSAT(3)",
          "NSAT(4)", "ZMOD(2)", "SUPERTROP(1)"]


@dataclass
class InstanceSpec:
    index: int
    seed: int
    family: str
    module: str
    factors: list[list[int]]
    selections: dict[str, list[int]]
    retraction: dict
    extras: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"index": self.index, "seed": self.seed, "family": self.family, "module": self.module,
                "factors": [list(f) for f in self.factors],
                "selections": {k: list(v) for k, v in sorted(self.selections.items())},
                "retraction": dict(self.retraction), "extras": dict(self.extras)}

    @classmethod
    def from_json(cls, data: dict) -> "InstanceSpec":
        try:
            spec = cls(int(data["index"]), int(data["seed"]), str(data["family"]), str(data["module"]),
                       [list(map(int, f)) for f in data["factors"]],
                       {str(k): list(map(int, v)) for k, v in data["selections"].items()},
                       dict(data["retraction"]), dict(data.get("extras", {})))
        except (KeyError, TypeError, ValueError) as e:
            raise SamodError(f"malformed instance spec: {e}") from e
        spec.validate()
        return spec

    def validate(self) -> FiniteModule:
        """Resolve the module and check that every selection is a submodule."""
        _, V = make_fixture(self.module)
        for name, xs in list(self.selections.items()) + [(f"factor{i}", f) for i, f in enumerate(self.factors)]:
            if any(not 0 <= x < V.size for x in xs):
                raise SamodError(f"selection {name} has elements outside the module")
            if not is_submodule(V, mask_of(xs)):
                raise SamodError(f"selection {name} is not a submodule")
        if not 1 <= len(self.factors) <= MAX_FACTORS:
            raise SamodError("an instance needs one to three factors")
        RetractionSpec.from_json(self.retraction)
        return V


def _family_draw(rng: random.Random) -> tuple[str, str]:
    fam = rng.choice(["CHAIN", "NSAT", "SUPERTROP", "FREE", "ZMOD", "PRODUCT", "QUOT", "AMALG"])
    if fam == "CHAIN":
        return fam, f"CHAIN({rng.randint(1, 6)})"
    if fam == "NSAT":
        return fam, f"NSAT({rng.randint(1, 6)})"
    if fam == "SUPERTROP":
        return fam, f"SUPERTROP({rng.randint(1, 3)})"
    if fam == "FREE":
        return fam, rng.choice(["FREE(BOOL,2)", "FREE(BOOL,3)", "FREE(ZMOD(2),2)"])
    if fam == "ZMOD":
        return fam, f"ZMOD({rng.randint(2, 4)})"
    if fam == "PRODUCT":
        return fam, f"PRODUCT({rng.choice(_SMALL)},{rng.choice(_SMALL)})"
    if fam == "QUOT":
        return fam, f"QUOT({rng.choice(_SMALL + ['ZMOD(3)', 'ZMOD(4)', 'SUPERTROP(2)', 'FREE(ZMOD(2),2)'])})"
    base = rng.choice(["CHAIN(2)", "CHAIN(3)", "NSAT(2)", "NSAT(3)", "FREE(BOOL,2)", "SUPERTROP(1)",
                       "SUPERTROP(2)", "PRODUCT(CHAIN(1),NSAT(2))"])
    _, B = make_fixture(base)
    sets = []
    for _ in range(2):
        gens = rng.sample(range(1, B.size), rng.randint(1, min(2, B.size - 1)))
        sets.append("{" + ",".join(B.labels[g] for g in sorted(gens)) + "}")
    return fam, f"AMALG({base},{sets[0]},{sets[1]})"


def _draw_module(rng: random.Random) -> tuple[str, str, FiniteModule]:
    for _ in range(100):
        fam, fid = _family_draw(rng)
        try:
            _, V = make_fixture(fid)
        except (FixtureError, PreconditionError, SamodError):
            continue
        if V.size <= MAX_ELEMENTS:
            return fam, fid, V
    return "CHAIN", "CHAIN(3)", make_fixture("CHAIN(3)")[1]


def random_submodule(V: FiniteModule, rng: random.Random, max_gens: int = 2) -> SubmoduleSet:
    """generate() on a random generator set of at most ``max_gens`` elements."""
    k = rng.randint(0, min(max_gens, V.size))
    return generate(V, mask_of(rng.sample(range(V.size), k)))


def random_factors(V: FiniteModule, rng: random.Random, n: int, cap: int = SPACE_CAP) -> list[SubmoduleSet]:
    """n random submodules whose tuple space stays within ``cap`` tuples."""
    for _ in range(50):
        fs = [random_submodule(V, rng) for _ in range(n)]
        total = 1
        for f in fs:
            total *= len(f)
        if total <= cap:
            return fs
    return [generate(V, 0)] * n


def random_retraction_spec(rng: random.Random) -> RetractionSpec:
    """A random set retraction of a carrier of at most 7 points onto a chain X.

    The zero fiber is always trivial so the three-case sum can be built."""
    k = rng.randint(2, 4)
    carrier = rng.randint(k, 7)
    X = tuple(range(k))
    order = (0,) + tuple(rng.sample(range(1, k), k - 1))
    phi = list(X) + [rng.randrange(1, k) for _ in range(carrier - k)]
    labels = tuple(str(i) for i in range(k)) + tuple(chr(ord("a") + i) for i in range(carrier - k))
    return RetractionSpec(carrier, X, tuple(phi), order, labels)


def _selections(V: FiniteModule, rng: random.Random) -> dict[str, list[int]]:
    A = random_submodule(V, rng, 3)
    D = generate(V, mask_of(rng.sample(A.elements, rng.randint(0, min(2, len(A))))))
    T = random_submodule(V, rng)
    W = random_submodule(V, rng)
    return {"A": A.elements, "D": D.elements, "T": generate(V, T.mask | D.mask).elements, "W": W.elements}


def make_instance(index: int, seed: int) -> InstanceSpec:
    rng = random.Random(seed)
    fam, fid, V = _draw_module(rng)
    n = rng.randint(2, MAX_FACTORS)
    factors = [f.elements for f in random_factors(V, rng, n)]
    spec = random_retraction_spec(rng)
    return InstanceSpec(index, seed, fam, fid, factors, _selections(V, rng), spec.to_json())


def generate_instances(seed: int, budget: int):
    """Deterministic stream of ``budget`` instance specs for ``seed``."""
    master = random.Random(seed)
    for i in range(max(budget, 0)):
        yield make_instance(i, master.getrandbits(64))
