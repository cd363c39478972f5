"""Per-instance state shared by the theorem checkers: the resolved module,
its submodule lattice and cached tuple-space partitions."""

from __future__ import annotations

import random
import re

from ..exchange import TupleSpace, exchange_partition, has_amalgamation
from ..fixtures import make_fixture
from ..lattice import ElementSet, SubmoduleSet, enumerate_submodules, is_sa, mask_of, popcount, sum_all
from ..order import leq_v
from ..retraction import RetractionSpec, build_from_retraction, product_retraction, supertropical_retraction
from .instances import SPACE_CAP, InstanceSpec

CONFIGS = 3


def space_size(factors) -> int:
    n = 1
    for f in factors:
        n *= popcount(f.mask)
    return n


class Context:
    def __init__(self, spec: InstanceSpec):
        self.spec = spec
        self.ring, self.V = make_fixture(spec.module)
        V = self.V
        self.subs = enumerate_submodules(V)
        self.factors = [SubmoduleSet(V, mask_of(f)) for f in spec.factors]
        self.sel = {k: SubmoduleSet(V, mask_of(v)) for k, v in spec.selections.items()}
        self.leq = leq_v(V)
        self._spaces: dict = {}
        self._sa: dict = {}
        self._build = None
        # pinned: selection-aware checks use only the named selections
        self.pinned = bool(spec.extras.get("pinned", False))

    def rng(self, key: str) -> random.Random:
        return random.Random(f"{self.spec.seed}:{key}")

    # --- tuple spaces -------------------------------------------------------------

    def space(self, factors):
        """(space, partition, AM result) for a factor list, cached by masks."""
        key = tuple(f.mask for f in factors)
        hit = self._spaces.get(key)
        if hit is None:
            sp = TupleSpace(list(factors))
            p = exchange_partition(sp)
            hit = (sp, p, has_amalgamation(sp, p))
            self._spaces[key] = hit
        return hit

    def am(self, factors) -> bool:
        return bool(self.space(factors)[2])

    def factor_tuples(self, n: int, rng: random.Random, k: int = CONFIGS, need_am: bool = False,
                      cap: int = SPACE_CAP, tries: int = 12):
        """Up to k factor lists of length n: the instance's own first, then random submodules."""
        out = []
        cands = []
        if len(self.factors) >= n:
            cands.append(self.factors[:n])
        for _ in range(tries):
            cands.append([rng.choice(self.subs) for _ in range(n)])
        for fs in cands:
            if len(out) >= k:
                break
            if space_size(fs) > cap:
                continue
            if need_am and not self.am(fs):
                continue
            out.append(fs)
        return out

    def total(self, factors) -> SubmoduleSet:
        return SubmoduleSet(self.V, sum_all(list(factors)).mask)

    # --- lattice helpers ------------------------------------------------------------

    def sa_in(self, A: SubmoduleSet) -> list[SubmoduleSet]:
        """Submodules of A that are SA in A."""
        hit = self._sa.get(A.mask)
        if hit is None:
            hit = [W for W in self.subs if W.mask & ~A.mask == 0 and is_sa(W, A)]
            self._sa[A.mask] = hit
        return hit

    def subs_between(self, lo: int, hi: int) -> list[SubmoduleSet]:
        return [S for S in self.subs if lo & ~S.mask == 0 and S.mask & ~hi == 0]

    def pick(self, rng: random.Random, items, k: int = CONFIGS) -> list:
        items = list(items)
        return items if len(items) <= k else rng.sample(items, k)

    def element_set(self, mask: int) -> ElementSet:
        return ElementSet(self.V, mask)

    # --- retractions -----------------------------------------------------------------

    def build(self):
        if self._build is None:
            self._build = build_from_retraction(RetractionSpec.from_json(self.spec.retraction))
        return self._build

    def retractions(self, special_only: bool = False) -> list:
        """The instance's built retraction, the ghost map of a supertropical fixture, and
        (unless ``special_only``) a chain-times-module retraction, which is not special."""
        out = [self.build().retraction]
        m = re.fullmatch(r"SUPERTROP\((\d+)\)", self.spec.module)
        if m:
            out.append(supertropical_retraction(int(m.group(1))))
        if not special_only and self.V.size <= 5:
            out.append(product_retraction(2, self.V))
        return out
