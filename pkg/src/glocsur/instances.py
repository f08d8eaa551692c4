"""Random instance generators for the property suites and ``selftest``.

All generators take a :class:`random.Random` so runs are reproducible from
a seed. Modules are assembled from permutation and sign pieces, so the
action is valid by construction; quotients and submodules are taken by
G-orbit spans.
"""

from __future__ import annotations

import random
from functools import lru_cache

from .abelian import FgAbGroup
from .gmodule import (
    FiniteGroup,
    GModule,
    SubgroupOfG,
    direct_sum,
    orbit_span,
    quotient_module,
)
from .localization import LocalizationProblem, PlaceSpec
from .matrix import IntMatrix

SMALL_GROUPS = {
    "C1": [[0]],
    "C2": [[1, 0]],
    "C3": [[1, 2, 0]],
    "C4": [[1, 2, 3, 0]],
    "C2xC2": [[1, 0, 3, 2], [2, 3, 0, 1]],
    "C5": [[1, 2, 3, 4, 0]],
    "C6": [[1, 2, 3, 4, 5, 0]],
    "S3": [[1, 0, 2], [1, 2, 0]],
    "C7": [[1, 2, 3, 4, 5, 6, 0]],
    "C8": [[1, 2, 3, 4, 5, 6, 7, 0]],
    "C2xC4": [[1, 2, 3, 0, 4, 5], [0, 1, 2, 3, 5, 4]],
    "C2xC2xC2": [[1, 0, 2, 3, 4, 5], [0, 1, 3, 2, 4, 5], [0, 1, 2, 3, 5, 4]],
    "D4": [[1, 2, 3, 0], [0, 3, 2, 1]],
    # left multiplication by i and j on (1, i, -1, -i, j, -k, -j, k)
    "Q8": [[1, 2, 3, 0, 5, 6, 7, 4], [4, 7, 6, 5, 2, 1, 0, 3]],
}


@lru_cache(maxsize=None)
def small_group(name: str) -> FiniteGroup:
    return FiniteGroup.from_permutations(SMALL_GROUPS[name])


def random_group(rng: random.Random, max_order: int = 8) -> FiniteGroup:
    names = [n for n in SMALL_GROUPS if small_group(n).order <= max_order]
    return small_group(rng.choice(names))


@lru_cache(maxsize=None)
def _subgroups(G: FiniteGroup) -> tuple[SubgroupOfG, ...]:
    return tuple(G.subgroups())


def random_subgroup(rng: random.Random, G: FiniteGroup) -> SubgroupOfG:
    return rng.choice(_subgroups(G))


def order_two_subgroups(G: FiniteGroup) -> list[SubgroupOfG]:
    return [H for H in _subgroups(G) if len(H) == 2]


# -- building blocks ----------------------------------------------------------


def permutation_module(G: FiniteGroup, K: SubgroupOfG) -> GModule:
    """Z[G/K]: basis indexed by left cosets xK, g·xK = gxK."""
    cosets, seen = [], {}
    for x in G.elements():
        c = frozenset(G.mul(x, k) for k in K.elements)
        if c not in seen:
            seen[c] = len(cosets)
            cosets.append(c)
    n = len(cosets)
    action = []
    for g in G.elements():
        rows = [[0] * n for _ in range(n)]
        for idx, c in enumerate(cosets):
            x = min(c)
            gc = frozenset(G.mul(G.mul(g, x), k) for k in K.elements)
            rows[seen[gc]][idx] = 1
        action.append(IntMatrix.from_rows(rows, n))
    return GModule(G, FgAbGroup(n), action, validate=False)


def sign_module(G: FiniteGroup, kernel: SubgroupOfG) -> GModule:
    action = [IntMatrix.from_rows([[1 if g in kernel else -1]]) for g in G.elements()]
    return GModule(G, FgAbGroup(1), action, validate=False)


def _pieces(G: FiniteGroup, max_rank: int) -> list[GModule]:
    out = [GModule.trivial(G, FgAbGroup(1))]
    for K in _subgroups(G):
        idx = G.order // len(K)
        if idx == 2:
            out.append(sign_module(G, K))
        if 2 <= idx <= max_rank:
            out.append(permutation_module(G, K))
    return out


def _rebind(M: GModule, carrier: FgAbGroup) -> GModule:
    return GModule(M.group, carrier, M.action, validate=False)


def random_vector(rng: random.Random, n: int, spread: int = 3) -> tuple[int, ...]:
    return tuple(rng.randint(-spread, spread) for _ in range(n))


def random_lattice_module(rng: random.Random, G: FiniteGroup, max_rank: int = 4) -> GModule:
    """A direct sum of trivial, sign and permutation pieces of total rank ≤ max_rank."""
    pieces = _pieces(G, max_rank)
    M = rng.choice(pieces)
    while rng.random() < 0.5:
        P = rng.choice(pieces)
        if M.rank + P.rank > max_rank:
            break
        M = direct_sum(M, P)
    return M


def random_module(rng: random.Random, G: FiniteGroup, max_rank: int = 4,
                  torsion: bool = True) -> GModule:
    """A lattice module, possibly with an invariant quotient and scalar torsion."""
    M = random_lattice_module(rng, G, max_rank)
    if torsion and rng.random() < 0.4:
        M, _ = quotient_module(M, [random_vector(rng, M.rank)])
    if torsion and rng.random() < 0.3:
        N = rng.choice([2, 3, 4])
        R = M.carrier.relations.hstack(IntMatrix.identity(M.rank).scale(N))
        M = _rebind(M, FgAbGroup(M.rank, R))
    return M


def random_finite_module(rng: random.Random, G: FiniteGroup, max_size: int = 16) -> GModule:
    """A module whose carrier is finite with at most ``max_size`` elements."""
    while True:
        M = random_lattice_module(rng, G, max_rank=4)
        n = M.rank
        choices = [N for N in range(1, 17) if N ** n <= max_size]
        N = rng.choice(choices)
        R = IntMatrix.identity(n).scale(N)
        M = _rebind(M, FgAbGroup(n, R))
        if rng.random() < 0.4:
            M, _ = quotient_module(M, [random_vector(rng, n)])
        if M.carrier.order() <= max_size:
            return M


def random_places(rng: random.Random, G: FiniteGroup, count: int | None = None) -> list[PlaceSpec]:
    count = rng.randint(1, 5) if count is None else count
    inv2 = order_two_subgroups(G)
    places = []
    for k in range(count):
        kinds = ["finite", "finite", "complex"] + (["real"] if inv2 else [])
        kind = rng.choice(kinds)
        if kind == "finite":
            H = random_subgroup(rng, G)
        elif kind == "real":
            H = rng.choice(inv2)
        else:
            H = G.trivial()
        places.append(PlaceSpec(f"v{k}", kind, H))
    return places


def random_problem(rng: random.Random, M: GModule, places: list[PlaceSpec] | None = None,
                   tails: bool = True) -> LocalizationProblem:
    G = M.group
    places = random_places(rng, G) if places is None else places
    S = [p.id for p in places if rng.random() < 0.5]
    S_tail = comp_tail = None
    if tails and rng.random() < 0.25:
        classes = G.cyclic_subgroup_classes()
        tail = tuple(c for c in classes if rng.random() < 0.6) or tuple(classes)
        if rng.random() < 0.5:
            S_tail = tail
        else:
            comp_tail = tail
    return LocalizationProblem(M, places, S, S_tail, comp_tail)


def random_ses_generators(rng: random.Random, M: GModule, count: int | None = None):
    count = rng.randint(1, 2) if count is None else count
    return [random_vector(rng, M.rank) for _ in range(count)]


def random_full_rank_generators(rng: random.Random, M: GModule, tries: int = 50):
    """Vectors whose G-orbits span a finite-index sublattice of M."""
    for _ in range(tries):
        vecs = [random_vector(rng, M.rank) for _ in range(rng.randint(1, 2))]
        L = orbit_span(M, vecs)
        Q, _ = M.carrier.quotient(L)
        if Q.is_finite():
            return vecs
    return [tuple(int(i == j) for j in range(M.rank)) for i in range(M.rank)]


def random_stable_generators(rng: random.Random, M: GModule):
    """Full-rank generators closed under the action (a G-orbit union)."""
    vecs = random_full_rank_generators(rng, M)
    out = []
    for v in vecs:
        for g in M.group.elements():
            w = tuple(M.act(g, v))
            if w not in out:
                out.append(w)
    return out
