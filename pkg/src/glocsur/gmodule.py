"""Finite groups acting on finitely generated abelian groups.

Provides coinvariants M_H, the maps M_H -> M_K for H ⊆ K, Tate Ĥ^{-1},
and a bar-complex computation of H_1 used as an independent check.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence

from .abelian import FgAbGroup, Homomorphism, Subgroup, subquotient
from .errors import MalformedInputError
from .matrix import IntMatrix, Vector

DEFAULT_MAX_ORDER = 10_000


class FiniteGroup:
    """A finite group given by its multiplication table; element 0 is the identity.

    ``table[a][b]`` is the index of the product ``a*b``.
    """

    def __init__(self, table: Sequence[Sequence[int]]):
        table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(table)
        if n == 0:
            raise MalformedInputError("empty multiplication table")
        for row in table:
            if len(row) != n or any(not 0 <= x < n for x in row):
                raise MalformedInputError("multiplication table is not square over 0..n-1")
        if any(table[0][a] != a or table[a][0] != a for a in range(n)):
            raise MalformedInputError("element 0 is not the identity")
        for a in range(n):
            if sorted(table[a]) != list(range(n)):
                raise MalformedInputError(f"row {a} of the table is not a permutation")
        for a, b, c in product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise MalformedInputError(f"table is not associative at ({a}, {b}, {c})")
        self.table = table
        self.order = n
        self.words: dict[int, tuple[int, ...]] | None = None

    @classmethod
    def from_permutations(cls, generators: Sequence[Sequence[int]],
                          max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
        """Close a list of permutations (0-based images) under composition.

        Products compose right to left: ``(g*h)(i) = g(h(i))``. The group
        remembers, for each element, a word in the generators reaching it.
        """
        gens = [tuple(int(x) for x in g) for g in generators]
        degree = len(gens[0]) if gens else 1
        for g in gens:
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise MalformedInputError(f"not a permutation of 0..{degree - 1}: {list(g)}")
        ident = tuple(range(degree))
        elems = [ident]
        index = {ident: 0}
        words = {0: ()}
        queue = deque([0])
        while queue:
            a = queue.popleft()
            for k, g in enumerate(gens):
                p = tuple(g[x] for x in elems[a])
                if p not in index:
                    if len(elems) >= max_order:
                        raise MalformedInputError(f"group generated exceeds the order cap {max_order}")
                    index[p] = len(elems)
                    elems.append(p)
                    words[index[p]] = (k,) + words[a]
                    queue.append(index[p])
        table = [[index[tuple(a[x] for x in b)] for b in elems] for a in elems]
        G = cls(table)
        G.words = words
        G.permutations = elems
        return G

    @classmethod
    def cyclic(cls, n: int) -> FiniteGroup:
        return cls([[(a + b) % n for b in range(n)] for a in range(n)])

    @classmethod
    def direct_product(cls, G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
        """Element (g, h) gets index g * |H| + h."""
        m = H.order
        return cls([[G.mul(a // m, b // m) * m + H.mul(a % m, b % m)
                     for b in range(G.order * m)] for a in range(G.order * m)])

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def _inverses(self) -> tuple[int, ...]:
        return tuple(self.table[a].index(0) for a in range(self.order))

    def inv(self, a: int) -> int:
        return self._inverses[a]

    def conj(self, g: int, h: int) -> int:
        """g h g^{-1}"""
        return self.mul(self.mul(g, h), self.inv(g))

    def elements(self) -> range:
        return range(self.order)

    def whole(self) -> SubgroupOfG:
        return SubgroupOfG(self, range(self.order))

    def trivial(self) -> SubgroupOfG:
        return SubgroupOfG(self, [0])

    def generated(self, gens: Iterable[int]) -> SubgroupOfG:
        elems = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    b = self.mul(a, g)
                    if b not in elems:
                        elems.add(b)
                        new.append(b)
            frontier = new
        return SubgroupOfG(self, elems)

    def cyclic_subgroups(self) -> list[SubgroupOfG]:
        seen = {}
        for g in self.elements():
            H = self.generated([g])
            seen.setdefault(H.elements, H)
        return sorted(seen.values(), key=lambda H: (len(H.elements), H.elements))

    def cyclic_subgroup_classes(self) -> list[SubgroupOfG]:
        """One representative (the first in sorted order) per conjugacy class."""
        reps, covered = [], set()
        for H in self.cyclic_subgroups():
            if H.elements in covered:
                continue
            reps.append(H)
            covered.update(H.conjugate(g).elements for g in self.elements())
        return reps

    def subgroups(self) -> list[SubgroupOfG]:
        """All subgroups, by closing under joins of cyclic ones (small groups only)."""
        found = {H.elements: H for H in self.cyclic_subgroups()}
        changed = True
        while changed:
            changed = False
            for A, B in list(product(list(found.values()), repeat=2)):
                J = self.generated(A.elements + B.elements)
                if J.elements not in found:
                    found[J.elements] = J
                    changed = True
        return sorted(found.values(), key=lambda H: (len(H.elements), H.elements))

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


@dataclass(frozen=True)
class SubgroupOfG:
    parent: FiniteGroup
    elements: tuple[int, ...]

    def __init__(self, parent: FiniteGroup, elements: Iterable[int]):
        elems = tuple(sorted(set(int(x) for x in elements)))
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "elements", elems)
        if not elems or elems[0] != 0:
            raise MalformedInputError(f"subgroup {list(elems)} does not contain the identity")
        s = set(elems)
        for a in elems:
            if not 0 <= a < parent.order:
                raise MalformedInputError(f"element index {a} out of range")
        for a in elems:
            if parent.inv(a) not in s:
                raise MalformedInputError(f"subgroup {list(elems)} is not closed under inverses ({a})")
            for b in elems:
                if parent.mul(a, b) not in s:
                    raise MalformedInputError(
                        f"subgroup {list(elems)} is not closed: {a}*{b} = {parent.mul(a, b)}")

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self.elements

    def issubset(self, other: SubgroupOfG) -> bool:
        return set(self.elements) <= set(other.elements)

    def conjugate(self, g: int) -> SubgroupOfG:
        return SubgroupOfG(self.parent, (self.parent.conj(g, h) for h in self.elements))

    def is_trivial(self) -> bool:
        return self.elements == (0,)

    def generating_set(self) -> list[int]:
        """A small generating set, greedily chosen."""
        gens, span = [], {0}
        for h in self.elements:
            if h not in span:
                gens.append(h)
                span = set(self.parent.generated(gens).elements)
        return gens

    def __repr__(self):
        return f"SubgroupOfG({list(self.elements)})"


@dataclass(frozen=True)
class CoinvariantData:
    quotient: FgAbGroup
    projection: Homomorphism
    torsion_part: Subgroup
    tf_part: FgAbGroup


@dataclass
class ActionViolation:
    kind: str  # "identity" | "product" | "relation"
    detail: tuple

    def __str__(self):
        if self.kind == "identity":
            return "action of the identity is not the identity map"
        if self.kind == "product":
            g, h = self.detail
            return f"action({g})·action({h}) != action({g}*{h})"
        g, col = self.detail
        return f"action({g}) does not preserve relation column {col}"


class GModule:
    """An abelian group ``carrier`` with ``group`` acting by integer matrices.

    ``action`` maps every group element index to an ``n x n`` matrix; the
    actions must satisfy the module axioms modulo the carrier relations.
    """

    def __init__(self, group: FiniteGroup, carrier: FgAbGroup,
                 action: Mapping[int, IntMatrix] | Sequence[IntMatrix], validate: bool = True):
        n = carrier.ambient_rank
        if isinstance(action, Mapping):
            action = [action[g] if g in action else None for g in group.elements()]
        action = [a if a is None or isinstance(a, IntMatrix) else IntMatrix.from_rows(a, n)
                  for a in action]
        if len(action) != group.order or any(a is None for a in action):
            raise MalformedInputError("action must be given for every group element")
        for g, a in enumerate(action):
            if a.shape != (n, n):
                raise MalformedInputError(f"action({g}) has shape {a.shape}, expected {(n, n)}")
        self.group = group
        self.carrier = carrier
        self.action: tuple[IntMatrix, ...] = tuple(action)
        self._coinv: dict[tuple[int, ...], CoinvariantData] = {}
        if validate:
            bad = validate_action(self)
            if bad:
                raise MalformedInputError("invalid action: " + "; ".join(str(v) for v in bad[:5]))

    @classmethod
    def from_generator_action(cls, group: FiniteGroup, carrier: FgAbGroup,
                              gen_action: Sequence[IntMatrix]) -> GModule:
        """Synthesize per-element matrices from generator matrices.

        Needs a group built by :meth:`FiniteGroup.from_permutations`.
        """
        if group.words is None:
            raise MalformedInputError("generator-indexed action needs a group given by generators")
        n = carrier.ambient_rank
        mats = [a if isinstance(a, IntMatrix) else IntMatrix.from_rows(a, n) for a in gen_action]
        action = []
        for g in group.elements():
            m = IntMatrix.identity(n)
            for k in reversed(group.words[g]):
                m = mats[k] @ m
            action.append(m)
        # validation also checks that the synthesized action respects the table
        return cls(group, carrier, action)

    @classmethod
    def trivial(cls, group: FiniteGroup, carrier: FgAbGroup) -> GModule:
        ident = IntMatrix.identity(carrier.ambient_rank)
        return cls(group, carrier, [ident] * group.order, validate=False)

    @property
    def rank(self) -> int:
        return self.carrier.ambient_rank

    def act(self, g: int, v: Sequence[int]) -> Vector:
        return self.action[g].apply(v)

    def augmentation_vectors(self, H: SubgroupOfG, elements: Iterable[int] | None = None) -> list[Vector]:
        """γ·e_i - e_i over γ in ``elements`` (default: all of H) and basis vectors e_i."""
        n = self.rank
        out = []
        for h in (H.elements if elements is None else elements):
            if h == 0:
                continue
            a = self.action[h]
            for i in range(n):
                col = list(a.column(i))
                col[i] -= 1
                if any(col):
                    out.append(tuple(col))
        return out

    def coinvariants(self, H: SubgroupOfG | None = None) -> CoinvariantData:
        return coinvariants(self, H)

    def restrict_group(self, H: SubgroupOfG) -> GModule:
        """The same carrier as a module over the subgroup H (reindexed 0..|H|-1)."""
        idx = {h: k for k, h in enumerate(H.elements)}
        table = [[idx[self.group.mul(a, b)] for b in H.elements] for a in H.elements]
        return GModule(FiniteGroup(table), self.carrier, [self.action[h] for h in H.elements],
                       validate=False)

    def __repr__(self):
        return f"GModule({self.carrier} under {self.group})"


def validate_action(M: GModule) -> list[ActionViolation]:
    """All violations of the module axioms; empty when M is a valid module."""
    G, C, n = M.group, M.carrier, M.rank
    out = []
    ident = IntMatrix.identity(n)
    if any(not C.in_relations(c) for c in (M.action[0] - ident).columns()):
        out.append(ActionViolation("identity", ()))
    for g in G.elements():
        for j, r in enumerate(C.relations.columns()):
            if not C.in_relations(M.act(g, r)):
                out.append(ActionViolation("relation", (g, j)))
    if any(v.kind == "relation" for v in out):
        return out
    for g in G.elements():
        for h in G.elements():
            d = M.action[g] @ M.action[h] - M.action[G.mul(g, h)]
            if any(not C.in_relations(c) for c in d.columns()):
                out.append(ActionViolation("product", (g, h)))
    return out


def coinvariants(M: GModule, H: SubgroupOfG | None = None, use_generators: bool = True) -> CoinvariantData:
    """M_H = carrier / ⟨h·m - m⟩.

    Relations from a generating set of H suffice, since
    gh·m - m = g·(h·m - m) + (g·m - m) and the relation span is H-stable.
    """
    H = M.group.whole() if H is None else H
    if H.parent is not M.group:
        raise MalformedInputError("subgroup of a different group")
    key = (H.elements, use_generators)
    if key in M._coinv:
        return M._coinv[key]
    elems = H.generating_set() if use_generators else H.elements
    aug = M.augmentation_vectors(H, elems)
    n = M.rank
    Q = FgAbGroup(n, M.carrier.relations.hstack(IntMatrix.from_columns(aug, n)))
    proj = Homomorphism(M.carrier, Q, IntMatrix.identity(n), check=False)
    tf, _ = Q.tf_quotient()
    data = CoinvariantData(Q, proj, Q.torsion_subgroup(), tf)
    M._coinv[key] = data
    return data


def induced_map_on_coinvariants(M: GModule, H: SubgroupOfG, K: SubgroupOfG) -> Homomorphism:
    """M_H -> M_K for H ⊆ K, the identity on ambient coordinates."""
    if not H.issubset(K):
        raise MalformedInputError(f"{H} is not contained in {K}")
    src, tgt = coinvariants(M, H).quotient, coinvariants(M, K).quotient
    return Homomorphism(src, tgt, IntMatrix.identity(M.rank), check=False)


def induced_map_on_torsion(M: GModule, H: SubgroupOfG, K: SubgroupOfG) -> Subgroup:
    """Image of M_{H,tors} in M_K under the induced map (lands in M_{K,tors})."""
    f = induced_map_on_coinvariants(M, H, K)
    return f.image_of(coinvariants(M, H).torsion_part)


def norm_matrix(M: GModule, H: SubgroupOfG) -> IntMatrix:
    N = IntMatrix.zeros(M.rank, M.rank)
    for h in H.elements:
        N = N + M.action[h]
    return N


def tate_h_minus_1(M: GModule, H: SubgroupOfG) -> tuple[FgAbGroup, Homomorphism]:
    """Ĥ^{-1}(H, M) = ker(N_H) / ⟨h·m - m⟩ and its embedding into M_H."""
    N = Homomorphism(M.carrier, M.carrier, norm_matrix(M, H), check=False)
    ker = N.kernel()
    aug = Subgroup(M.carrier, M.augmentation_vectors(H))
    Q, lift = subquotient(ker, aug)
    target = coinvariants(M, H).quotient
    return Q, Homomorphism(Q, target, lift, check=False)


def h1_bar_complex(M: GModule, H: SubgroupOfG | None = None) -> FgAbGroup:
    """H_1(H, M) from the normalized bar complex in degrees ≤ 2.

    M is made a right module by m·g = g^{-1}m. Chains are indexed by
    non-identity elements:
        ∂1(m[g])   = m·g - m
        ∂2(m[g|h]) = (m·g)[h] - m[gh] + m[g]     (terms with identity dropped)
    """
    H = M.group.whole() if H is None else H
    G = M.group
    n = M.rank
    cells = [g for g in H.elements if g != 0]
    pos = {g: k for k, g in enumerate(cells)}
    c1 = len(cells) * n

    def right(g):
        return M.action[G.inv(g)]

    # ∂1 : C1 -> C0 = M
    cols1 = []
    for g in cells:
        a = right(g)
        for i in range(n):
            col = list(a.column(i))
            col[i] -= 1
            cols1.append(col)
    d1 = IntMatrix.from_columns(cols1, n) if cols1 else IntMatrix.zeros(n, 0)

    def block_relations(count):
        R = M.carrier.relations
        cols = []
        for k in range(count):
            for c in R.columns():
                v = [0] * (count * n)
                v[k * n:(k + 1) * n] = c
                cols.append(v)
        return IntMatrix.from_columns(cols, count * n)

    C1 = FgAbGroup(c1, block_relations(len(cells)))
    C0 = M.carrier
    cycles = Homomorphism(C1, C0, d1, check=False).kernel()

    # image of ∂2
    bounds = []
    for g, h in product(cells, repeat=2):
        a = right(g)
        gh = G.mul(g, h)
        for i in range(n):
            v = [0] * c1
            col = a.column(i)
            for r in range(n):
                v[pos[h] * n + r] += col[r]
            if gh != 0:
                v[pos[gh] * n + i] -= 1
            v[pos[g] * n + i] += 1
            bounds.append(tuple(v))
    boundaries = Subgroup(C1, bounds)
    Q, _ = subquotient(cycles, boundaries)
    return Q


def regular_representation(G: FiniteGroup) -> GModule:
    """Z[G] with g·e_x = e_{gx}."""
    n = G.order
    action = []
    for g in G.elements():
        rows = [[0] * n for _ in range(n)]
        for x in G.elements():
            rows[G.mul(g, x)][x] = 1
        action.append(IntMatrix.from_rows(rows, n))
    return GModule(G, FgAbGroup(n), action, validate=False)


def orbit_span(M: GModule, vectors: Iterable[Sequence[int]]) -> Subgroup:
    """The submodule generated by ``vectors``: span of their G-orbits."""
    gens = [M.act(g, v) for v in vectors for g in M.group.elements()]
    return Subgroup(M.carrier, gens)


def submodule(M: GModule, vectors: Iterable[Sequence[int]]) -> tuple[GModule, Homomorphism]:
    """The submodule generated by ``vectors`` as a module of its own, with its inclusion."""
    L = orbit_span(M, vectors)
    S, incl = L.as_group()
    B = incl.matrix
    action = []
    for g in M.group.elements():
        cols = [L.coords(M.act(g, b)) for b in B.columns()]
        action.append(IntMatrix.from_columns(cols, S.ambient_rank))
    return GModule(M.group, S, action, validate=False), incl


def quotient_module(M: GModule, vectors: Iterable[Sequence[int]]) -> tuple[GModule, Homomorphism]:
    """M / ⟨G·vectors⟩ on the same ambient lattice, with the projection."""
    L = orbit_span(M, vectors)
    Q = FgAbGroup(M.rank, M.carrier.relations.hstack(L.generator_matrix()))
    return (GModule(M.group, Q, M.action, validate=False),
            Homomorphism(M.carrier, Q, IntMatrix.identity(M.rank), check=False))


def direct_sum(A: GModule, B: GModule) -> GModule:
    if A.group is not B.group:
        raise MalformedInputError("direct sum of modules over different groups")
    n, m = A.rank, B.rank
    action = []
    for a, b in zip(A.action, B.action):
        rows = [list(r) + [0] * m for r in a.rows] + [[0] * n + list(r) for r in b.rows]
        action.append(IntMatrix.from_rows(rows, n + m))
    return GModule(A.group, A.carrier.direct_sum(B.carrier), action, validate=False)
