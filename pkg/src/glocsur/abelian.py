"""Finitely generated abelian groups as cokernels Z^n / colspan(R).

Groups, their elements, subgroups and homomorphisms all live on the
ambient lattice Z^n. A subgroup is tracked through its full preimage
lattice (generators + relations), which makes containment, equality and
intersection plain lattice questions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod
from typing import Iterable, Sequence

from .errors import MalformedInputError
from .matrix import (
    IntMatrix,
    SmithForm,
    Vector,
    hermite_columns,
    hermite_pivots,
    kernel_basis,
    lcm,
    reduce_mod_lattice,
    smith,
    solve,
)


def _vec(v, n):
    v = tuple(int(x) for x in v)
    if len(v) != n:
        raise MalformedInputError(f"vector of length {len(v)} in a group of ambient rank {n}")
    return v


class FgAbGroup:
    """The group Z^n / colspan(relations).

    >>> G = FgAbGroup(2, [[2], [0]])
    >>> G.canonical()
    (1, [2])
    >>> str(G)
    'Z + Z/2'
    """

    def __init__(self, ambient_rank: int, relations: IntMatrix | Sequence[Sequence[int]] | None = None):
        n = int(ambient_rank)
        if n < 0:
            raise MalformedInputError("negative ambient rank")
        if relations is None:
            relations = IntMatrix.zeros(n, 0)
        elif not isinstance(relations, IntMatrix):
            rows = [list(r) for r in relations]
            if len(rows) != n:
                raise MalformedInputError(f"relation matrix has {len(rows)} rows, expected {n}")
            ncols = len(rows[0]) if rows else 0
            relations = IntMatrix.from_rows(rows, ncols)
        if relations.nrows != n:
            raise MalformedInputError(f"relation matrix has {relations.nrows} rows, expected {n}")
        self.ambient_rank = n
        self.relations = relations

    @classmethod
    def from_relation_columns(cls, n: int, cols: Iterable[Sequence[int]]) -> FgAbGroup:
        return cls(n, IntMatrix.from_columns([_vec(c, n) for c in cols], n))

    @classmethod
    def cyclic(cls, order: int) -> FgAbGroup:
        """Z/order, with order 0 meaning Z."""
        return cls(1, [[order]]) if order else cls(1)

    @classmethod
    def diagonal(cls, factors: Sequence[int]) -> FgAbGroup:
        n = len(factors)
        return cls(n, IntMatrix.diagonal(factors))

    # -- normal forms --------------------------------------------------

    @cached_property
    def smith(self) -> SmithForm:
        return smith(self.relations)

    @cached_property
    def _lattice(self) -> tuple[Vector, ...]:
        return hermite_columns(self.relations.columns(), self.ambient_rank)

    @cached_property
    def _pivots(self) -> list[int]:
        return hermite_pivots(self._lattice)

    @cached_property
    def free_rank(self) -> int:
        return self.ambient_rank - self.smith.rank

    @cached_property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.smith.diagonal[: self.smith.rank] if d != 1]

    def canonical(self) -> tuple[int, list[int]]:
        return self.free_rank, list(self.invariant_factors)

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def order(self) -> int | None:
        """Group order, or ``None`` when infinite."""
        return prod(self.invariant_factors) if self.is_finite() else None

    def exponent(self) -> int | None:
        if not self.is_finite():
            return None
        return lcm(*self.invariant_factors)

    def is_isomorphic(self, other: FgAbGroup) -> bool:
        return self.canonical() == other.canonical()

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FgAbGroup({self})"

    # -- Smith chart: coordinates in a Z^r + (+) Z/d_i splitting ---------

    @cached_property
    def _torsion_slots(self) -> list[int]:
        s = self.smith
        return [i for i in range(s.rank) if s.D[i, i] != 1]

    def torsion_generators(self) -> list[Vector]:
        """Ambient lifts of the generators of the cyclic summands Z/d_i."""
        return [self.smith.U_inv.column(i) for i in self._torsion_slots]

    def free_generators(self) -> list[Vector]:
        """Ambient lifts of a basis of the torsion-free quotient."""
        s = self.smith
        return [s.U_inv.column(i) for i in range(s.rank, self.ambient_rank)]

    def torsion_coords(self, v: Sequence[int]) -> Vector:
        """Coordinates of ``v`` in the torsion summands, each reduced mod d_i."""
        c = self.smith.U.apply(v)
        return tuple(c[i] % self.smith.D[i, i] for i in self._torsion_slots)

    def free_coords(self, v: Sequence[int]) -> Vector:
        """Image of ``v`` in the torsion-free quotient Z^r."""
        c = self.smith.U.apply(v)
        return tuple(c[self.smith.rank:])

    # -- elements ------------------------------------------------------

    def reduce(self, v: Sequence[int]) -> Vector:
        return reduce_mod_lattice(_vec(v, self.ambient_rank), self._lattice, self._pivots)

    def in_relations(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def element(self, v: Sequence[int]) -> Element:
        return Element(self, _vec(v, self.ambient_rank))

    def zero(self) -> Element:
        return self.element((0,) * self.ambient_rank)

    def basis_elements(self) -> list[Element]:
        n = self.ambient_rank
        return [self.element(tuple(int(i == j) for j in range(n))) for i in range(n)]

    def element_order(self, v: Sequence[int]) -> int | None:
        if any(self.free_coords(v)):
            return None
        out = 1
        for c, i in zip(self.torsion_coords(v), self._torsion_slots):
            d = self.smith.D[i, i]
            out = lcm(out, d // gcd(c, d))
        return out

    def enumerate(self) -> list[Vector]:
        """All canonical representatives; finite groups only (test scale)."""
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        gens = self.torsion_generators()
        reps = [tuple([0] * self.ambient_rank)]
        for g, d in zip(gens, self.invariant_factors):
            reps = [tuple(r[i] + k * g[i] for i in range(self.ambient_rank)) for r in reps for k in range(d)]
        return [self.reduce(r) for r in reps]

    # -- structure -----------------------------------------------------

    def whole(self) -> Subgroup:
        return Subgroup(self, [e.vec for e in self.basis_elements()])

    def trivial_subgroup(self) -> Subgroup:
        return Subgroup(self, [])

    def torsion_subgroup(self) -> Subgroup:
        return Subgroup(self, self.torsion_generators())

    def tf_quotient(self) -> tuple[FgAbGroup, Homomorphism]:
        return self.quotient(self.torsion_subgroup())

    def quotient(self, H: Subgroup) -> tuple[FgAbGroup, Homomorphism]:
        if H.parent is not self:
            raise MalformedInputError("quotient by a subgroup of a different group")
        Q = FgAbGroup(self.ambient_rank, self.relations.hstack(H.generator_matrix()))
        return Q, Homomorphism(self, Q, IntMatrix.identity(self.ambient_rank))

    def identity_map(self) -> Homomorphism:
        return Homomorphism(self, self, IntMatrix.identity(self.ambient_rank))

    def direct_sum(self, other: FgAbGroup) -> FgAbGroup:
        n, m = self.ambient_rank, other.ambient_rank
        R = IntMatrix.from_rows(
            [list(r) + [0] * other.relations.ncols for r in self.relations.rows]
            + [[0] * self.relations.ncols + list(r) for r in other.relations.rows],
            self.relations.ncols + other.relations.ncols,
        )
        return FgAbGroup(n + m, R)


@dataclass(frozen=True, eq=False)
class Element:
    """A coset ``vec + colspan(relations)`` of a specific group."""

    group: FgAbGroup
    vec: Vector

    @cached_property
    def canonical(self) -> Vector:
        return self.group.reduce(self.vec)

    def _check(self, other):
        if not isinstance(other, Element) or other.group is not self.group:
            raise MalformedInputError("elements of different groups")

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        return self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def __add__(self, other):
        self._check(other)
        return Element(self.group, tuple(a + b for a, b in zip(self.vec, other.vec)))

    def __neg__(self):
        return Element(self.group, tuple(-a for a in self.vec))

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int):
        return Element(self.group, tuple(k * a for a in self.vec))

    def is_zero(self) -> bool:
        return not any(self.canonical)

    def order(self) -> int | None:
        return self.group.element_order(self.vec)

    def __repr__(self):
        return f"Element({list(self.canonical)} in {self.group})"


class Subgroup:
    """The subgroup of ``parent`` generated by a list of ambient vectors."""

    def __init__(self, parent: FgAbGroup, generators: Iterable[Sequence[int] | Element]):
        gens = []
        for g in generators:
            if isinstance(g, Element):
                if g.group is not parent:
                    raise MalformedInputError("generator from a different group")
                g = g.vec
            gens.append(_vec(g, parent.ambient_rank))
        self.parent = parent
        self.generators: tuple[Vector, ...] = tuple(gens)

    def generator_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.generators, self.parent.ambient_rank)

    @cached_property
    def lattice(self) -> tuple[Vector, ...]:
        """Hermite basis of generators + parent relations (saturated form)."""
        return hermite_columns(list(self.generators) + self.parent.relations.columns(),
                               self.parent.ambient_rank)

    @cached_property
    def _pivots(self):
        return hermite_pivots(self.lattice)

    def _same_parent(self, other: Subgroup):
        if other.parent is not self.parent:
            raise MalformedInputError("subgroups of different parent groups")

    def contains_vector(self, v: Sequence[int]) -> bool:
        r = reduce_mod_lattice(_vec(v, self.parent.ambient_rank), self.lattice, self._pivots)
        return not any(r)

    def contains(self, other: Subgroup) -> bool:
        """True iff ``other`` is a subgroup of ``self``."""
        self._same_parent(other)
        return all(self.contains_vector(g) for g in other.generators)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        self._same_parent(other)
        return self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def is_trivial(self) -> bool:
        return all(self.parent.in_relations(g) for g in self.generators)

    def join(self, other: Subgroup) -> Subgroup:
        self._same_parent(other)
        return Subgroup(self.parent, self.generators + other.generators)

    def intersect(self, other: Subgroup) -> Subgroup:
        self._same_parent(other)
        n = self.parent.ambient_rank
        A, B = self.lattice, other.lattice
        if not A or not B:
            return Subgroup(self.parent, [])
        M = IntMatrix.from_columns(list(A) + [tuple(-x for x in b) for b in B], n)
        gens = []
        for k in kernel_basis(M):
            gens.append(tuple(sum(k[j] * A[j][i] for j in range(len(A))) for i in range(n)))
        return Subgroup(self.parent, gens)

    def as_group(self) -> tuple[FgAbGroup, Homomorphism]:
        """The subgroup as a group of its own, with its inclusion into ``parent``."""
        return self._as_group

    @cached_property
    def _as_group(self):
        n = self.parent.ambient_rank
        basis = self.lattice
        Bm = IntMatrix.from_columns(basis, n)
        coords = [self._coords(r, Bm) for r in self.parent.relations.columns()]
        G = FgAbGroup(len(basis), IntMatrix.from_columns(coords, len(basis)))
        return G, Homomorphism(G, self.parent, Bm, check=False)

    def _coords(self, v, Bm):
        x = solve(Bm, v, self._basis_smith)
        if x is None:
            raise MalformedInputError("vector is not in the subgroup lattice")
        return x

    @cached_property
    def _basis_smith(self):
        return smith(IntMatrix.from_columns(self.lattice, self.parent.ambient_rank))

    def coords(self, v: Sequence[int]) -> Vector:
        """Coordinates of an ambient vector of this subgroup in the ``as_group`` basis."""
        return self._coords(v, IntMatrix.from_columns(self.lattice, self.parent.ambient_rank))

    def canonical(self) -> tuple[int, list[int]]:
        return self.as_group()[0].canonical()

    def order(self) -> int | None:
        return self.as_group()[0].order()

    def __repr__(self):
        return f"Subgroup({self.as_group()[0]} in {self.parent})"


def subquotient(A: Subgroup, B: Subgroup) -> tuple[FgAbGroup, IntMatrix]:
    """The group A/B for B ⊆ A, and the matrix sending its ambient lattice
    into the parent's ambient lattice (a lift of the inclusion)."""
    if not A.contains(B):
        raise MalformedInputError("subquotient A/B needs B ⊆ A")
    G, incl = A.as_group()
    extra = [A.coords(b) for b in B.generators]
    Q = FgAbGroup(G.ambient_rank, G.relations.hstack(IntMatrix.from_columns(extra, G.ambient_rank)))
    return Q, incl.matrix


class Homomorphism:
    """A map ``source -> target`` given by an integer matrix on ambient lattices.

    Construction checks that source relations land in the target relation
    lattice, which is exactly well-definedness on cosets.
    """

    def __init__(self, source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix | Sequence[Sequence[int]],
                 check: bool = True):
        if not isinstance(matrix, IntMatrix):
            matrix = IntMatrix.from_rows(matrix, source.ambient_rank)
        if matrix.shape != (target.ambient_rank, source.ambient_rank):
            raise MalformedInputError(
                f"map matrix has shape {matrix.shape}, expected "
                f"{(target.ambient_rank, source.ambient_rank)}")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            for j, r in enumerate(source.relations.columns()):
                if not target.in_relations(matrix.apply(r)):
                    raise MalformedInputError(f"map is not well defined: relation column {j} "
                                              "does not map into the target relations")

    def __call__(self, x):
        if isinstance(x, Element):
            if x.group is not self.source:
                raise MalformedInputError("element is not in the source group")
            x = x.vec
        return self.target.element(self.matrix.apply(x))

    def compose(self, first: Homomorphism) -> Homomorphism:
        """``self ∘ first``."""
        if first.target is not self.source:
            raise MalformedInputError("composition of non-composable maps")
        return Homomorphism(first.source, self.target, self.matrix @ first.matrix, check=False)

    def image(self) -> Subgroup:
        return Subgroup(self.target, self.matrix.columns())

    def image_of(self, H: Subgroup) -> Subgroup:
        if H.parent is not self.source:
            raise MalformedInputError("subgroup is not in the source group")
        return Subgroup(self.target, [self.matrix.apply(g) for g in H.generators])

    def kernel(self) -> Subgroup:
        n = self.source.ambient_rank
        M = self.matrix.hstack(self.target.relations)
        return Subgroup(self.source, [k[:n] for k in kernel_basis(M)])

    def is_injective(self) -> bool:
        return self.kernel().is_trivial()

    def is_surjective(self) -> bool:
        return self.image() == self.target.whole()

    def is_zero(self) -> bool:
        return self.image().is_trivial()

    def equals(self, other: Homomorphism) -> bool:
        """Equality as maps of groups (matrices may differ by relations)."""
        if self.source is not other.source or self.target is not other.target:
            return False
        d = self.matrix - other.matrix
        return all(self.target.in_relations(c) for c in d.columns())

    def __repr__(self):
        return f"Homomorphism({self.source} -> {self.target}, {self.matrix.tolist()})"
