"""The six-term exact sequence attached to 0 -> B1 -> B2 -> B3 -> 0.

    (B1)_tors -> (B2)_tors -> (B3)_tors -δ-> Q/Z⊗(B1)_G -> Q/Z⊗(B2)_G -> Q/Z⊗(B3)_G -> 0

Torsion terms are presented in the Smith chart of each coinvariant group,
i.e. as (+) Z/d_i with the chart generators. Q/Z⊗(B)_G is (Q/Z)^r in the
coordinates of the torsion-free quotient; maps between these are integer
matrices acting on rational vectors modulo Z^r.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import prod
from typing import Sequence

from .abelian import FgAbGroup, Homomorphism, Subgroup
from .errors import InvariantViolation, MalformedInputError
from .gmodule import CoinvariantData, GModule, SubgroupOfG, coinvariants, h1_bar_complex
from .matrix import IntMatrix, Vector, kernel_basis, lcm, saturation_basis, smith, solve

QVector = tuple[Fraction, ...]


def mod1(v: Sequence[Fraction]) -> QVector:
    return tuple(Fraction(x) % 1 for x in v)


def _equivariance_failure(f: IntMatrix, A: GModule, B: GModule) -> int | None:
    for g in A.group.elements():
        d = B.action[g] @ f - f @ A.action[g]
        if any(not B.carrier.in_relations(c) for c in d.columns()):
            return g
    return None


class ShortExactSequence:
    """0 -> B1 -i-> B2 -j-> B3 -> 0, verified on construction."""

    def __init__(self, B1: GModule, B2: GModule, B3: GModule,
                 i: Homomorphism | IntMatrix | Sequence[Sequence[int]],
                 j: Homomorphism | IntMatrix | Sequence[Sequence[int]]):
        if not (B1.group is B2.group is B3.group):
            raise MalformedInputError("the three modules must share one group")
        i = i if isinstance(i, Homomorphism) else Homomorphism(B1.carrier, B2.carrier, _as_matrix(i, B1.rank))
        j = j if isinstance(j, Homomorphism) else Homomorphism(B2.carrier, B3.carrier, _as_matrix(j, B2.rank))
        if i.source is not B1.carrier or i.target is not B2.carrier:
            raise MalformedInputError("i must map B1 to B2")
        if j.source is not B2.carrier or j.target is not B3.carrier:
            raise MalformedInputError("j must map B2 to B3")
        g = _equivariance_failure(i.matrix, B1, B2)
        if g is not None:
            raise MalformedInputError(f"i does not commute with the action of element {g}")
        g = _equivariance_failure(j.matrix, B2, B3)
        if g is not None:
            raise MalformedInputError(f"j does not commute with the action of element {g}")
        ker_i = i.kernel()
        if not ker_i.is_trivial():
            w = next(v for v in ker_i.generators if not B1.carrier.in_relations(v))
            raise MalformedInputError(f"i is not injective: {list(w)} maps to 0")
        if not j.is_surjective():
            raise MalformedInputError("j is not surjective")
        if i.image() != j.kernel():
            raise MalformedInputError("im i != ker j")
        self.group = B1.group
        self.B = (B1, B2, B3)
        self.i = i
        self.j = j

    @classmethod
    def from_submodule(cls, B2: GModule, vectors: Sequence[Sequence[int]]) -> ShortExactSequence:
        """0 -> ⟨G·vectors⟩ -> B2 -> B2/⟨G·vectors⟩ -> 0."""
        from .gmodule import quotient_module, submodule
        B1, incl = submodule(B2, vectors)
        B3, proj = quotient_module(B2, vectors)
        return cls(B1, B2, B3, incl, proj)

    # linear systems reused by every δ evaluation

    def _aug_system(self, H: SubgroupOfG):
        key = ("aug", H.elements)
        if key not in self._cache:
            B3 = self.B[2]
            blocks = [B3.action[h] - IntMatrix.identity(B3.rank) for h in H.elements if h != 0]
            A = IntMatrix.zeros(B3.rank, 0).hstack(*blocks, B3.carrier.relations)
            self._cache[key] = (A, smith(A))
        return self._cache[key]

    def _lift_system(self):
        if "lift" not in self._cache:
            A = self.j.matrix.hstack(self.B[2].carrier.relations)
            self._cache["lift"] = (A, smith(A))
        return self._cache["lift"]

    def _sub_system(self):
        if "sub" not in self._cache:
            A = self.i.matrix.hstack(self.B[1].carrier.relations)
            self._cache["sub"] = (A, smith(A))
        return self._cache["sub"]

    @cached_property
    def _cache(self):
        return {}


def _as_matrix(m, ncols):
    return m if isinstance(m, IntMatrix) else IntMatrix.from_rows(m, ncols)


def _noisy(x: Vector, A: IntMatrix, sf, rng: random.Random | None, spread: int = 3) -> Vector:
    if rng is None:
        return x
    x = list(x)
    for k in kernel_basis(A, sf):
        c = rng.randint(-spread, spread)
        for t in range(len(x)):
            x[t] += c * k[t]
    return tuple(x)


def _solve_or_fail(A, b, sf, what):
    x = solve(A, b, sf)
    if x is None:
        raise InvariantViolation(f"{what}: linear system has no integer solution")
    return x


def delta_connect(seq: ShortExactSequence, x3: Sequence[int], H: SubgroupOfG | None = None,
                  rng: random.Random | None = None) -> QVector:
    """δ of the class of x3 ∈ (B3)_{H,tors}, as a vector in (Q/Z)^r1.

    With ``rng`` every free choice is randomized: the representative of x3,
    the multiple n, the solution y_{3,γ}, and the lifts x2, y_{2,γ}. The
    output must not change.
    """
    H = seq.group.whole() if H is None else H
    B1, B2, B3 = seq.B
    Q3 = coinvariants(B3, H).quotient
    Q1 = coinvariants(B1, H).quotient
    x3 = tuple(x3)
    n = Q3.element_order(x3)
    if n is None:
        raise MalformedInputError("δ is defined on torsion classes only")
    if rng is not None:
        for rel in Q3.relations.columns():
            c = rng.randint(-2, 2)
            x3 = tuple(a + c * b for a, b in zip(x3, rel))
        n *= rng.randint(1, 3)
    others = [h for h in H.elements if h != 0]
    m3 = B3.rank

    A, sf = seq._aug_system(H)
    sol = _noisy(_solve_or_fail(A, tuple(n * a for a in x3), sf, "n·x3 in augmentation"), A, sf, rng)
    ys3 = [sol[k * m3:(k + 1) * m3] for k in range(len(others))]

    L, lsf = seq._lift_system()

    def lift(v):
        s = _noisy(_solve_or_fail(L, v, lsf, "lift through j"), L, lsf, rng)
        return s[:B2.rank]

    x2 = lift(x3)
    z2 = [n * a for a in x2]
    for h, y3 in zip(others, ys3):
        y2 = lift(y3)
        hy = B2.act(h, y2)
        for t in range(B2.rank):
            z2[t] -= hy[t] - y2[t]

    I, isf = seq._sub_system()
    z1 = _solve_or_fail(I, z2, isf, "z2 in image of i")[:B1.rank]
    return mod1(Fraction(c, n) for c in Q1.free_coords(z1))


@dataclass
class Level:
    """Coinvariant data of one B_k together with its Smith chart pieces."""

    data: CoinvariantData
    torsion: FgAbGroup
    rank: int

    @property
    def quotient(self) -> FgAbGroup:
        return self.data.quotient

    @classmethod
    def of(cls, M: GModule, H: SubgroupOfG) -> Level:
        data = coinvariants(M, H)
        Q = data.quotient
        return cls(data, FgAbGroup.diagonal(Q.invariant_factors), Q.free_rank)


def torsion_map(src: Level, tgt: Level, F: IntMatrix) -> Homomorphism:
    cols = [tgt.quotient.torsion_coords(F.apply(t)) for t in src.quotient.torsion_generators()]
    m = IntMatrix.from_columns(cols, tgt.torsion.ambient_rank)
    return Homomorphism(src.torsion, tgt.torsion, m)


def tensor_map(src: Level, tgt: Level, F: IntMatrix) -> IntMatrix:
    cols = [tgt.quotient.free_coords(F.apply(f)) for f in src.quotient.free_generators()]
    return IntMatrix.from_columns(cols, tgt.rank)


def apply_tensor(T: IntMatrix, v: Sequence[Fraction]) -> QVector:
    return mod1(sum((T[r, c] * v[c] for c in range(T.ncols)), Fraction(0)) for r in range(T.nrows))


@dataclass
class SixTermSequence:
    seq: ShortExactSequence
    subgroup: SubgroupOfG
    levels: tuple[Level, Level, Level]
    i_tors: Homomorphism
    j_tors: Homomorphism
    delta: list[QVector]  # one column per torsion generator of (B3)_tors
    i_tensor: IntMatrix
    j_tensor: IntMatrix

    @property
    def torsion_groups(self) -> tuple[FgAbGroup, FgAbGroup, FgAbGroup]:
        return tuple(lv.torsion for lv in self.levels)

    @property
    def tensor_ranks(self) -> tuple[int, int, int]:
        return tuple(lv.rank for lv in self.levels)

    def delta_of(self, coords: Sequence[int]) -> QVector:
        """δ of the torsion element with the given chart coordinates."""
        r1 = self.levels[0].rank
        out = [Fraction(0)] * r1
        for c, col in zip(coords, self.delta):
            for k in range(r1):
                out[k] += c * col[k]
        return mod1(out)

    def delta_matrix(self) -> list[list[Fraction]]:
        r1 = self.levels[0].rank
        return [[col[k] for col in self.delta] for k in range(r1)]

    def with_delta(self, delta: list[QVector]) -> SixTermSequence:
        return SixTermSequence(self.seq, self.subgroup, self.levels, self.i_tors, self.j_tors,
                               delta, self.i_tensor, self.j_tensor)


def build_six_term(seq: ShortExactSequence, H: SubgroupOfG | None = None) -> SixTermSequence:
    H = seq.group.whole() if H is None else H
    levels = tuple(Level.of(M, H) for M in seq.B)
    i_tors = torsion_map(levels[0], levels[1], seq.i.matrix)
    j_tors = torsion_map(levels[1], levels[2], seq.j.matrix)
    delta = [delta_connect(seq, t, H) for t in levels[2].quotient.torsion_generators()]
    return SixTermSequence(seq, H, levels, i_tors, j_tors, delta,
                           tensor_map(levels[0], levels[1], seq.i.matrix),
                           tensor_map(levels[1], levels[2], seq.j.matrix))


# ---------------------------------------------------------------------------
# exactness
# ---------------------------------------------------------------------------


@dataclass
class NodeResult:
    node: str
    exact: bool
    witness: list | None = None
    note: str = ""


@dataclass
class ExactnessReport:
    nodes: list[NodeResult]
    composites_zero: dict[str, bool]
    level: int
    stated_level: int

    @property
    def exact(self) -> bool:
        return all(n.exact for n in self.nodes) and all(self.composites_zero.values())

    def failing(self) -> list[NodeResult]:
        return [n for n in self.nodes if not n.exact]


def _mismatch(A: Subgroup, B: Subgroup):
    """A generator of one subgroup missing from the other, or None if equal."""
    for g in B.generators:
        if not A.contains_vector(g):
            return list(A.parent.reduce(g))
    for g in A.generators:
        if not B.contains_vector(g):
            return list(A.parent.reduce(g))
    return None


def _largest_elementary_divisor(T: IntMatrix) -> int:
    s = smith(T)
    return s.D[s.rank - 1, s.rank - 1] if s.rank else 1


def check_exactness(st: SixTermSequence) -> ExactnessReport:
    """Verify im = ker at the four interior nodes and the final surjection.

    Divisible terms are compared on their e-torsion, where e is the product
    of |H| with all invariant factors of the three coinvariant groups,
    enlarged by the largest elementary divisors of the tensor-level matrices
    so that any finite kernel discrepancy is visible at that level. The
    divisible parts are compared through ranks over Q.
    """
    T1, T2, T3 = st.torsion_groups
    r1, r2, r3 = st.tensor_ranks
    Ti, Tj = st.i_tensor, st.j_tensor
    stated = len(st.subgroup) * prod(prod(lv.quotient.invariant_factors) for lv in st.levels)
    e = lcm(stated, _largest_elementary_divisor(Ti), _largest_elementary_divisor(Tj))
    for col, d in zip(st.delta, T3.invariant_factors):
        for x in col:
            e = lcm(e, x.denominator)
    nodes = []

    # (B2)_tors: im i_* = ker j_*
    w = _mismatch(st.i_tors.image(), st.j_tors.kernel())
    nodes.append(NodeResult("(B2)_tors", w is None, w))

    # (B3)_tors: im j_* = ker δ
    L = lcm(*(x.denominator for col in st.delta for x in col))
    Zl = FgAbGroup.diagonal([L] * r1)
    D = IntMatrix.from_columns([[int(x * L) for x in col] for col in st.delta], r1) \
        if st.delta else IntMatrix.zeros(r1, 0)
    delta_hom = Homomorphism(T3, Zl, D, check=False)
    well_defined = all(Zl.in_relations(delta_hom.matrix.apply(c)) for c in T3.relations.columns())
    w = _mismatch(st.j_tors.image(), delta_hom.kernel())
    nodes.append(NodeResult("(B3)_tors", w is None and well_defined, w,
                            "" if well_defined else "δ is not defined on the torsion presentation"))

    # Q/Z⊗(B1): im δ = ker i_*
    rank_i = smith(Ti).rank
    if rank_i < r1:
        k = kernel_basis(Ti)[0]
        wit = [str(Fraction(c, 2 * e)) for c in k]
        nodes.append(NodeResult("Q/Z⊗(B1)_G", False, wit, "kernel of i_* is not finite"))
    else:
        Ze1, Ze2 = FgAbGroup.diagonal([e] * r1), FgAbGroup.diagonal([e] * r2)
        ker = Homomorphism(Ze1, Ze2, Ti, check=False).kernel()
        img = Subgroup(Ze1, [[int(x * e) for x in col] for col in st.delta])
        w = _mismatch(img, ker)
        nodes.append(NodeResult("Q/Z⊗(B1)_G", w is None,
                                None if w is None else [str(Fraction(c, e)) for c in w]))

    # Q/Z⊗(B2): im i_* = ker j_*
    rank_j = smith(Tj).rank
    if rank_i + rank_j != r2:
        nodes.append(NodeResult("Q/Z⊗(B2)_G", False, None,
                                f"ranks over Q: rank i_* = {rank_i}, rank j_* = {rank_j}, r2 = {r2}"))
    else:
        Ze2, Ze3 = FgAbGroup.diagonal([e] * r2), FgAbGroup.diagonal([e] * r3)
        ker = Homomorphism(Ze2, Ze3, Tj, check=False).kernel()
        img = Subgroup(Ze2, saturation_basis(Ti.columns(), r2))
        w = _mismatch(img, ker)
        nodes.append(NodeResult("Q/Z⊗(B2)_G", w is None,
                                None if w is None else [str(Fraction(c, e)) for c in w]))

    nodes.append(NodeResult("Q/Z⊗(B3)_G -> 0", rank_j == r3, None,
                            "" if rank_j == r3 else "j_* is not surjective"))

    composites = {
        "j_* ∘ i_* (torsion)": st.j_tors.compose(st.i_tors).is_zero(),
        "δ ∘ j_*": all(not any(st.delta_of(st.j_tors.matrix.column(c))) for c in range(T2.ambient_rank)),
        "i_* ∘ δ": all(not any(apply_tensor(Ti, col)) for col in st.delta),
        "j_* ∘ i_* (tensor)": (Tj @ Ti).is_zero() if r1 and r3 else True,
    }
    return ExactnessReport(nodes, composites, e, stated)


# ---------------------------------------------------------------------------
# ladders between six-term sequences
# ---------------------------------------------------------------------------


@dataclass
class LadderReport:
    squares: dict[str, bool]
    torsion_maps: tuple[Homomorphism, Homomorphism, Homomorphism]
    tensor_maps: tuple[IntMatrix, IntMatrix, IntMatrix]

    @property
    def commutes(self) -> bool:
        return all(self.squares.values())


def ladder(st_a: SixTermSequence, st_b: SixTermSequence,
           maps: Sequence[IntMatrix] | None = None) -> LadderReport:
    """Vertical maps between two six-term rows and the commutation of each square.

    ``maps`` are carrier matrices B_k^a -> B_k^b forming a morphism of short
    exact sequences; omitted means identities (same sequence, larger group).
    """
    if not set(st_a.subgroup.elements) <= set(st_b.subgroup.elements):
        raise MalformedInputError("the upper row must use a subgroup of the lower row's group")
    if maps is None:
        maps = [IntMatrix.identity(M.rank) for M in st_a.seq.B]
    la, lb = st_a.levels, st_b.levels
    V = tuple(torsion_map(la[k], lb[k], maps[k]) for k in range(3))
    W = tuple(tensor_map(la[k], lb[k], maps[k]) for k in range(3))
    squares = {
        "i_* (torsion)": V[1].compose(st_a.i_tors).equals(st_b.i_tors.compose(V[0])),
        "j_* (torsion)": V[2].compose(st_a.j_tors).equals(st_b.j_tors.compose(V[1])),
        "δ": all(
            st_b.delta_of(V[2].matrix.column(c)) == apply_tensor(W[0], st_a.delta[c])
            for c in range(len(st_a.delta))),
        "i_* (tensor)": (W[1] @ st_a.i_tensor) == (st_b.i_tensor @ W[0]),
        "j_* (tensor)": (W[2] @ st_a.j_tensor) == (st_b.j_tensor @ W[1]),
    }
    return LadderReport(squares, V, W)


# ---------------------------------------------------------------------------
# Tor / H_1 oracles
# ---------------------------------------------------------------------------


def tor1_as_torsion_coinvariants(M: GModule, H: SubgroupOfG | None = None) -> FgAbGroup:
    """Tor_1^{Z[G]}(Q/Z, M) ≅ (M)_{G,tors}, returned as a group."""
    G, _ = coinvariants(M, H).torsion_part.as_group()
    return G


def rationalization_kernel(M: GModule, H: SubgroupOfG | None = None) -> Subgroup:
    """ker[(M)_G -> Q⊗(M)_G], computed without the Smith chart.

    An element dies over Q iff some nonzero multiple lies in the relation
    lattice, i.e. iff it lies in the Q-saturation of that lattice.
    """
    Q = coinvariants(M, H).quotient
    return Subgroup(Q, saturation_basis(Q.relations.columns(), Q.ambient_rank))


def verify_h1_killed(M: GModule, H: SubgroupOfG | None = None) -> bool:
    """|H| · H_1(H, M) = 0, computed through the bar complex."""
    H = M.group.whole() if H is None else H
    h1 = h1_bar_complex(M, H)
    return h1.is_finite() and all(len(H) % d == 0 for d in h1.invariant_factors)
