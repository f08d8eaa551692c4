"""The surjectivity criterion for the localization map and the group Ч¹_S.

Every place contributes a subgroup im λ_v of the torsion coinvariants
M_{G,tors}:

* finite place: the image of M_{G_w,Tors} under M_{G_w} -> M_G,
* real place: the image of Ĥ^{-1}(G_w, M) under the same map,
* complex place: 0.

For a set of places the images are joined. loc_S is surjective exactly
when im Σ_S ⊆ im Σ_{S^c}, and Ч¹_S ≅ im Σ_S / (im Σ_S ∩ im Σ_{S^c}).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .abelian import FgAbGroup, Subgroup, subquotient
from .errors import InvariantViolation, MalformedInputError
from .gmodule import GModule, SubgroupOfG, coinvariants, induced_map_on_torsion, tate_h_minus_1
from .matrix import Vector


class PlaceKind(str, enum.Enum):
    FINITE = "finite"
    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True)
class PlaceSpec:
    id: str
    kind: PlaceKind
    decomp: SubgroupOfG

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", PlaceKind(self.kind))
        except ValueError:
            raise MalformedInputError(f"place {self.id!r}: unknown kind {self.kind!r}") from None
        if self.kind is PlaceKind.COMPLEX and not self.decomp.is_trivial():
            raise MalformedInputError(f"complex place {self.id!r} must have trivial decomposition group")
        if self.kind is PlaceKind.REAL and len(self.decomp) != 2:
            raise MalformedInputError(
                f"real place {self.id!r} needs a decomposition group of order 2, "
                f"got order {len(self.decomp)}")


@dataclass(frozen=True)
class PlaceSet:
    """Explicit places plus an optional symbolic tail.

    The tail is a list of cyclic subgroups, one per conjugacy class, each
    standing for the infinitely many unlisted finite places having that
    decomposition group.
    """

    explicit: tuple[str, ...]
    symbolic_tail: tuple[SubgroupOfG, ...] | None = None

    def has_tail(self) -> bool:
        return bool(self.symbolic_tail)


class Side(str, enum.Enum):
    S = "S"
    COMPLEMENT = "S^c"


class LocalizationProblem:
    """M with its group action, the declared places, and the split S / S^c.

    Declared places not listed in ``S`` form the explicit part of S^c. At
    most one side carries a symbolic tail.
    """

    def __init__(self, module: GModule, places: Sequence[PlaceSpec], S: Iterable[str],
                 S_tail: Sequence[SubgroupOfG] | None = None,
                 complement_tail: Sequence[SubgroupOfG] | None = None):
        ids = [p.id for p in places]
        if len(set(ids)) != len(ids):
            raise MalformedInputError("duplicate place ids")
        S = tuple(S)
        if len(set(S)) != len(S):
            raise MalformedInputError("duplicate ids in S")
        for s in S:
            if s not in ids:
                raise MalformedInputError(f"S references unknown place {s!r}")
        for p in places:
            if p.decomp.parent is not module.group:
                raise MalformedInputError(f"decomposition group of {p.id!r} is not a subgroup of the module's group")
        if S_tail and complement_tail:
            raise MalformedInputError("only one of S and its complement may carry the symbolic tail")
        for H in list(S_tail or []) + list(complement_tail or []):
            if H.parent is not module.group:
                raise MalformedInputError("symbolic tail subgroup from a different group")
            if not any(module.group.generated([h]).elements == H.elements for h in H.elements):
                raise MalformedInputError(f"symbolic tail entry {list(H.elements)} is not cyclic")
        self.module = module
        self.places = {p.id: p for p in places}
        self.S = PlaceSet(S, tuple(S_tail) if S_tail is not None else None)
        self.S_complement = PlaceSet(tuple(i for i in ids if i not in S),
                                     tuple(complement_tail) if complement_tail is not None else None)

    def side(self, side: Side | str) -> PlaceSet:
        return self.S if Side(side) is Side.S else self.S_complement

    def place(self, pid: str) -> PlaceSpec:
        try:
            return self.places[pid]
        except KeyError:
            raise MalformedInputError(f"unknown place {pid!r}") from None

    @cached_property
    def global_coinvariants(self) -> FgAbGroup:
        return coinvariants(self.module).quotient

    @cached_property
    def global_torsion(self) -> Subgroup:
        return coinvariants(self.module).torsion_part

    def with_split(self, S: Iterable[str], S_tail=None, complement_tail=None) -> LocalizationProblem:
        return LocalizationProblem(self.module, list(self.places.values()), S, S_tail, complement_tail)


def image_for_decomposition(problem: LocalizationProblem, kind: PlaceKind, H: SubgroupOfG) -> Subgroup:
    """im λ for a place of the given kind with decomposition group H."""
    M = problem.module
    G = problem.global_coinvariants
    kind = PlaceKind(kind)
    if kind is PlaceKind.COMPLEX:
        return G.trivial_subgroup()
    if kind is PlaceKind.FINITE:
        img = induced_map_on_torsion(M, H, M.group.whole())
        return Subgroup(G, img.generators)
    if len(H) != 2:
        raise MalformedInputError(f"real place needs a decomposition group of order 2, got {len(H)}")
    Q, emb = tate_h_minus_1(M, H)
    return Subgroup(G, [emb.matrix.apply(e.vec) for e in Q.basis_elements()])


def im_lambda(problem: LocalizationProblem, place: PlaceSpec | str) -> Subgroup:
    if isinstance(place, str):
        place = problem.place(place)
    return image_for_decomposition(problem, place.kind, place.decomp)


def im_sigma(problem: LocalizationProblem, side: Side | str) -> Subgroup:
    ps = problem.side(side)
    out = problem.global_coinvariants.trivial_subgroup()
    for pid in ps.explicit:
        out = out.join(im_lambda(problem, pid))
    for H in ps.symbolic_tail or ():
        out = out.join(image_for_decomposition(problem, PlaceKind.FINITE, H))
    return out


@dataclass
class Verdict:
    surjective: bool
    obstruction: tuple[int, list[int]]
    obstruction_generators: list[Vector]
    im_sigma_S: Subgroup
    im_sigma_comp: Subgroup
    per_place: dict[str, Subgroup] = field(default_factory=dict)
    torsion_coinvariants: tuple[int, list[int]] = (0, [])

    @property
    def obstruction_order(self) -> int:
        free, factors = self.obstruction
        out = 1
        for d in factors:
            out *= d
        return out


def sha_group(problem: LocalizationProblem, sigma_S: Subgroup | None = None,
              sigma_comp: Subgroup | None = None) -> tuple[FgAbGroup, list[Vector]]:
    """Ч¹_S as im Σ_S / (im Σ_S ∩ im Σ_{S^c}), with ambient lifts of its generators."""
    sigma_S = im_sigma(problem, Side.S) if sigma_S is None else sigma_S
    sigma_comp = im_sigma(problem, Side.COMPLEMENT) if sigma_comp is None else sigma_comp
    Q, lift = subquotient(sigma_S, sigma_S.intersect(sigma_comp))
    gens = [problem.global_coinvariants.reduce(lift.apply(g)) for g in Q.torsion_generators()]
    return Q, gens


def is_surjective(problem: LocalizationProblem) -> Verdict:
    per_place = {pid: im_lambda(problem, pid) for pid in problem.places}
    G = problem.global_coinvariants

    def side_image(ps: PlaceSet):
        out = G.trivial_subgroup()
        for pid in ps.explicit:
            out = out.join(per_place[pid])
        for H in ps.symbolic_tail or ():
            out = out.join(image_for_decomposition(problem, PlaceKind.FINITE, H))
        return out

    sS, sC = side_image(problem.S), side_image(problem.S_complement)
    surjective = sC.contains(sS)
    Q, gens = sha_group(problem, sS, sC)
    if surjective != Q.is_trivial():
        raise InvariantViolation("containment criterion disagrees with the obstruction group")
    return Verdict(
        surjective=surjective,
        obstruction=Q.canonical(),
        obstruction_generators=gens,
        im_sigma_S=sS,
        im_sigma_comp=sC,
        per_place=per_place,
        torsion_coinvariants=problem.global_torsion.canonical(),
    )


def check_v0_sufficiency(problem: LocalizationProblem, v0: PlaceSpec | str) -> bool:
    """Is λ_{v0} onto M_{G,tors} for some v0 in S^c? If so loc_S is surjective."""
    pid = v0 if isinstance(v0, str) else v0.id
    if pid not in problem.S_complement.explicit:
        raise MalformedInputError(f"place {pid!r} is not in the complement of S")
    full = im_lambda(problem, pid) == problem.global_torsion
    if full and not is_surjective(problem).surjective:
        raise InvariantViolation(f"λ at {pid!r} is onto but the criterion reports non-surjective")
    return full


def complement_has_finite_place(problem: LocalizationProblem) -> bool:
    comp = problem.S_complement
    if comp.has_tail():
        return True
    return any(problem.place(p).kind is PlaceKind.FINITE for p in comp.explicit)


def semisimple_check(problem: LocalizationProblem) -> bool:
    """Finite M plus a finite place outside S; then loc_S must be surjective."""
    applies = problem.module.carrier.is_finite() and complement_has_finite_place(problem)
    if applies and not is_surjective(problem).surjective:
        raise InvariantViolation("finite M with a finite place in S^c, yet not surjective")
    return applies


def lambda_dominated(problem: LocalizationProblem, v0: PlaceSpec | str) -> bool:
    """im λ_v ⊆ im λ_{v0} for every v in S (including the symbolic tail of S)."""
    pid = v0 if isinstance(v0, str) else v0.id
    if pid not in problem.S_complement.explicit:
        raise MalformedInputError(f"place {pid!r} is not in the complement of S")
    target = im_lambda(problem, pid)
    ok = all(target.contains(im_lambda(problem, v)) for v in problem.S.explicit)
    ok = ok and all(target.contains(image_for_decomposition(problem, PlaceKind.FINITE, H))
                    for H in problem.S.symbolic_tail or ())
    if ok and not is_surjective(problem).surjective:
        raise InvariantViolation(f"all local images in S lie in im λ at {pid!r}, yet not surjective")
    return ok


def all_cyclic_tail(problem_or_group) -> tuple[SubgroupOfG, ...]:
    G = getattr(problem_or_group, "module", None)
    G = G.group if G is not None else problem_or_group
    return tuple(G.cyclic_subgroup_classes())
