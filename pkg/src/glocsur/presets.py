"""Ready-made fundamental-group modules and the radical-based predictors.

A preset hands back π₁(G) directly as a module over the finite Galois
group; no root data are involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

from sympy import isprime

from .abelian import FgAbGroup, Subgroup
from .errors import InvariantViolation, MalformedInputError
from .gmodule import FiniteGroup, GModule, SubgroupOfG, direct_sum, quotient_module, submodule
from .localization import LocalizationProblem, PlaceKind, is_surjective
from .matrix import IntMatrix
from .sixterm import ShortExactSequence, build_six_term, ladder

# -- module constructors -----------------------------------------------------


def trivial_Z(group: FiniteGroup) -> GModule:
    """Z with trivial action (π₁ of GL_n)."""
    return GModule.trivial(group, FgAbGroup(1))


def zero(group: FiniteGroup) -> GModule:
    """The zero module (π₁ of a simply connected group)."""
    return GModule.trivial(group, FgAbGroup(0))


def Z_mod_n_trivial(group: FiniteGroup, n: int) -> GModule:
    """Z/n with trivial action (π₁ of PGL_n)."""
    if n < 1:
        raise MalformedInputError("n must be positive")
    return GModule.trivial(group, FgAbGroup.cyclic(n))


def norm_one_torus(group: FiniteGroup) -> GModule:
    """Cocharacters of the norm-one torus: the augmentation ideal of Z[G].

    Basis e_g - e_1 for g != 1; for G = C2 this is Z with γ acting by -1.
    """
    n = group.order
    idx = {g: k for k, g in enumerate(range(1, n))}
    action = []
    for h in group.elements():
        rows = [[0] * (n - 1) for _ in range(n - 1)]
        for g in range(1, n):
            col = idx[g]
            hg = group.mul(h, g)
            if hg != 0:
                rows[idx[hg]][col] += 1
            if h != 0:
                rows[idx[h]][col] -= 1
        action.append(IntMatrix.from_rows(rows, n - 1))
    return GModule(group, FgAbGroup(n - 1), action)


def induced_lattice(group: FiniteGroup) -> GModule:
    """Z[G] with the regular action (cocharacters of a Weil restriction of G_m)."""
    from .gmodule import regular_representation
    return regular_representation(group)


def twist_by_subgroup_action(module: GModule, subgroup: SubgroupOfG) -> GModule:
    """Twist by the sign character with kernel ``subgroup`` (which must have index 2)."""
    G = module.group
    if 2 * len(subgroup) != G.order:
        raise MalformedInputError("twisting subgroup must have index 2")
    action = [a if g in subgroup else -a for g, a in enumerate(module.action)]
    return GModule(G, module.carrier, action)


# -- radical data -------------------------------------------------------------


@dataclass
class RadicalData:
    """M together with the image M_C of the radical's cocharacters.

    M_C must be stable under the action, and M̄ = M / M_C must be finite.
    """

    M: GModule
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        self.generators = tuple(tuple(int(x) for x in g) for g in self.generators)
        L = Subgroup(self.M.carrier, self.generators)
        for g in self.M.group.elements():
            for v in self.generators:
                if not L.contains_vector(self.M.act(g, v)):
                    raise MalformedInputError(
                        f"radical span is not stable under element {g} (vector {list(v)})")
        if not self.quotient.carrier.is_finite():
            raise MalformedInputError("M / M_C must be finite (semisimple quotient)")

    @cached_property
    def sub(self):
        return submodule(self.M, self.generators)

    @property
    def M_C(self) -> GModule:
        return self.sub[0]

    @cached_property
    def _quot(self):
        return quotient_module(self.M, self.generators)

    @property
    def quotient(self) -> GModule:
        return self._quot[0]

    def short_exact_sequence(self) -> ShortExactSequence:
        return ShortExactSequence(self.M_C, self.M, self.quotient, self.sub[1], self._quot[1])


def aut_image(rad: RadicalData, H: SubgroupOfG) -> frozenset:
    """The image of H in Aut(M_C), as canonical forms of the restricted matrices."""
    MC = rad.M_C
    C = MC.carrier
    out = set()
    for h in H.elements:
        a = MC.action[h]
        out.add(tuple(C.reduce(col) for col in a.columns()))
    return frozenset(out)


def pr_condition(rad: RadicalData, H: SubgroupOfG) -> bool:
    """im[H -> Aut M_C] == im[G -> Aut M_C]."""
    if H.parent is not rad.M.group:
        raise MalformedInputError("subgroup of a different group")
    return aut_image(rad, H) == aut_image(rad, rad.M.group.whole())


def _finite_complement_place(problem: LocalizationProblem, v0: str):
    if v0 not in problem.S_complement.explicit:
        raise MalformedInputError(f"place {v0!r} is not in the complement of S")
    place = problem.place(v0)
    if place.kind is not PlaceKind.FINITE:
        raise MalformedInputError(f"place {v0!r} is not finite")
    return place


def theorem51_predict(rad: RadicalData, problem: LocalizationProblem, v0: str) -> bool:
    """Sufficient condition through the radical; cross-checked against the criterion."""
    if rad.M is not problem.module:
        raise MalformedInputError("radical data and problem use different modules")
    place = _finite_complement_place(problem, v0)
    predicted = rad.quotient.carrier.is_finite() and pr_condition(rad, place.decomp)
    if predicted and not is_surjective(problem).surjective:
        raise InvariantViolation(f"radical condition holds at {v0!r} but the criterion says not surjective")
    return predicted


def prime_degree_check(rad: RadicalData, problem: LocalizationProblem, v0: str, p: int) -> bool:
    """Prime-degree splitting pattern: |im G| divides p and im G_w is nontrivial."""
    if not isprime(p):
        raise MalformedInputError(f"{p} is not prime")
    place = _finite_complement_place(problem, v0)
    img_G = aut_image(rad, rad.M.group.whole())
    img_w = aut_image(rad, place.decomp)
    holds = p % len(img_G) == 0 and len(img_w) > 1
    if holds:
        if img_w != img_G:
            raise InvariantViolation("prime-order image argument failed to give equal images")
        if not theorem51_predict(rad, problem, v0):
            raise InvariantViolation("prime-degree pattern holds but the radical condition does not")
    return holds


def radical_ladder(rad: RadicalData, H: SubgroupOfG):
    """Six-term rows for H and for G with the identity-induced vertical maps."""
    seq = rad.short_exact_sequence()
    top = build_six_term(seq, H)
    bottom = build_six_term(seq)
    return top, bottom, ladder(top, bottom)


# -- registry -----------------------------------------------------------------


@dataclass(frozen=True)
class Preset:
    name: str
    params: dict
    description: str
    build: Callable


def _group_param(spec) -> FiniteGroup:
    """Group parameter: ``"C<n>"``, ``"C2xC2"`` style products, or ``"S3"``."""
    if isinstance(spec, FiniteGroup):
        return spec
    spec = str(spec)
    parts = spec.split("x")
    G = None
    for part in parts:
        if part.startswith("C") and part[1:].isdigit():
            H = FiniteGroup.cyclic(int(part[1:]))
        elif part == "S3":
            H = FiniteGroup.from_permutations([[1, 0, 2], [1, 2, 0]])
        else:
            raise MalformedInputError(f"unknown group {spec!r}; use C<n>, S3, or products like C2xC2")
        G = H if G is None else FiniteGroup.direct_product(G, H)
    return G


def _sum_build(group="C2", left="norm_one_torus", right="trivial_Z", left_params=None, right_params=None):
    A = preset(left, group=group, **(left_params or {}))
    B = preset(right, group=group, **(right_params or {}))
    G = A.group
    B = GModule(G, B.carrier, B.action, validate=False)  # same table, rebind to one group object
    return direct_sum(A, B)


def _twist_build(group="C2", base="trivial_Z", kernel=(0,), base_params=None):
    M = preset(base, group=group, **(base_params or {}))
    return twist_by_subgroup_action(M, SubgroupOfG(M.group, kernel))


PRESETS: dict[str, Preset] = {
    p.name: p for p in [
        Preset("trivial_Z", {"group": "group name, e.g. C2, C3, C2xC2, S3"},
               "Z with trivial action (GL_n type)",
               lambda group="C2": trivial_Z(_group_param(group))),
        Preset("zero", {"group": "group name"}, "the zero module (simply connected type)",
               lambda group="C2": zero(_group_param(group))),
        Preset("Z_mod_n_trivial", {"group": "group name", "n": "positive integer"},
               "Z/n with trivial action (PGL_n type)",
               lambda group="C2", n=2: Z_mod_n_trivial(_group_param(group), int(n))),
        Preset("norm_one_torus", {"group": "group name (cyclic in the classical case)"},
               "augmentation ideal of Z[G]; Z with negation for C2",
               lambda group="C2": norm_one_torus(_group_param(group))),
        Preset("induced_lattice", {"group": "group name"}, "Z[G] with the regular action",
               lambda group="C2": induced_lattice(_group_param(group))),
        Preset("direct_sum", {"group": "group name", "left": "preset name", "right": "preset name",
                              "left_params": "object", "right_params": "object"},
               "direct sum of two presets over the same group", _sum_build),
        Preset("twist_by_subgroup_action", {"group": "group name", "base": "preset name",
                                            "kernel": "element list of an index-2 subgroup",
                                            "base_params": "object"},
               "base preset twisted by the sign character with the given kernel", _twist_build),
    ]
}


def preset(name: str, **params) -> GModule:
    try:
        p = PRESETS[name]
    except KeyError:
        raise MalformedInputError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}") from None
    unknown = set(params) - set(p.params)
    if unknown:
        raise MalformedInputError(f"unknown parameters for {name}: {sorted(unknown)}")
    return p.build(**params)
