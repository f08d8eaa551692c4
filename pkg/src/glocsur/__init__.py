"""Surjectivity of Galois-cohomology localization maps for reductive groups.

The input is the finite data the question reduces to: a finite group G, a
G-module M (the algebraic fundamental group) and a decomposition subgroup
for each place. Everything is computed with exact integer linear algebra.
"""

from .abelian import Element, FgAbGroup, Homomorphism, Subgroup, subquotient
from .errors import GlocsurError, InvariantViolation, MalformedInputError
from .gmodule import (
    FiniteGroup,
    GModule,
    SubgroupOfG,
    coinvariants,
    h1_bar_complex,
    induced_map_on_coinvariants,
    induced_map_on_torsion,
    tate_h_minus_1,
    validate_action,
)
from .localization import (
    LocalizationProblem,
    PlaceKind,
    PlaceSpec,
    Verdict,
    check_v0_sufficiency,
    im_lambda,
    im_sigma,
    is_surjective,
    lambda_dominated,
    semisimple_check,
    sha_group,
)
from .matrix import IntMatrix, hermite_columns, smith, smith_normal_form
from .presets import (
    PRESETS,
    RadicalData,
    pr_condition,
    preset,
    prime_degree_check,
    radical_ladder,
    theorem51_predict,
)
from .sixterm import (
    ShortExactSequence,
    SixTermSequence,
    build_six_term,
    check_exactness,
    delta_connect,
    ladder,
)

__version__ = "0.1.0"

__all__ = [
    "Element", "FgAbGroup", "Homomorphism", "Subgroup", "subquotient",
    "GlocsurError", "InvariantViolation", "MalformedInputError",
    "FiniteGroup", "GModule", "SubgroupOfG", "coinvariants", "h1_bar_complex",
    "induced_map_on_coinvariants", "induced_map_on_torsion", "tate_h_minus_1", "validate_action",
    "LocalizationProblem", "PlaceKind", "PlaceSpec", "Verdict", "check_v0_sufficiency",
    "im_lambda", "im_sigma", "is_surjective", "lambda_dominated", "semisimple_check", "sha_group",
    "IntMatrix", "hermite_columns", "smith", "smith_normal_form",
    "PRESETS", "RadicalData", "pr_condition", "preset", "prime_degree_check", "radical_ladder",
    "theorem51_predict",
    "ShortExactSequence", "SixTermSequence", "build_six_term", "check_exactness", "delta_connect",
    "ladder",
]
