"""Exact positivity for torus-equivariant vector bundles on complete toric varieties."""

from .errors import ToriposError
from .fan import Fan, Wall, hirzebruch, product_of_projective_lines, projective_space, star_subdivide, validate_fan
from .klyachko import (
    Filtration,
    ToricVectorBundle,
    change_basis,
    decompose_over_cone,
    determinant,
    direct_sum,
    fiber_evaluation,
    frobenius_pullback,
    interpolate,
    line_bundle,
    subdivision_pullback,
    tangent_bundle_of,
    trivial_bundle,
    twist_by_line_bundle,
    validate_bundle,
)
from .mlbundle import (
    MLProblem,
    ml_curve_splitting,
    ml_globally_generated,
    ml_positivity,
    mlgen_theorems_suite,
    multiplication_surjective,
    normally_generated,
)
from .polytope import LatticePolytope, dilate, hull, minkowski_sum, normal_fan
from .positivity import (
    QTwistedBundle,
    blowup_pullback,
    positivity_report,
    qtwist_positivity,
    restrict_to_wall,
    seshadri,
)
from .sections import h0, isotypical_sections, nonvanishing_section_at, separating_section
from .tdivisor import TCartierDivisor, divisor_from_polytope, divisor_from_ray_jumps, trivial_divisor

__version__ = "0.1.0"

__all__ = [
    "blowup_pullback",
    "change_basis",
    "decompose_over_cone",
    "determinant",
    "dilate",
    "direct_sum",
    "divisor_from_polytope",
    "divisor_from_ray_jumps",
    "Fan",
    "fiber_evaluation",
    "Filtration",
    "frobenius_pullback",
    "h0",
    "hirzebruch",
    "hull",
    "interpolate",
    "isotypical_sections",
    "LatticePolytope",
    "line_bundle",
    "minkowski_sum",
    "ml_curve_splitting",
    "ml_globally_generated",
    "ml_positivity",
    "mlgen_theorems_suite",
    "MLProblem",
    "multiplication_surjective",
    "nonvanishing_section_at",
    "normal_fan",
    "normally_generated",
    "positivity_report",
    "product_of_projective_lines",
    "projective_space",
    "qtwist_positivity",
    "QTwistedBundle",
    "restrict_to_wall",
    "separating_section",
    "seshadri",
    "star_subdivide",
    "subdivision_pullback",
    "tangent_bundle_of",
    "TCartierDivisor",
    "ToricVectorBundle",
    "ToriposError",
    "trivial_bundle",
    "trivial_divisor",
    "twist_by_line_bundle",
    "validate_bundle",
    "validate_fan",
    "Wall",
]
