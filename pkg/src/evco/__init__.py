"""Exact evenly convex analysis over the rationals.

Sets are finite unions of e-polyhedra (systems of strict and weak linear
inequalities), maps are cone-ordered set-valued maps with such graphs, and all
arithmetic is done with ``fractions.Fraction``.
"""
from .core import (
    EPolyhedron, LinConstraint, STRICT, SupportKind, SupportValue, WEAK, closure, contains,
    equality, eval_membership, fm_eliminate, is_nonempty, project, set_equal, strict, sup_linear, weak,
)
from .errors import (
    DimensionMismatch, EmptySetError, EvcoError, ImproperMap, MalformedInstance, NotEConvex,
    PointInside, UnsupportedInstance,
)
from .geometry import (
    EUnion, boxplus, certificate_is_sound, clconv, eco_hull, eco_membership, is_e_convex,
    separate_point, union_equal, verify_eco_associativity,
)
from .setvalued import (
    ConeK, KEpigraph, Properness, ScalarFunction, ScalarPiece, SetValuedMap, build_epi, fiber,
    is_proper, k_clconv_hull, k_closed_hull, k_eco_hull, leq_K_at, polar_cone, scalar_embed,
    scalar_epigraph,
)
from .minorants import (
    EAffineMap, OpenHalfspace, WholeSpace, eval_eaffine, is_minorant, separating_minorant,
    verify_supremum_characterization,
)
from .conjugation import (
    DualElement, HalfspaceValue, biconjugate, c_prime_conjugate, conjugate, conjugate_by_definition,
    eta, indicator_suite, sigma_f, verify_biconjugation,
)

__version__ = "0.1.0"

__all__ = [
    "EPolyhedron", "LinConstraint", "STRICT", "SupportKind", "SupportValue", "WEAK", "closure",
    "contains", "equality", "eval_membership", "fm_eliminate", "is_nonempty", "project",
    "set_equal", "strict", "sup_linear", "weak", "DimensionMismatch", "EmptySetError", "EvcoError",
    "ImproperMap", "MalformedInstance", "NotEConvex", "PointInside", "UnsupportedInstance",
    "EUnion", "boxplus", "certificate_is_sound", "clconv", "eco_hull", "eco_membership",
    "is_e_convex", "separate_point", "union_equal", "verify_eco_associativity", "ConeK",
    "KEpigraph", "Properness", "ScalarFunction", "ScalarPiece", "SetValuedMap", "build_epi",
    "fiber", "is_proper", "k_clconv_hull", "k_closed_hull", "k_eco_hull", "leq_K_at", "polar_cone",
    "scalar_embed", "scalar_epigraph", "EAffineMap", "OpenHalfspace", "WholeSpace", "eval_eaffine",
    "is_minorant", "separating_minorant", "verify_supremum_characterization", "DualElement",
    "HalfspaceValue", "biconjugate", "c_prime_conjugate", "conjugate", "conjugate_by_definition",
    "eta", "indicator_suite", "sigma_f", "verify_biconjugation",
]
