"""Banach-Mazur distances of convex bodies.

Construction of lp-sums, cones, and Hanner polytopes; multi-start numerical
distance estimation with verifiable witness positions; and exact optimality
certificates for positions relative to the Euclidean ball.
"""
from .bodies import (
    Ball,
    Body,
    LinearImageBody,
    LinearMap,
    LpSumBody,
    Polytope,
    TranslateBody,
    apply_map,
    as_polytope,
    body_from_dict,
    body_from_json,
    body_to_dict,
    body_to_json,
    inclusion_scale,
    polar,
    project,
    radial_extremes,
)
from .certificate import (
    Certification,
    ContactCertificate,
    Infeasible,
    certify_euclidean_distance,
    check_decomposition,
    decomposition_residual,
    find_contacts,
    lp_sum_contact_points,
    verify_certificate,
)
from .constructions import (
    cone,
    cross_polytope,
    cube,
    double_cone,
    equilateral_family,
    equilateral_target,
    hanner,
    hanner_leaves,
    hanner_optimal_position,
    lp_sum,
    parse_hanner,
    polygon_disc,
    regular_polygon,
    segment,
    simplex_regular_centered,
    standard_body,
)
from .distance import (
    DistanceEstimate,
    EstimateConfig,
    estimate_distance,
    position_ratio,
    verify_chain,
)
from .errors import BmdistError
from .oracles import (
    Report,
    SuiteConfig,
    hanner_distance,
    lemma_proj_construct,
    lemma_triangles_check,
    lemma_vertex_absorbing_check,
    ntj_value,
    theorem_suite,
    thm_lp_sum_to_euclidean,
)
from .svg import render_svg

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BmdistError",
    "Body",
    "Certification",
    "ContactCertificate",
    "DistanceEstimate",
    "EstimateConfig",
    "Infeasible",
    "LinearImageBody",
    "LinearMap",
    "LpSumBody",
    "Polytope",
    "Report",
    "SuiteConfig",
    "TranslateBody",
    "apply_map",
    "as_polytope",
    "body_from_dict",
    "body_from_json",
    "body_to_dict",
    "body_to_json",
    "certify_euclidean_distance",
    "check_decomposition",
    "cone",
    "cross_polytope",
    "cube",
    "decomposition_residual",
    "double_cone",
    "equilateral_family",
    "equilateral_target",
    "estimate_distance",
    "find_contacts",
    "hanner",
    "hanner_distance",
    "hanner_leaves",
    "hanner_optimal_position",
    "inclusion_scale",
    "lemma_proj_construct",
    "lemma_triangles_check",
    "lemma_vertex_absorbing_check",
    "lp_sum",
    "lp_sum_contact_points",
    "ntj_value",
    "parse_hanner",
    "polar",
    "polygon_disc",
    "position_ratio",
    "project",
    "radial_extremes",
    "regular_polygon",
    "render_svg",
    "segment",
    "simplex_regular_centered",
    "standard_body",
    "theorem_suite",
    "thm_lp_sum_to_euclidean",
    "verify_certificate",
    "verify_chain",
]
