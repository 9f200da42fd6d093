"""Coverage map from operations to the result they model and the tests that exercise them."""
from __future__ import annotations

import json

VERSION = 1

# (operation, module, function, location, tests)
_ROWS = (
    ("is_stable", "trees", "is_stable",
     "stability of labelled trees: three special points per vertex",
     ["tests/test_trees.py::test_is_stable_examples"]),
    ("stabilize", "trees", "stabilize",
     "stabilization of trees with label migration to surviving vertices",
     ["tests/test_trees.py::test_stabilize_examples", "tests/test_trees.py::test_stabilize_properties"]),
    ("ghost_forest", "trees", "ghost_forest",
     "maximal ghost trees of a weighted tree",
     ["tests/test_trees.py::test_ghost_forest_and_reduced_set"]),
    ("reduced_index_set", "trees", "reduced_index_set",
     "reduced index set: labels on nonconstant components plus one per ghost tree",
     ["tests/test_trees.py::test_ghost_forest_and_reduced_set"]),
    ("enumerate_stable_trees", "trees", "enumerate_stable_trees",
     "strata of the genus zero Deligne-Mumford space",
     ["tests/test_trees.py::test_enumeration_matches_bruteforce",
      "tests/test_acceptance.py::test_criterion_1_strata"]),
    ("stratum_dim", "trees", "stratum_dim",
     "dimension and codimension of a stratum",
     ["tests/test_trees.py::test_stratum_dims", "tests/test_acceptance.py::test_criterion_1_strata"]),
    ("moduli_dim", "trees", "moduli_dim",
     "expected dimension of stable map moduli spaces",
     ["tests/test_trees.py::test_dimension_formulas"]),
    ("tangency_moduli_dim", "trees", "tangency_moduli_dim",
     "expected dimension with tangency conditions",
     ["tests/test_trees.py::test_dimension_formulas"]),
    ("solve_edge_system", "trees", "solve_edge_system",
     "linear edge system on a tree solved outward from a root",
     ["tests/test_trees.py::test_edge_system_exact", "tests/test_acceptance.py::test_criterion_9_edge_system"]),
    ("cross_ratio", "projective", "cross_ratio",
     "cross ratio on the Riemann sphere",
     ["tests/test_nodal.py::test_cross_ratio_values", "tests/test_nodal.py::test_mobius_invariance"]),
    ("cross_ratio_nodal", "nodal", "cross_ratio_nodal",
     "continuous extension of cross ratios to nodal curves",
     ["tests/test_nodal.py::test_nodal_cross_ratio", "tests/test_acceptance.py::test_criterion_2_cross_ratio"]),
    ("stable_decomposition", "nodal", "stable_decomposition",
     "decomposition of the labels induced by the component of the extra point",
     ["tests/test_nodal.py::test_stable_decomposition_examples"]),
    ("triple_type", "nodal", "triple_type",
     "types I, II and III of index triples",
     ["tests/test_nodal.py::test_triple_type_examples"]),
    ("is_refinement", "nodal", "is_refinement",
     "refinement order of decompositions and closure of strata",
     ["tests/test_nodal.py::test_refinement_examples"]),
    ("witness_refinement", "nodal", "witness_refinement",
     "triple changing type along a refinement",
     ["tests/test_nodal.py::test_witness_refinement", "tests/test_acceptance.py::test_criterion_3_types"]),
    ("witness_nonrefinement", "nodal", "witness_nonrefinement",
     "triple changing type between non-refining decompositions",
     ["tests/test_nodal.py::test_witness_nonrefinement_branches",
      "tests/test_acceptance.py::test_criterion_3_types"]),
    ("normalize_component", "nodal", "normalize_component",
     "Mobius normalization of a stable component",
     ["tests/test_nodal.py::test_normalize_component"]),
    ("extend", "coherent", "extend",
     "extension of profiles from a stratum by cross-ratio cutoffs",
     ["tests/test_coherent.py::test_extension_restriction", "tests/test_acceptance.py::test_criterion_4_coherency"]),
    ("disjoint_support_check", "coherent", "disjoint_support_check",
     "disjointness of supports of extensions for different decompositions",
     ["tests/test_coherent.py::test_disjoint_supports", "tests/test_acceptance.py::test_criterion_4_coherency"]),
    ("collapse_induced", "coherent", "collapse_induced",
     "coherent maps induced on collapsed subtrees",
     ["tests/test_coherent.py::test_collapse_induced"]),
    ("kahler_angle", "hermitian", "kahler_angle",
     "Kahler angle of an oriented subspace",
     ["tests/test_hermitian.py::test_kahler_angle_examples", "tests/test_acceptance.py::test_criterion_5_angles"]),
    ("max_angle", "hermitian", "max_angle",
     "maximal angle between subspaces",
     ["tests/test_hermitian.py::test_max_angle_properties",
      "tests/test_hermitian.py::test_max_angle_complement_identities"]),
    ("kernel_angle", "hermitian", "kernel_angle",
     "Kahler angle of the kernel of a complex plus antilinear map",
     ["tests/test_hermitian.py::test_kernel_angle_closed_form", "tests/test_acceptance.py::test_criterion_5_angles"]),
    ("taming_margin", "hermitian", "taming_margin",
     "taming margin of a skew form",
     ["tests/test_hermitian.py::test_taming_margin_properties", "tests/test_acceptance.py::test_criterion_6_taming"]),
    ("tames", "hermitian", "tames",
     "taming test for a skew form and an almost complex structure",
     ["tests/test_hermitian.py::test_tames"]),
    ("construct_K_codim2", "hermitian", "construct_K_codim2",
     "compatible structure preserving a codimension two subspace",
     ["tests/test_hermitian.py::test_codim2_exact_norm", "tests/test_hermitian.py::test_codim2_half_angle_bound",
      "tests/test_hermitian.py::test_codim2_construction_is_optimal",
      "tests/test_acceptance.py::test_criterion_5_angles"]),
    ("construct_K_pair", "hermitian", "construct_K_pair",
     "compatible structure preserving two codimension two subspaces",
     ["tests/test_hermitian.py::test_pair_construction", "tests/test_hermitian.py::test_pair_rank_one_obstruction",
      "tests/test_hermitian.py::test_pair_distance_trend",
      "tests/test_hermitian.py::test_pair_distance_has_scale_free_floor"]),
    ("min_angle_bound", "hermitian", "min_angle_bound",
     "minimal angle against a kernel bounded below by a singular value",
     ["tests/test_hermitian.py::test_min_angle_bound"]),
    ("canonical_path", "hermitian", "canonical_path",
     "canonical path of compatible structures through averaged metrics",
     ["tests/test_hermitian.py::test_canonical_path", "tests/test_hermitian.py::test_canonical_path_contracts"]),
    ("d_star", "donaldson", "d_star",
     "constant D_* governing Donaldson degrees",
     ["tests/test_donaldson.py::test_d_star"]),
    ("degree_threshold", "donaldson", "degree_threshold",
     "degree threshold 2(D_* + n)",
     ["tests/test_donaldson.py::test_degree_threshold", "tests/test_acceptance.py::test_criterion_7_donaldson"]),
    ("index_sphere_in_Y", "donaldson", "index_sphere_in_Y",
     "index of spheres inside the hypersurface",
     ["tests/test_donaldson.py::test_index_sphere_in_Y", "tests/test_acceptance.py::test_criterion_7_donaldson"]),
    ("max_tangency_order", "donaldson", "max_tangency_order",
     "maximal tangency order and the three point condition",
     ["tests/test_donaldson.py::test_max_tangency_order"]),
    ("index_two_hypersurfaces", "donaldson", "index_two_hypersurfaces",
     "index of spheres inside two hypersurfaces",
     ["tests/test_donaldson.py::test_index_two_hypersurfaces",
      "tests/test_acceptance.py::test_criterion_7_donaldson"]),
    ("enumerate_bounded_classes", "donaldson", "enumerate_bounded_classes",
     "finitely many classes below an energy bound",
     ["tests/test_donaldson.py::test_enumerate_bounded_classes"]),
    ("gw_normalization", "donaldson", "gw_normalization",
     "factorial normalization of the invariant",
     ["tests/test_donaldson.py::test_gw_normalization"]),
    ("vanishing_order", "intersections", "vanishing_order",
     "order of vanishing of a polynomial at a point",
     ["tests/test_intersections.py::test_vanishing_order"]),
    ("local_intersection_winding", "intersections", "local_intersection_winding",
     "local intersection number as a winding number",
     ["tests/test_intersections.py::test_winding_matches_order",
      "tests/test_acceptance.py::test_criterion_8_intersections"]),
    ("total_intersection", "intersections", "total_intersection",
     "total intersection of a rational curve with a hypersurface",
     ["tests/test_intersections.py::test_total_intersection_bezout",
      "tests/test_intersections.py::test_total_intersection_random_maps",
      "tests/test_acceptance.py::test_criterion_8_intersections"]),
    ("normal_jet", "intersections", "normal_jet",
     "normal jets, tangency order and their transformation law",
     ["tests/test_intersections.py::test_normal_jet_fixtures", "tests/test_intersections.py::test_jet_law"]),
    ("run_subcommand", "cli", "main",
     "command line entry point",
     ["tests/test_cli.py::test_dm_strata", "tests/test_cli.py::test_exit_codes",
      "tests/test_acceptance.py::test_criterion_10_determinism"]),
    ("concordance_report", "concordance", "concordance_report",
     "this coverage map",
     ["tests/test_cli.py::test_concordance_report"]),
)

OUT_OF_SCOPE = (
    "Analysis on infinite-dimensional spaces: Floer-type function spaces, Sobolev completions, "
    "linearized Cauchy-Riemann operators and their surjectivity.",
    "Genericity arguments via the Sard-Smale theorem and Baire sets of perturbations.",
    "Elliptic regularity and Gromov compactness.",
    "Cobordism arguments showing the invariants do not depend on choices.",
    "Existence of Donaldson hypersurfaces via approximately holomorphic sections; "
    "only the numerical consequences are modelled.",
    "The Carleman similarity principle; only its conclusion, index equals tangency order plus one, "
    "is checked on explicit local models.",
    "Semicontinuity of local intersection numbers under Gromov limits.",
    "The inductive derivative identity for jets, which the transformation-law check subsumes.",
)


def concordance_report() -> dict:
    ops = {}
    for op, module, func, loc, tests in _ROWS:
        if op in ops:
            raise AssertionError(f"operation {op} listed twice")
        ops[op] = {"module": f"stablegw.{module}", "function": func, "location": loc, "tests": list(tests)}
    return {"version": VERSION, "operations": ops, "out_of_scope": list(OUT_OF_SCOPE)}


def render(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)
