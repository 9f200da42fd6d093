"""Combinatorics, linear algebra and arithmetic behind genus-zero Gromov-Witten invariants
built from Donaldson hypersurfaces."""
from .errors import PropertyViolation, ResourceError, ValidationError
from .trees import (LabelledTree, WeightedTree, enumerate_stable_trees, ghost_forest, is_stable,
                    moduli_dim, reduced_index_set, solve_edge_system, stabilize, strata_counts,
                    stratum_dim, tangency_moduli_dim)
from .projective import ExtPoint, Mobius, cross_ratio
from .nodal import (NodalCurve, StableDecomposition, cross_ratio_nodal, is_refinement,
                    normalize_component, stable_decomposition, triple_type, witness_nonrefinement,
                    witness_refinement)
from .coherent import CoherentMapModel, Cutoff, Profile, collapse_induced, disjoint_support_check, extend
from .hermitian import (ConstructionError, canonical_path, construct_K_codim2, construct_K_pair,
                        kahler_angle, kernel_angle, max_angle, min_angle_bound, taming_margin, tames)
from .donaldson import (DonaldsonSpec, d_star, degree_threshold, enumerate_bounded_classes,
                        gw_normalization, index_sphere_in_Y, index_two_hypersurfaces, max_tangency_order)
from .intersections import (Hypersurface, local_intersection_winding, normal_jet, total_intersection,
                            vanishing_order)
from .concordance import concordance_report

__version__ = "0.1.0"
