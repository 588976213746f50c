"""Services package for CaloronKit."""

from .calculus import (
    wedge, d, d_graded, contract, slice_form, integrate_fiberwise, fiber_integrate,
    loop_integrate, integrate, sym_trace, periods, is_exact, is_exact_graded,
)
from .lie import (
    maurer_cartan, identity_map, block_sum, pointwise_inverse, matrix_exp, rotation_homotopy,
    rotation_homotopy_map, holonomy, random_smooth_map, winding_map, sphere_identity_map,
)
from .geometry import (
    trivial_pair, caloron_transform, inverse_caloron, curvature, horizontal_curvature,
    higgs_covariant_derivative, higgs_holonomy_map, gauge_transform, flat_pair,
    is_hermitian_compatible, straight_line, sample_path, caloron_path, extrude_pairs, extrude_forms,
)
from .chernweil import (
    chern_character, odd_chern_character, chern_simons, chern_simons_via_slices, total_chern_simons,
)
from .stringforms import (
    string_form, string_potential, string_datum_defect, total_string_potential,
    total_string_potential_via_caloron, tau_hat_pullback, universal_string_pullback,
    surjectivity_witness, gerbe_curving_check,
)
from .kmodel import (
    twz_transgression, cs_equivalent, string_data_equivalent, direct_sum, stabilize, inverse_witness,
)
from .generator import random_pair, random_connection, random_homotopy_values
from .suites import SuiteConfig, run_suite, SUITE_NAMES

__all__ = [
    "wedge", "d", "d_graded", "contract", "slice_form", "integrate_fiberwise", "fiber_integrate",
    "loop_integrate", "integrate", "sym_trace", "periods", "is_exact", "is_exact_graded",
    "maurer_cartan", "identity_map", "block_sum", "pointwise_inverse", "matrix_exp", "rotation_homotopy",
    "rotation_homotopy_map", "holonomy", "random_smooth_map", "winding_map", "sphere_identity_map",
    "trivial_pair", "caloron_transform", "inverse_caloron", "curvature", "horizontal_curvature",
    "higgs_covariant_derivative", "higgs_holonomy_map", "gauge_transform", "flat_pair",
    "is_hermitian_compatible", "straight_line", "sample_path", "caloron_path", "extrude_pairs", "extrude_forms",
    "chern_character", "odd_chern_character", "chern_simons", "chern_simons_via_slices", "total_chern_simons",
    "string_form", "string_potential", "string_datum_defect", "total_string_potential",
    "total_string_potential_via_caloron", "tau_hat_pullback", "universal_string_pullback",
    "surjectivity_witness", "gerbe_curving_check",
    "twz_transgression", "cs_equivalent", "string_data_equivalent", "direct_sum", "stabilize", "inverse_witness",
    "random_pair", "random_connection", "random_homotopy_values",
    "SuiteConfig", "run_suite", "SUITE_NAMES",
]
