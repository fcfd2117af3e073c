"""Radial nonlocal transport: kernels, constants, inequalities and blow-up simulation."""

from ._core import (
    ConstantBundle,
    GEvaluator,
    RadialProfile,
    RiccatiCoeffs,
    blowup_time,
    check_recurrence,
    coeff_ratio_limit,
    comparison_solution,
    constant_bundle,
    functional_J,
    functional_R,
    qualifying_bump_delta,
    radial_velocity,
    riccati_coeffs,
    simulate,
    specfun,
    taylor_coeff,
    verify_initial_condition,
    verify_prop31,
    verify_prop32,
    weighted_lhs,
)

__version__ = "0.1.0"
