"""Blaschke products and equilibrium electron configurations on the unit circle."""

from .blaschke import (
    BlaschkeProduct,
    CriticalPointSet,
    LiftedArgument,
    critical_points,
    derivative,
    evaluate,
    lifted_argument,
)
from .cayley import (
    CayleyMap,
    SignedAtomicMeasure,
    discrete_energy_shift_constant,
    energy_shift_constant,
    pushforward_measure,
)
from .energy import (
    ExceptionalReport,
    LineConfiguration,
    ProtonSystem,
    energy_V,
    energy_V_nu,
    energy_V_with_infinity,
    energy_W,
    energy_W_mu,
    exceptional_report,
    imaginary_directional_derivative,
    line_gradient,
    radial_derivative,
    restricted_energy,
    tangential_gradient,
    tangential_hessian,
)
from .equilibrium import (
    EquilibriumVerdict,
    InterpolationResult,
    MinimalityEvidence,
    assess_configuration,
    chain_rule_check,
    clark_parameters,
    curve_energy_constancy,
    inverse_interpolate,
    reverse_problem_pipeline,
    verify_on_curve,
)
from .errors import *  # noqa: F401,F403
from .level import CircleConfiguration, SolutionCurve, curve_point, point_on_curve, solve_level, trace_curve

__version__ = "0.1.0"
