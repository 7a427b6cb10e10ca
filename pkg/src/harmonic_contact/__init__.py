"""Harmonic regularisation, universal damping and timestep bounds for 1-D contacts."""

from .actionangle import ActionAngleReport, action, action_angle_report, contact_duration, dJ_dE
from .damping import (
    ConstantDamping,
    DampingSpec,
    damping_ratio,
    predicted_restitution,
    transformed_damping,
    universal_C,
)
from .dynamics import (
    ImpactScenario,
    Trajectory,
    analytic_damped_oscillator,
    damped_oscillator,
    harmonic_verlet_growth,
    simulate_reference,
    simulate_verlet,
)
from .errors import *  # noqa: F401,F403
from .potentials import (
    ContactPotential,
    PowerLawPotential,
    TabulatedPotential,
    VolumetricEllipsoidPotential,
    overlap_geometry,
    stiffening_margin,
    turning_point,
)
from .regularize import (
    ReferenceConstants,
    TransformedTrajectory,
    effective_mass,
    q_of_x,
    time_gradient,
    transform_trajectory,
    x_of_q,
)
from .stability import (
    Regime,
    StabilityReport,
    classify_regime,
    dt_safe_general,
    dt_safe_stiffening,
    stability_report,
    verify_bound,
)

__version__ = "0.1.0"
