"""Correlated two-walker steps on the plane and their curved-surface counterparts.

The package has four layers:

* :mod:`entwalk.correlations` -- exact joint sign distribution for paired
  measurements along planar axes, with a mixing parameter ``p``, and the
  matching samplers.
* :mod:`entwalk.walk` -- two-agent random walk built on those signs:
  single steps, analytic mean-square separation laws, Monte Carlo
  estimators and reproducible ensembles.
* :mod:`entwalk.geometry` -- single geodesic steps on the unit sphere and
  the unit hyperboloid, both as an explicit frame-and-rotation
  construction and as closed-form step-distance laws.
* :mod:`entwalk.solver` -- angle-averaged squared step distance by
  periodic quadrature, residuals of the implicit curvature-radius
  equations, root finding, curve tracing and threshold extraction.

``entwalk.cli`` exposes the ``entwalk`` command with the ``msd``,
``simulate``, ``curve``, ``threshold`` and ``verify`` subcommands.
"""

from .correlations import (
    PlanarDirection,
    SignPair,
    WernerParameter,
    outcome_probability,
    sample_direction,
    sample_outcomes,
)
from .geometry import (
    DegenerateConfigurationError,
    Frame,
    GeometryKind,
    ScaledConfiguration,
    build_frames,
    closed_form_step_distance,
    construction_step_distance,
)
from .solver import (
    CurvatureCurve,
    CurvatureProblem,
    CurvePoint,
    QuadratureSpec,
    ThresholdReport,
    extract_thresholds,
    figure3_transform,
    mean_sq_step,
    residual,
    small_lambda_series,
    solve_radius,
    trace_curve,
)
from .walk import (
    EnsembleResult,
    Protocol,
    ProtocolSpec,
    StepOutcome,
    WalkState,
    expected_sq_separation,
    mc_sq_separation,
    run_ensemble,
    step,
    weight,
)

__version__ = "0.1.0"

__all__ = [
    "PlanarDirection",
    "SignPair",
    "WernerParameter",
    "outcome_probability",
    "sample_direction",
    "sample_outcomes",
    "Protocol",
    "ProtocolSpec",
    "WalkState",
    "StepOutcome",
    "EnsembleResult",
    "weight",
    "expected_sq_separation",
    "mc_sq_separation",
    "step",
    "run_ensemble",
    "GeometryKind",
    "ScaledConfiguration",
    "Frame",
    "DegenerateConfigurationError",
    "build_frames",
    "construction_step_distance",
    "closed_form_step_distance",
    "QuadratureSpec",
    "CurvatureProblem",
    "CurvePoint",
    "CurvatureCurve",
    "ThresholdReport",
    "mean_sq_step",
    "small_lambda_series",
    "residual",
    "solve_radius",
    "trace_curve",
    "extract_thresholds",
    "figure3_transform",
]
