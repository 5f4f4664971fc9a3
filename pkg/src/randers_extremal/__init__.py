"""Compatible linear connections of Randers metrics.

Decides whether ``F = alpha + beta`` admits a linear connection whose parallel
transports preserve F, and computes the extremal one (pointwise minimum-norm
torsion) from closed-form expressions, with an independent least-squares
oracle and a parallel-transport check.
"""

from .connection import (
    ConnectionCoefficients,
    ExtremalConnection,
    NotGeneralizedBerwaldError,
    SolvabilityReport,
    connection_coefficients,
    extremal_connection,
    extremal_torsion,
    global_solvability,
    kappa_coefficients,
    randers_sigma,
    solvability_conditions,
)
from .expr import Expression, eval_with_gradient, evaluate, parse, to_source
from .frame import AdaptedFrame, AdaptedPointData, adapted_frame, to_adapted, torsion_to_chart
from .geometry import (
    DegeneratePointError,
    GeometryError,
    PointFrameData,
    RandersMetricSpec,
    dF_dy,
    dual_vector,
    finsler_value,
    horizontal_derivative,
    point_data,
)
from .oracle import CompatibilitySystem, SolutionSpace, assemble, cross_validate, min_norm_solve, solve_point
from .torsion import SlotKind, TorsionTensor, layout
from .transport import Curve, TransportResult, holonomy_defect, parallel_transport

__version__ = "0.1.0"
