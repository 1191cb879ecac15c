"""Exact blow-up calculus and formal-separatrix tools for vector-field
singularities on (C^3, 0)."""

from .scalars import GaussianRational
from .series import INFINITE, MSeries, USeries, compose_curve, ratio_divergence_estimate
from .vfield import (
    LinearPart,
    PolyMap,
    SingularityClass,
    VectorField,
    classify,
    conjugate,
    factor_divisor,
    nilpotent_normal_form,
    order_at_origin,
    order_wrt_curve,
)
from .blowup import (
    BlowupResult,
    ChartMap,
    curve_blowup,
    curve_chart,
    point_blowup,
    point_chart,
    weight2_blowup,
    weight2_chart,
)
from .separatrix import (
    FormalCurve,
    invariance_residual,
    multiplicity,
    solve_graph_separatrix,
    straighten,
    transform_curve,
)
from .resolve import (
    NoNormalFormMatch,
    PersistentReport,
    ResolutionTrace,
    degenerate_family_parameters,
    detect_persistent_normal_form,
    holonomy_sancho_sanz,
    resolve_along,
    semicomplete_obstruction,
    timeform_arc_integral,
    zflow_uniformity_check,
)

__all__ = [
    "GaussianRational",
    "INFINITE",
    "MSeries",
    "USeries",
    "compose_curve",
    "ratio_divergence_estimate",
    "LinearPart",
    "PolyMap",
    "SingularityClass",
    "VectorField",
    "classify",
    "conjugate",
    "factor_divisor",
    "nilpotent_normal_form",
    "order_at_origin",
    "order_wrt_curve",
    "BlowupResult",
    "ChartMap",
    "curve_blowup",
    "curve_chart",
    "point_blowup",
    "point_chart",
    "weight2_blowup",
    "weight2_chart",
    "FormalCurve",
    "invariance_residual",
    "multiplicity",
    "solve_graph_separatrix",
    "straighten",
    "transform_curve",
    "NoNormalFormMatch",
    "PersistentReport",
    "ResolutionTrace",
    "degenerate_family_parameters",
    "detect_persistent_normal_form",
    "holonomy_sancho_sanz",
    "resolve_along",
    "semicomplete_obstruction",
    "timeform_arc_integral",
    "zflow_uniformity_check",
]
