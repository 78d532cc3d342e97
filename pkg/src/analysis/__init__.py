"""
Подгонки и диагностика по результатам эволюции.
"""

from .blowup import blowup_curve_fit, default_modes, fit_blowup_rate, fit_eigenmode_expansion, rescaled_profile
from .collapse import (
    collapse_curve_table,
    collapse_model,
    parabolic_collapse,
    predicted_parabolic_b,
    predicted_quartic_d,
    quartic_collapse,
)
from .critical import (
    BounceTimes,
    bounce_diagnostics,
    critical_departure_fit,
    departure_time,
    departure_time_slope,
    match_self_similar,
    match_static_orbit,
)
from .report import FitModel, FitReport, central_columns, load_trace

__all__ = [
    "blowup_curve_fit",
    "default_modes",
    "fit_blowup_rate",
    "fit_eigenmode_expansion",
    "rescaled_profile",
    "collapse_curve_table",
    "collapse_model",
    "parabolic_collapse",
    "predicted_parabolic_b",
    "predicted_quartic_d",
    "quartic_collapse",
    "BounceTimes",
    "bounce_diagnostics",
    "critical_departure_fit",
    "departure_time",
    "departure_time_slope",
    "match_self_similar",
    "match_static_orbit",
    "FitModel",
    "FitReport",
    "central_columns",
    "load_trace",
]
