"""
Автомодельные профили: уравнение, разложения, стрельба, продолжение наружу.
"""

from .exterior import ExteriorBehavior, ExteriorKind, ProfileEvaluator, continue_exterior
from .shooting import ProfileShooter, SimilarityProfile, count_sign_changes, shoot_profile
from .similarity import (
    interior_series,
    kw_integral,
    lightcone_series,
    lightcone_taylor,
    parabolic_ode_residual,
    profile_rhs,
)

__all__ = [
    "ExteriorBehavior",
    "ExteriorKind",
    "ProfileEvaluator",
    "continue_exterior",
    "ProfileShooter",
    "SimilarityProfile",
    "count_sign_changes",
    "shoot_profile",
    "interior_series",
    "kw_integral",
    "lightcone_series",
    "lightcone_taylor",
    "parabolic_ode_residual",
    "profile_rhs",
]
