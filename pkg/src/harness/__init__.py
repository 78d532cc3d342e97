"""
Оркестрация экспериментов: классификация проб, бисекции, исследования и кампании.
"""

from .bisection import (
    A0Branch,
    A0Result,
    BisectionRecord,
    BisectionTarget,
    BracketStep,
    ProbeRunner,
    bisect_threshold,
    center_side,
    locate_A0,
    threshold_side,
    tune_b_zero,
)
from .campaign import CampaignRow, run_campaign, run_entry, summary_table
from .classify import ClassifyResult, classify, run_probe
from .families import FamilyKind, InitialDataFamily
from .studies import StudyReport, bounce_return_study, critical_self_similar_study, static_critical_study

__all__ = [
    "A0Branch",
    "A0Result",
    "BisectionRecord",
    "BisectionTarget",
    "BracketStep",
    "ProbeRunner",
    "bisect_threshold",
    "center_side",
    "locate_A0",
    "threshold_side",
    "tune_b_zero",
    "CampaignRow",
    "run_campaign",
    "run_entry",
    "summary_table",
    "ClassifyResult",
    "classify",
    "run_probe",
    "FamilyKind",
    "InitialDataFamily",
    "StudyReport",
    "bounce_return_study",
    "critical_self_similar_study",
    "static_critical_study",
]
