"""
Configuration module for the blowup lab.

Pydantic models for every control set and the aggregate run configuration.
"""

from .lab_config import (
    AnalysisControls,
    BisectionControls,
    BoundStateControls,
    CampaignConfig,
    CampaignEntry,
    EvolutionControls,
    FamilyConfig,
    GridConfig,
    LoggingConfig,
    RunConfig,
    ShootingControls,
    SpectrumControls,
)

__all__ = [
    "AnalysisControls",
    "BisectionControls",
    "BoundStateControls",
    "CampaignConfig",
    "CampaignEntry",
    "EvolutionControls",
    "FamilyConfig",
    "GridConfig",
    "LoggingConfig",
    "RunConfig",
    "ShootingControls",
    "SpectrumControls",
]
