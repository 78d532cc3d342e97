"""
Вспомогательные модули: логирование, форматирование, проверка конфигурации, запись артефактов.
"""

from .artifacts import ArtifactWriter
from .formatter import OutputFormatter, format_number
from .logger import LoggerSetup, StructuredLogger, get_structured_logger, setup_logging
from .validator import ConfigValidator

__all__ = [
    "ArtifactWriter",
    "OutputFormatter",
    "format_number",
    "LoggerSetup",
    "StructuredLogger",
    "get_structured_logger",
    "setup_logging",
    "ConfigValidator",
]
