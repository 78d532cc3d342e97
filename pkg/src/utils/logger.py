"""
Система логирования для blowup-lab
"""
import os
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from loguru import logger


class LoggerSetup:
    """Настройка системы логирования"""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """
        Инициализация системы логирования

        Args:
            config: Конфигурация логирования (поля LoggingConfig)
        """
        self.config = {**self._get_default_config(), **(config or {})}
        self._setup_logging()

    def _get_default_config(self) -> Dict[str, Any]:
        """Получение конфигурации по умолчанию"""
        return {
            'level': 'INFO',
            'log_file': None,
            'error_file': None,
            'max_file_size': '10 MB',
            'retention_days': 7,
            'compression': True
        }

    def _setup_logging(self):
        """Настройка системы логирования"""
        logger.remove()
        self._setup_console_logging()
        if self.config['log_file']:
            self._setup_file_logging()
        if self.config['error_file']:
            self._setup_error_logging()
        self._add_context_logging()

    def _setup_console_logging(self):
        """Консоль: stderr, stdout остается для результатов"""
        console_format = (
            "<green>{time:HH:mm:ss}</green> | "
            "<level>{level: <8}</level> | "
            "<cyan>{extra[component]}</cyan> - "
            "<level>{message}</level> {extra[fields]}"
        )

        logger.add(
            sys.stderr,
            level=self.config['level'],
            format=console_format,
            colorize=True,
            filter=self._console_filter
        )

    def _file_format(self) -> str:
        return (
            "{time:YYYY-MM-DD HH:mm:ss} | "
            "{level: <8} | "
            "{extra[component]} | {name}:{function}:{line} - "
            "{message} {extra[fields]}"
        )

    def _setup_file_logging(self):
        """Настройка файлового логирования"""
        Path(self.config['log_file']).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            self.config['log_file'],
            level=self.config['level'],
            format=self._file_format(),
            rotation=self.config['max_file_size'],
            retention=f"{self.config['retention_days']} days",
            compression="zip" if self.config['compression'] else None,
            encoding="utf-8"
        )

    def _setup_error_logging(self):
        """Отдельный файл для ошибок"""
        Path(self.config['error_file']).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            self.config['error_file'],
            level="ERROR",
            format=self._file_format(),
            rotation="5 MB",
            retention="30 days",
            compression="zip" if self.config['compression'] else None,
            encoding="utf-8"
        )

    def _add_context_logging(self):
        """Добавление контекстной информации в логи"""
        def add_context(record):
            extra = record["extra"]
            extra.setdefault("component", record["name"])
            extra["pid"] = os.getpid()
            fields = {k: v for k, v in extra.items() if k not in ("component", "run_id", "pid", "fields")}
            extra["fields"] = " ".join(f"{k}={v}" for k, v in fields.items())

        logger.configure(patcher=add_context)

    def _console_filter(self, record):
        """DEBUG в консоль только при уровне DEBUG"""
        if record["level"].name == "DEBUG" and self.config['level'] != "DEBUG":
            return False
        return True


class StructuredLogger:
    """Структурированное логирование для компонентов лаборатории"""

    def __init__(self, component: str, run_id: Optional[str] = None):
        """
        Инициализация структурированного логгера

        Args:
            component: Имя компонента (например, "profiles.shooting")
            run_id: Идентификатор запуска
        """
        self.component = component
        self.run_id = run_id
        self.logger = logger.bind(component=component, run_id=run_id)

    def info(self, message: str, **kwargs):
        """Информационное сообщение"""
        self.logger.info(message, **kwargs)

    def warning(self, message: str, **kwargs):
        """Предупреждение"""
        self.logger.warning(message, **kwargs)

    def error(self, message: str, **kwargs):
        """Ошибка"""
        self.logger.error(message, **kwargs)

    def debug(self, message: str, **kwargs):
        """Отладочное сообщение"""
        self.logger.debug(message, **kwargs)

    def critical(self, message: str, **kwargs):
        """Критическая ошибка"""
        self.logger.critical(message, **kwargs)

    def log_shooting_bracket(self, lo: float, hi: float):
        """Найдена скобка смены знака в функции промаха"""
        self.logger.debug("Shooting bracket", lo=lo, hi=hi)

    def log_root_found(self, kind: str, value: float, **kwargs):
        """Уточненный корень (профиль, собственное значение, связанное состояние)"""
        self.logger.info("Root found", kind=kind, value=value, **kwargs)

    def log_step_collapse(self, t: float, max_u: float, dt: float):
        """Переход к адаптивному шагу при коллапсе"""
        self.logger.debug("Adaptive step", t=t, max_u=max_u, dt=dt)

    def log_verdict(self, verdict: str, t: float, steps: int, **kwargs):
        """Итог эволюции"""
        self.logger.info("Evolution finished", verdict=verdict, t=t, steps=steps, **kwargs)

    def log_probe(self, level: int, amplitude: float, verdict: str, lower: float, upper: float):
        """Проба бисекции"""
        self.logger.info(
            "Bisection probe",
            level=level,
            amplitude=amplitude,
            verdict=verdict,
            lower=lower,
            upper=upper
        )

    def log_fit(self, model: str, residual: float, **params):
        """Результат подгонки"""
        self.logger.info("Fit completed", model=model, residual=residual, **params)


def setup_logging(config: Optional[Dict[str, Any]] = None) -> LoggerSetup:
    """
    Настройка системы логирования

    Args:
        config: Конфигурация логирования

    Returns:
        Экземпляр LoggerSetup
    """
    return LoggerSetup(config)


def get_structured_logger(component: str, run_id: Optional[str] = None) -> StructuredLogger:
    """
    Получение структурированного логгера

    Args:
        component: Имя компонента
        run_id: Идентификатор запуска

    Returns:
        Экземпляр StructuredLogger
    """
    return StructuredLogger(component, run_id)
