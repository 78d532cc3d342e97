"""
Утилиты для форматирования результатов
"""
import json
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np
from rich.table import Table


def format_number(value: Any) -> str:
    """Число в формате %.17g, остальное через str"""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if isinstance(value, Enum):
        return str(value.value)
    if value is None:
        return "none"
    return str(value)


class OutputFormatter:
    """Форматтер для текстовых артефактов и консольных сводок"""

    @staticmethod
    def format_rows(rows: Iterable[Sequence[Any]], header: Optional[Sequence[str]] = None) -> str:
        """
        Таблица, разделенная пробелами

        Args:
            rows: Строки таблицы
            header: Имена колонок (пишутся как комментарий `# a b c`)

        Returns:
            Текст таблицы с завершающим переводом строки
        """
        lines = []
        if header:
            lines.append("# " + " ".join(header))
        for row in rows:
            lines.append(" ".join(format_number(value) for value in row))
        return "\n".join(lines) + "\n"

    @staticmethod
    def format_columns(columns: Mapping[str, Sequence[float]]) -> str:
        """Таблица из колонок одинаковой длины"""
        names = list(columns)
        lengths = {len(columns[name]) for name in names}
        if len(lengths) > 1:
            raise ValueError(f"Колонки разной длины: {sorted(lengths)}")
        return OutputFormatter.format_rows(zip(*(columns[name] for name in names)), header=names)

    @staticmethod
    def format_key_value(data: Mapping[str, Any]) -> str:
        """
        Блок `key = value`

        Вложенные словари разворачиваются в ключи через точку, списки пишутся как JSON.
        """
        lines = []
        for key, value in data.items():
            if isinstance(value, Mapping):
                nested = OutputFormatter.format_key_value({f"{key}.{k}": v for k, v in value.items()})
                lines.extend(nested.rstrip("\n").split("\n"))
            elif isinstance(value, (list, tuple, np.ndarray)):
                lines.append(f"{key} = {json.dumps([_jsonable(v) for v in value])}")
            else:
                lines.append(f"{key} = {format_number(value)}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def format_json(data: Any, indent: int = 2) -> str:
        """Форматирование данных в JSON"""
        return json.dumps(data, indent=indent, ensure_ascii=False, default=_jsonable)

    @staticmethod
    def rich_table(title: str, rows: List[Dict[str, Any]], columns: Optional[List[str]] = None) -> Table:
        """
        Таблица rich для вывода сводки в консоль

        Args:
            title: Заголовок
            rows: Список словарей
            columns: Колонки (по умолчанию ключи первой строки)
        """
        table = Table(title=title, show_header=True, header_style="bold cyan")
        if not rows:
            table.add_column("Нет данных для отображения")
            return table
        columns = columns or list(rows[0].keys())
        for column in columns:
            table.add_column(column)
        for row in rows:
            table.add_row(*(_short(row.get(column)) for column in columns))
        return table


def _short(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.10g}"
    return format_number(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if hasattr(value, "value") and not isinstance(value, (int, float, str)):
        return value.value
    return value
