"""
Утилиты для разбора и валидации конфигурационных файлов
"""
from pathlib import Path
from typing import Any, Dict, Union

import yaml
from pydantic import ValidationError

from ..core.errors import ConfigurationError


class ConfigValidator:
    """Разбор файлов `key = value` и YAML манифестов"""

    @staticmethod
    def load_yaml(file_path: Union[str, Path]) -> Dict[str, Any]:
        """
        Загрузка YAML файла

        Args:
            file_path: Путь к YAML файлу

        Returns:
            Словарь с содержимым

        Raises:
            ConfigurationError: Если файл отсутствует или не разбирается
        """
        try:
            with open(file_path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Ошибка парсинга YAML файла {file_path}: {e}")
        except FileNotFoundError:
            raise ConfigurationError(f"Файл не найден: {file_path}")
        if not isinstance(data, dict):
            raise ConfigurationError(f"Ожидался словарь верхнего уровня в {file_path}")
        return data

    @staticmethod
    def parse_key_value_text(text: str) -> Dict[str, Any]:
        """
        Разбор построчного формата `key = value`.

        Комментарии начинаются с `#`. Значения читаются как YAML скаляры или
        списки в квадратных скобках.

        Args:
            text: Содержимое файла

        Returns:
            Плоский словарь (ключи могут содержать точки)

        Raises:
            ConfigurationError: При повторном ключе или строке без `=`
        """
        result: Dict[str, Any] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(
                    f"Строка {number}: ожидается `key = value`, получено {raw.strip()!r}",
                    {"line": number},
                )
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise ConfigurationError(f"Строка {number}: пустой ключ", {"line": number})
            if key in result:
                raise ConfigurationError(f"Строка {number}: ключ {key!r} задан повторно",
                                         {"line": number, "key": key})
            try:
                result[key] = yaml.safe_load(value) if value else None
            except yaml.YAMLError as e:
                raise ConfigurationError(f"Строка {number}: значение ключа {key!r} не разбирается: {e}",
                                         {"line": number, "key": key})
        return result

    @staticmethod
    def nest_dotted_keys(flat: Dict[str, Any]) -> Dict[str, Any]:
        """Преобразование `section.key` во вложенные словари"""
        nested: Dict[str, Any] = {}
        for key, value in flat.items():
            parts = key.split(".")
            node = nested
            for part in parts[:-1]:
                child = node.setdefault(part, {})
                if not isinstance(child, dict):
                    raise ConfigurationError(f"Ключ {key!r} конфликтует со скалярным {part!r}", {"key": key})
                node = child
            node[parts[-1]] = value
        return nested

    @staticmethod
    def flatten(data: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
        """Обратное преобразование вложенного словаря в ключи через точку"""
        flat: Dict[str, Any] = {}
        for key, value in data.items():
            name = f"{prefix}{key}"
            if isinstance(value, dict):
                flat.update(ConfigValidator.flatten(value, prefix=f"{name}."))
            else:
                flat[name] = value
        return flat

    @staticmethod
    def describe_validation_error(error: ValidationError) -> str:
        """Сообщение об ошибке с именем ключа и допустимым диапазоном"""
        lines = []
        for item in error.errors():
            key = ".".join(str(part) for part in item["loc"]) or "<config>"
            if item.get("type") == "extra_forbidden":
                lines.append(f"{key}: неизвестный ключ")
            else:
                lines.append(f"{key}: {item['msg']} (получено {item.get('input')!r})")
        return "Ошибка конфигурации: " + "; ".join(lines)
