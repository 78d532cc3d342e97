"""
Атомарная запись артефактов с заголовком провенанса
"""
import os
import tempfile
from pathlib import Path
from typing import List, Optional, Sequence, Union

from .logger import get_structured_logger

logger = get_structured_logger("utils.artifacts")


class ArtifactWriter:
    """
    Запись текстовых артефактов в каталог вывода.

    Каждый файл начинается со строк провенанса (полная эффективная конфигурация,
    как `# key = value`). Запись идет во временный файл в том же каталоге и
    завершается os.replace.
    """

    def __init__(self, output_dir: Union[str, Path], provenance: Optional[Sequence[str]] = None):
        self.output_dir = Path(output_dir)
        self.provenance = list(provenance or [])
        self.written: List[Path] = []

    def header(self) -> str:
        if not self.provenance:
            return ""
        return "".join(f"# {line}\n" for line in self.provenance)

    def write(self, name: str, body: str) -> Path:
        """
        Запись артефакта

        Args:
            name: Имя файла относительно output_dir
            body: Содержимое без провенанса

        Returns:
            Путь к записанному файлу
        """
        target = self.output_dir / name
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(self.header())
                handle.write(body)
            os.replace(tmp_name, target)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
        self.written.append(target)
        logger.debug("Artifact written", path=str(target))
        return target
