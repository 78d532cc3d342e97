"""
Тесты для записи артефактов
"""
import pytest

from src.utils.artifacts import ArtifactWriter


class TestArtifactWriter:
    """Тесты для ArtifactWriter"""

    def test_write_with_provenance(self, tmp_path):
        """Тест: файл начинается с провенанса"""
        writer = ArtifactWriter(tmp_path / "out", ["p = 3", "grid.N = 64"])

        path = writer.write("trace.txt", "# t u0\n0 1\n")

        assert path == tmp_path / "out" / "trace.txt"
        assert path.read_text(encoding="utf-8") == "# p = 3\n# grid.N = 64\n# t u0\n0 1\n"
        assert writer.written == [path]

    def test_without_provenance(self, tmp_path):
        """Тест: без провенанса пишется только тело"""
        writer = ArtifactWriter(tmp_path)

        assert writer.header() == ""
        assert writer.write("a.txt", "x\n").read_text(encoding="utf-8") == "x\n"

    def test_overwrite_leaves_no_temporaries(self, tmp_path):
        """Тест: повторная запись заменяет файл без временных остатков"""
        writer = ArtifactWriter(tmp_path)
        writer.write("sub/a.txt", "old\n")
        writer.write("sub/a.txt", "new\n")

        assert (tmp_path / "sub" / "a.txt").read_text(encoding="utf-8") == "new\n"
        assert [p.name for p in (tmp_path / "sub").iterdir()] == ["a.txt"]

    def test_failed_write_cleans_up(self, tmp_path, mocker):
        """Тест: при сбое временный файл удаляется, старый остается"""
        writer = ArtifactWriter(tmp_path)
        writer.write("a.txt", "old\n")
        mocker.patch("src.utils.artifacts.os.replace", side_effect=OSError("disk"))

        with pytest.raises(OSError):
            writer.write("a.txt", "new\n")

        assert (tmp_path / "a.txt").read_text(encoding="utf-8") == "old\n"
        assert [p.name for p in tmp_path.iterdir()] == ["a.txt"]
