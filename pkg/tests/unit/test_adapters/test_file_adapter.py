import sys
from pathlib import Path

# Ensure 'src' is importable
sys.path.insert(0, str(Path(__file__).resolve().parents[3] / "src"))

from periodlab.adapters.file_adapter import FileAdapter  # noqa: E402


def test_file_adapter_hash_computation():
    logger = __import__("logging").getLogger("test")
    adapter = FileAdapter(logger)

    expected_hash = "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
    assert adapter.compute_hash(b"") == expected_hash
    assert adapter.compute_hash(b"a") != adapter.compute_hash(b"b")


def test_file_adapter_write_report_creates_parent(tmp_path):
    logger = __import__("logging").getLogger("test")
    adapter = FileAdapter(logger)
    path = tmp_path / "out" / "nested" / "report.json"

    adapter.write_report(str(path), b'{"ok": true}\n')

    assert adapter.file_exists(str(path))
    assert path.read_bytes() == b'{"ok": true}\n'
    assert adapter.read_json(str(path)) == {"ok": True}


def test_file_adapter_missing_file(tmp_path):
    logger = __import__("logging").getLogger("test")
    adapter = FileAdapter(logger)
    assert not adapter.file_exists(str(tmp_path / "missing.json"))
