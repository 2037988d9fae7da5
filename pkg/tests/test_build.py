from build import _ensure_clean_directory


def test_clean_directory_removes_previous_contents(tmp_path):
    target = tmp_path / "dist"
    (target / "nested").mkdir(parents=True)
    (target / "nested" / "old.exe").write_bytes(b"stale")

    _ensure_clean_directory(str(target))

    assert target.is_dir()
    assert list(target.iterdir()) == []


def test_clean_directory_creates_missing_path(tmp_path):
    target = tmp_path / "build" / "work"
    _ensure_clean_directory(str(target))
    assert target.is_dir()
