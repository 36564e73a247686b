"""Tests for process settings and the worker pool helpers."""

import json
from pathlib import Path

import pytest

from geosched.config import Config, get_config, parse_scalar, reload_config
from geosched.core.parallel import iter_parallel, parallel_map, worker_count


class TestConfig:
    """Tests for Config loading."""

    def test_env_overrides_file(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        path = tmp_path / "settings.json"
        path.write_text(json.dumps({"threads": 8, "log_level": "info"}))
        monkeypatch.setenv("GEOSCHED_THREADS", "3")
        config = Config.load(path)
        assert config.threads == 3
        assert config.log_level == "INFO"

    def test_bad_file_ignored(self, tmp_path: Path) -> None:
        path = tmp_path / "settings.json"
        path.write_text("{not json")
        assert Config.load(path).threads == 2

    def test_threads_clamped(self) -> None:
        assert Config(threads=0).threads == 1

    def test_reload(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("GEOSCHED_THREADS", "5")
        reload_config(tmp_path / "missing.json")
        assert get_config().threads == 5

    @pytest.mark.parametrize(
        "raw, expected",
        [("true", True), ("no", False), ("4", 4), ("0.5", 0.5), ("ga", "ga")],
    )
    def test_parse_scalar(self, raw: str, expected: object) -> None:
        assert parse_scalar(raw) == expected


class TestParallel:
    """Tests for the thread pool helpers."""

    def test_order_preserved(self) -> None:
        assert parallel_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]

    def test_iter_in_order(self) -> None:
        assert list(iter_parallel(lambda x: -x, [3, 1, 2])) == [-3, -1, -2]

    def test_worker_cap(self) -> None:
        """GEOSCHED_THREADS caps explicit requests."""
        assert worker_count() == 2
        assert worker_count(16) == 2
        assert worker_count(1) == 1
