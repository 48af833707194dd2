from __future__ import annotations

import json
import logging

from eta_hecke.cache import ENV_VAR, FlatCache, resolve_cache_dir


def test_roundtrip(tmp_path):
    c = FlatCache(tmp_path, "ns")
    c.put("a", "1/3")
    c.flush()
    assert FlatCache(tmp_path, "ns").get("a") == "1/3"


def test_corrupted_payload_is_ignored(tmp_path, caplog):
    c = FlatCache(tmp_path, "ns")
    c.put("a", "1")
    c.flush()
    path = tmp_path / "ns.json"
    doc = json.loads(path.read_text())
    doc["payload"]["a"] = "2"
    path.write_text(json.dumps(doc))
    with caplog.at_level(logging.WARNING):
        assert FlatCache(tmp_path, "ns").get("a") is None
    assert "hash" in caplog.text


def test_garbage_file_is_ignored(tmp_path):
    (tmp_path / "ns.json").write_text("{not json")
    c = FlatCache(tmp_path, "ns")
    assert c.get("a") is None
    c.put("a", "5")
    c.flush()
    assert FlatCache(tmp_path, "ns").get("a") == "5"


def test_version_mismatch_is_ignored(tmp_path):
    c = FlatCache(tmp_path, "ns")
    c.put("a", "1")
    c.flush()
    path = tmp_path / "ns.json"
    doc = json.loads(path.read_text())
    doc["version"] = "0:old"
    path.write_text(json.dumps(doc))
    assert FlatCache(tmp_path, "ns").get("a") is None


def test_no_directory_means_memory_only(tmp_path):
    c = FlatCache(None, "ns")
    c.put("a", "1")
    c.flush()
    assert c.get("a") == "1"


def test_environment_overrides_flag(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "env"))
    assert resolve_cache_dir(str(tmp_path / "flag")) == tmp_path / "env"
    monkeypatch.delenv(ENV_VAR)
    assert resolve_cache_dir(str(tmp_path / "flag")) == tmp_path / "flag"
    assert resolve_cache_dir(None) is None
