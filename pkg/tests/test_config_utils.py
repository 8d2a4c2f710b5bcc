"""Characterization tests for config_utils.py."""

from config_utils import DEFAULTS, env_name, load_config_file, resolve_settings


def test_defaults_when_nothing_is_set():
    assert resolve_settings({}, environ={}, file_values={}) == DEFAULTS


def test_env_name():
    assert env_name("node_budget") == "WORDSEQ_NODE_BUDGET"


def test_precedence_flag_env_file():
    environ = {"WORDSEQ_WINDOW": "3", "WORDSEQ_SEED": "11"}
    file_values = {"window": 4, "seed": 12, "samples": 9}
    settings = resolve_settings({"window": 5}, environ=environ, file_values=file_values)
    assert settings["window"] == 5
    assert settings["seed"] == 11
    assert settings["samples"] == 9
    assert settings["depth"] == DEFAULTS["depth"]


def test_malformed_values_fall_through_with_a_warning(capsys):
    environ = {"WORDSEQ_WINDOW": "two", "WORDSEQ_FORMAT": "yaml"}
    settings = resolve_settings({}, environ=environ, file_values={"window": 0})
    assert settings["window"] == DEFAULTS["window"]
    assert settings["format"] == "text"
    err = capsys.readouterr().err
    assert "Warn: ignoring window='two' from WORDSEQ_WINDOW" in err
    assert "Warn: ignoring window=0 from config file" in err
    assert "Warn: ignoring format='yaml' from WORDSEQ_FORMAT" in err


def test_negative_seed_is_allowed():
    assert resolve_settings({}, environ={"WORDSEQ_SEED": "-4"}, file_values={})["seed"] == -4


def test_format_is_case_insensitive():
    assert resolve_settings({}, environ={"WORDSEQ_FORMAT": "JSON"}, file_values={})["format"] == "json"


# --- Config file -----------------------------------------------------------


def test_missing_default_file_is_silent(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("WORDSEQ_CONFIG", raising=False)
    assert load_config_file() == {}
    assert capsys.readouterr().err == ""


def test_missing_explicit_file_warns(tmp_path, capsys):
    assert load_config_file(str(tmp_path / "nope.yaml")) == {}
    assert "Warn: config file" in capsys.readouterr().err


def test_file_named_by_environment(tmp_path, monkeypatch):
    path = tmp_path / "custom.yaml"
    path.write_text("window: 3\nformat: csv\n")
    monkeypatch.setenv("WORDSEQ_CONFIG", str(path))
    assert load_config_file() == {"window": 3, "format": "csv"}


def test_non_mapping_file_is_ignored(tmp_path, capsys):
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n")
    assert load_config_file(str(path)) == {}
    assert "expected a mapping" in capsys.readouterr().err
