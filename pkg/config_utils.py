import os
import sys
from collections.abc import Mapping

import yaml


"""
Shared configuration lookup for the wordseq command line.

Goals
- Centralize the settings every subcommand reads (window, budget, seed, ...)
- Keep one precedence order everywhere

Precedence
- command-line flag
- environment variable (WORDSEQ_WINDOW, WORDSEQ_NODE_BUDGET, ...)
- YAML file named by WORDSEQ_CONFIG, else ./wordseq.yaml when present
- built-in default

Malformed environment or file values are skipped with a warning on stderr
and the next source is used.
"""

CONFIG_ENV: str = "WORDSEQ_CONFIG"
DEFAULT_CONFIG_FILE: str = "wordseq.yaml"

DEFAULTS: dict[str, int | str] = {
    "window": 2,
    "node_budget": 100_000,
    "seed": 0,
    "samples": 200,
    "depth": 6,
    "format": "text",
}
FORMATS = ("text", "json", "dot", "csv")


def env_name(key: str) -> str:
    return f"WORDSEQ_{key.upper()}"


def _coerce(key: str, value) -> int | str | None:
    """Return a typed value for `key`, or None if it does not parse."""
    if key == "format":
        text = str(value).strip().lower()
        return text if text in FORMATS else None
    try:
        number = int(str(value).strip())
    except ValueError:
        return None
    if key == "seed":
        return number
    return number if number >= 1 else None


def load_config_file(path: str | None = None) -> dict:
    """Read the YAML config file, or return {} when there is none."""
    explicit = path or os.environ.get(CONFIG_ENV)
    candidate = explicit or DEFAULT_CONFIG_FILE
    if not os.path.exists(candidate):
        if explicit:
            print(f"Warn: config file {candidate} not found", file=sys.stderr)
        return {}
    with open(candidate, encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            print(f"Warn: ignoring unreadable config file {candidate}: {e}", file=sys.stderr)
            return {}
    if not isinstance(data, dict):
        print(f"Warn: ignoring config file {candidate}: expected a mapping", file=sys.stderr)
        return {}
    return data


def resolve_settings(
    flags: Mapping[str, object] | None = None,
    environ: Mapping[str, str] | None = None,
    file_values: Mapping[str, object] | None = None,
) -> dict[str, int | str]:
    """Merge flag, environment, file and default values key by key."""
    flags = flags or {}
    environ = os.environ if environ is None else environ
    file_values = load_config_file() if file_values is None else file_values
    settings: dict[str, int | str] = {}
    for key, default in DEFAULTS.items():
        value = flags.get(key)
        if value is not None:
            settings[key] = value
            continue
        for source, raw in (
            (env_name(key), environ.get(env_name(key))),
            ("config file", file_values.get(key)),
        ):
            if raw is None:
                continue
            typed = _coerce(key, raw)
            if typed is None:
                print(f"Warn: ignoring {key}={raw!r} from {source}", file=sys.stderr)
                continue
            settings[key] = typed
            break
        else:
            settings[key] = default
    return settings
