"""Plain key/value experiment configs with CLI-style overrides."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

KINDS = ("maze", "market", "embed")
_KEY_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

DEFAULT_AGENTS = {
    "maze": ("flat", "feudal_quadrant", "feudal_direction"),
    "market": ("random", "hardcoded", "tabular", "dqn", "feudal", "counts", "behaviors"),
    "embed": (),
}

# Keys whose values name files that must exist before a run starts.
FIXTURE_KEYS = ("maze_file", "prices_csv", "sectors_csv", "telemetry_csv")


class ConfigError(Exception):
    """Bad config file, bad override, or missing fixture. CLI exit code 2."""


def parse_config_text(text: str) -> dict[str, str]:
    """Parse `key = value` lines; # starts a comment, blanks are skipped."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, value = line.split("=", 1)
        key, value = key.strip(), value.strip()
        if not _KEY_RE.match(key):
            raise ConfigError(f"line {lineno}: bad key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


@dataclass
class ExperimentConfig:
    kind: str
    agents: tuple[str, ...]
    seeds: tuple[int, ...]
    out_dir: Path
    params: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if len(self.seeds) < 1:
            raise ConfigError("at least one seed is required")
        for key in FIXTURE_KEYS:
            path = self.params.get(key)
            if path is not None and not Path(path).is_file():
                raise ConfigError(f"{key} does not exist: {path}")

    def get_int(self, key: str, default: int) -> int:
        return _convert(self.params, key, default, int)

    def get_float(self, key: str, default: float) -> float:
        return _convert(self.params, key, default, float)


def _convert(params: dict[str, str], key: str, default, cast):
    raw = params.get(key)
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected {cast.__name__}, got {raw!r}") from exc


def _parse_seeds(raw: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in raw.split(",") if tok.strip() != "")
    except ValueError as exc:
        raise ConfigError(f"seeds must be comma-separated integers, got {raw!r}") from exc


def build_config(kind: str, raw: dict[str, str]) -> ExperimentConfig:
    raw = dict(raw)
    seeds = _parse_seeds(raw.pop("seeds", "0"))
    out_dir = Path(raw.pop("out", "out"))
    agents_raw = raw.pop("agents", None)
    if agents_raw is None:
        agents = DEFAULT_AGENTS.get(kind, ())
    else:
        agents = tuple(a.strip() for a in agents_raw.split(",") if a.strip())
    return ExperimentConfig(kind=kind, agents=agents, seeds=seeds, out_dir=out_dir, params=raw)


def load_config(
    kind: str, path: str | Path, overrides: dict[str, str] | None = None
) -> ExperimentConfig:
    """Read a config file and apply overrides (seed/out/arbitrary keys)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    raw = parse_config_text(text)
    for key, value in (overrides or {}).items():
        if not _KEY_RE.match(key):
            raise ConfigError(f"bad override key {key!r}")
        raw[key] = value
    return build_config(kind, raw)
