"""World configuration and the flat ``key = value`` config file format.

The file format is deliberately small::

    # comment
    n_stories = 100
    stdev_soc-or-sd = 5.03
    avoid-edges = TRUE
    vary.curious = [false, true]

Keys are case-sensitive; hyphens and underscores are interchangeable on
read. Booleans accept ``true``/``false`` in any case. Lists use square
brackets with comma-separated scalars.
"""

from __future__ import annotations

import dataclasses
import math
import re
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Union

__all__ = [
    "ConfigError",
    "WorldConfig",
    "parse_value",
    "parse_text",
    "read_file",
    "config_from_mapping",
    "load_config",
    "dump_config",
    "canonical_key",
    "field_for_key",
]

Scalar = Union[bool, int, float, str]

MAX_SEED = 2**64 - 1


class ConfigError(ValueError):
    """Raised for invalid configuration values or malformed config files."""


@dataclass(frozen=True)
class WorldConfig:
    """Every model parameter. Defaults are the constants of the four-scenario experiment."""

    steps: int = 10
    n_stories: int = 100
    n_developers: int = 50
    pso: float = 0.0
    mean_difficulty: float = 5.0
    stdev_difficulty: float = 5.2
    mean_competence: float = 5.0
    stdev_competence: float = 9.7
    mean_sosd: float = 0.2
    stdev_sosd: float = 5.03
    mean_enquiry: float = 0.0
    stdev_enquiry: float = 5.1
    increase_comp_rate: float = 0.13
    decrease_comp_rate: float = 0.64
    # parsed and echoed, not used by the model
    tolerance: float = 5.5
    proximity: float = 19.0
    sociable: bool = False
    curious: bool = False
    avoid_edges: bool = True
    looking_for_stories: bool = True
    # keep a failed team attached to its story for the next tick instead of disbanding it
    persist_failed_teams: bool = False
    world_half_extent: float = 16.5
    band_k: float = 0.75
    exponent_cap: float = 8.0
    contribution_cap: float = 1e9
    seed: int = 0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.type == "bool":
                if not isinstance(value, (bool,)):
                    raise ConfigError(f"{f.name} must be a boolean, got {value!r}")
            elif f.type == "int":
                if isinstance(value, bool) or not isinstance(value, int):
                    if isinstance(value, float) and value.is_integer():
                        object.__setattr__(self, f.name, int(value))
                    else:
                        raise ConfigError(f"{f.name} must be an integer, got {value!r}")
            else:
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ConfigError(f"{f.name} must be a number, got {value!r}")
                if not math.isfinite(value):
                    raise ConfigError(f"{f.name} must be finite, got {value!r}")
                object.__setattr__(self, f.name, float(value))

        if self.steps < 1:
            raise ConfigError("steps must be >= 1")
        if self.n_stories < 0:
            raise ConfigError("n_stories must be >= 0")
        if self.n_developers < 1:
            raise ConfigError("n_developers must be >= 1")
        if self.pso < 0:
            raise ConfigError("pso must be >= 0")
        if self.proximity < 0:
            raise ConfigError("proximity must be >= 0")
        for name in ("increase_comp_rate", "decrease_comp_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        for name in ("stdev_difficulty", "stdev_competence", "stdev_sosd", "stdev_enquiry"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.world_half_extent <= 0:
            raise ConfigError("world_half_extent must be > 0")
        if self.exponent_cap <= 0 or self.contribution_cap <= 0:
            raise ConfigError("exponent_cap and contribution_cap must be > 0")
        if not 0 <= self.seed <= MAX_SEED:
            raise ConfigError("seed must be an unsigned 64-bit integer")

    def replace(self, **changes: Any) -> "WorldConfig":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


FIELD_NAMES = tuple(f.name for f in fields(WorldConfig))
_FIELD_TYPES = {f.name: f.type for f in fields(WorldConfig)}

# File keys that differ from the attribute name. The left side is the
# canonical (underscore) spelling written by ``dump_config``.
_FILE_KEYS = {
    "mean_soc_or_sd": "mean_sosd",
    "stdev_soc_or_sd": "stdev_sosd",
}
_FIELD_TO_FILE_KEY = {v: k for k, v in _FILE_KEYS.items()}
_ALIASES = {
    "initial_stories": "n_stories",
    "initial_developers": "n_developers",
    "max_ticks": "steps",
}


def canonical_key(key: str) -> str:
    return key.strip().replace("-", "_")


def field_for_key(key: str) -> str:
    """Map a file key (any hyphen/underscore spelling) to a WorldConfig field name."""
    k = canonical_key(key)
    k = _FILE_KEYS.get(k, _ALIASES.get(k, k))
    if k not in _FIELD_TYPES:
        raise ConfigError(f"unknown config key {key!r}")
    return k


_INT_RE = re.compile(r"^[+-]?\d+$")


def parse_value(text: str) -> Union[Scalar, List[Scalar]]:
    """Parse a scalar or bracketed list from its file representation."""
    s = text.strip()
    if s.startswith("["):
        if not s.endswith("]"):
            raise ConfigError(f"unterminated list: {text!r}")
        body = s[1:-1].strip()
        if not body:
            return []
        return [parse_value(part) for part in body.split(",")]
    low = s.lower()
    if low == "true":
        return True
    if low == "false":
        return False
    if len(s) >= 2 and s[0] == s[-1] and s[0] in "\"'":
        return s[1:-1]
    if _INT_RE.match(s):
        return int(s)
    try:
        return float(s)
    except ValueError:
        return s


def parse_text(text: str, source: str = "<string>") -> Dict[str, Any]:
    """Parse config text into an ordered ``{key: value}`` dict (keys as written)."""
    out: Dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        out[key] = parse_value(value)
    return out


def read_file(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_text(text, source=str(path))


def coerce_field(name: str, value: Any) -> Any:
    """Coerce a parsed file value to the type of field ``name``."""
    kind = _FIELD_TYPES[name]
    if kind == "bool":
        if isinstance(value, bool):
            return value
        if isinstance(value, (int, float)) and value in (0, 1):
            return bool(value)
        raise ConfigError(f"{name} expects a boolean, got {value!r}")
    if kind == "int":
        if isinstance(value, bool):
            raise ConfigError(f"{name} expects an integer, got {value!r}")
        if isinstance(value, int):
            return value
        if isinstance(value, float) and value.is_integer():
            return int(value)
        raise ConfigError(f"{name} expects an integer, got {value!r}")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} expects a number, got {value!r}")
    return float(value)


def config_from_mapping(
    values: Mapping[str, Any], base: WorldConfig | None = None
) -> WorldConfig:
    """Build a WorldConfig from file-style keys, starting from ``base`` (defaults if None)."""
    changes = {}
    for key, value in values.items():
        name = field_for_key(key)
        changes[name] = coerce_field(name, value)
    base = base if base is not None else WorldConfig()
    return dataclasses.replace(base, **changes)


def load_config(path: Union[str, Path]) -> WorldConfig:
    return config_from_mapping(read_file(path))


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(format_value(v) for v in value) + "]"
    return str(value)


def dump_config(config: WorldConfig, keys: Iterable[str] | None = None) -> str:
    """Render ``config`` in canonical underscore form, one key per line."""
    names = FIELD_NAMES if keys is None else tuple(keys)
    lines = []
    for name in names:
        key = _FIELD_TO_FILE_KEY.get(name, name)
        lines.append(f"{key} = {format_value(getattr(config, name))}")
    return "\n".join(lines) + "\n"
