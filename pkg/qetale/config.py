"""Runtime settings.

Settings are resolved from defaults, the ``[tool.qetale]`` table of a TOML file,
``QETALE_<FIELD>`` environment variables and explicit overrides, in that order.
"""

from __future__ import annotations

import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterator, Mapping, Optional, Union

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from qetale.exceptions import UsageError

ENV_PREFIX = "QETALE_"
DEFAULT_CONFIG_NAME = "qetale.toml"


@dataclass(frozen=True)
class Settings:
    """Tunable limits and defaults."""

    max_depth: int = 8
    spair_limit: int = 100_000
    ratfun_reduce_terms: int = 64
    probe_bound: int = 20
    samples_per_stratum: int = 5
    seed: int = 0
    width: Fraction = Fraction(1, 1024)
    min_width_bits: int = 64

    def with_overrides(self, **overrides: Any) -> "Settings":
        """Return a copy with the non-``None`` overrides applied."""
        cleaned = {k: _coerce(k, v) for k, v in overrides.items() if v is not None}
        return replace(self, **cleaned)


_FIELD_TYPES = {f.name: f.type for f in fields(Settings)}


def _coerce(name: str, value: Any) -> Any:
    if name not in _FIELD_TYPES:
        raise UsageError(f"unknown setting {name!r}")
    try:
        if name == "width":
            width = Fraction(value) if not isinstance(value, str) else Fraction(value.strip())
            if width <= 0:
                raise ValueError("width must be positive")
            return width
        return int(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid value for {name}: {value!r} ({exc})") from exc


def _read_toml(path: Path) -> Dict[str, Any]:
    with open(path, "rb") as f:
        data = tomllib.load(f)
    table = data.get("tool", {}).get("qetale")
    if table is None:
        table = data.get("qetale", {})
    return dict(table)


def load_settings(
    path: Optional[Union[str, Path]] = None,
    env: Optional[Mapping[str, str]] = None,
) -> Settings:
    """Resolve settings from a TOML file and the environment.

    Args:
        path: Explicit TOML file. Without it, ``qetale.toml`` in the working
            directory is used when present.
        env: Environment mapping, ``os.environ`` by default.

    Returns:
        The resolved settings.

    Raises:
        UsageError: If the file is missing or a value cannot be coerced.
    """
    env = os.environ if env is None else env
    values: Dict[str, Any] = {}

    if path is not None:
        config_path = Path(path)
        if not config_path.is_file():
            raise UsageError(f"config file not found: {config_path}")
        values.update(_read_toml(config_path))
    elif Path(DEFAULT_CONFIG_NAME).is_file():
        values.update(_read_toml(Path(DEFAULT_CONFIG_NAME)))

    for name in _FIELD_TYPES:
        raw = env.get(ENV_PREFIX + name.upper())
        if raw is not None and raw != "":
            values[name] = raw

    return Settings().with_overrides(**values)


_active = Settings()


def get_settings() -> Settings:
    """Return the settings currently in effect."""
    return _active


@contextmanager
def use_settings(settings: Settings) -> Iterator[Settings]:
    """Make ``settings`` active for the duration of the block."""
    global _active
    previous = _active
    _active = settings
    try:
        yield settings
    finally:
        _active = previous
