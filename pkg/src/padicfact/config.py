"""Run configuration: defaults, an optional TOML file, then CLI flags."""

from __future__ import annotations

import os
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

CONFIG_ENV = "PADICFACT_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    p: int = 5
    N: int = 10
    M: int = 64
    budget: int = 10**6
    seed: int = 0
    output: str | None = None

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("precision N must be at least 2")
        if self.M < self.N:
            raise ValueError("truncation M must be at least N")
        if self.budget < 1:
            raise ValueError("budget must be positive")

    def to_json(self) -> dict:
        return asdict(self)

    def override(self, **kw) -> "RunConfig":
        names = {f.name for f in fields(self)}
        return replace(self, **{k: v for k, v in kw.items() if k in names and v is not None})


def load_config(path: str | os.PathLike | None = None) -> RunConfig:
    """Read ``path`` (or the file named by $PADICFACT_CONFIG) if any.

    Keys may sit at the top level or under a ``[run]`` table.
    """
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return RunConfig()
    with open(Path(path), "rb") as fh:
        data = tomllib.load(fh)
    data = data.get("run", data)
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**data)
