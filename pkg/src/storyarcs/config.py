"""Run configuration: module defaults, overridden by a JSON config file, overridden by flags."""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

from .arcshape import DEFAULT_LENGTH, DEFAULT_LOWPASS_M, DEFAULT_SMOOTH_W
from .corpus import DEFAULT_WINDOW
from .lexicon import DIMENSIONS
from .sentiment import DEFAULT_CONTEXT

CONFIG_ENV = "STORYARCS_CONFIG"


@dataclass
class RunConfig:
    lexicon_path: str | None = None
    dimension: str = "arousal"
    window_size: int = DEFAULT_WINDOW
    context: int = DEFAULT_CONTEXT
    stop_list_path: str | None = None
    band_delta: float = 0.0
    smooth_w: int | None = DEFAULT_SMOOTH_W
    lowpass_m: int | None = DEFAULT_LOWPASS_M
    resample_L: int = DEFAULT_LENGTH
    output_dir: str = "out"
    manifest_path: str | None = None

    def validate(self) -> "RunConfig":
        if self.dimension not in DIMENSIONS:
            raise ValueError(f"dimension must be one of {DIMENSIONS}, got {self.dimension!r}")
        if self.window_size < 1:
            raise ValueError(f"window_size must be >= 1, got {self.window_size}")
        if self.context < 1:
            raise ValueError(f"context must be >= 1, got {self.context}")
        if self.band_delta < 0:
            raise ValueError(f"band_delta must be >= 0, got {self.band_delta}")
        if self.smooth_w is not None and (self.smooth_w < 1 or self.smooth_w % 2 == 0):
            raise ValueError(f"smooth_w must be a positive odd integer, got {self.smooth_w}")
        if self.resample_L < 4:
            raise ValueError(f"resample_L must be >= 4, got {self.resample_L}")
        if self.lowpass_m is not None and not 1 <= self.lowpass_m <= self.resample_L // 2 + 1:
            raise ValueError(f"lowpass_m must be in [1, {self.resample_L // 2 + 1}], got {self.lowpass_m}")
        return self

    def merged(self, overrides: Mapping[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(self)}
        updates = {k: v for k, v in overrides.items() if k in known and v is not None}
        return dataclasses.replace(self, **updates)


def load_config(path: str | os.PathLike | None = None) -> RunConfig:
    """Read a JSON config; with no path, fall back to ``$STORYARCS_CONFIG`` if set."""
    if path is None:
        path = os.environ.get(CONFIG_ENV)
        if not path:
            return RunConfig()
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ValueError(f"{path}: unknown config keys {unknown}")
    # relative paths in a config file are relative to that file
    for key in ("lexicon_path", "stop_list_path", "manifest_path", "output_dir"):
        if raw.get(key) and not Path(raw[key]).is_absolute():
            raw[key] = str(path.parent / raw[key])
    return RunConfig(**raw)
