"""Experiment configuration: defaults, JSON file overrides, validation and provenance hash."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field, fields

from .errors import ConfigError
from .surface import SurfaceStructure, build_surface, surface_by_name
from .words import parse

ENV_OUT = "GEOCENSUS_OUT"
DEFAULT_OUT = "geocensus-out"
MODES = ("auto", "simple-exact", "orbit-bfs", "all-primitive")
PROFILES = ("desk",)
# fields that never change the content of an output file
NON_SEMANTIC = ("out", "workers", "plot")


@dataclass
class ExperimentConfig:
    surface: str | dict = "modular"
    target: str | dict = "3,4"
    seed: str = "a"
    type_seed: str = "aabAB"
    L: float = 30.0
    mode: str = "auto"
    margin: float = 0.5
    grid_step: float = 1.0
    window: list = field(default_factory=lambda: [15.0, 45.0])
    delta: float = 0.05
    bins: list = field(default_factory=lambda: [12, 12, 16])
    tol: float = 0.005
    bowen_L: float = 8.0
    profile: str = "desk"
    out: str | None = None
    workers: int = 1
    plot: bool = False

    @classmethod
    def load(cls, path: str | None = None, overrides: dict | None = None) -> "ExperimentConfig":
        """Defaults, then the JSON file, then explicit overrides (CLI flags)."""
        data: dict = {}
        if path:
            try:
                with open(path, encoding="utf-8") as fh:
                    data = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config {path}: {exc}") from exc
            if not isinstance(data, dict):
                raise ConfigError("config file must hold a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        for k, v in (overrides or {}).items():
            if v is not None:
                data[k] = v
        try:
            cfg = cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        cfg.validate()
        return cfg

    def validate(self) -> None:
        def need(ok: bool, msg: str):
            if not ok:
                raise ConfigError(msg)

        try:
            self.L = float(self.L)
            self.margin = float(self.margin)
            self.grid_step = float(self.grid_step)
            self.delta = float(self.delta)
            self.tol = float(self.tol)
            self.bowen_L = float(self.bowen_L)
            self.workers = int(self.workers)
            self.window = [float(v) for v in self.window]
            self.bins = [int(v) for v in self.bins]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"non-numeric config value: {exc}") from exc
        need(0 < self.L <= 200, "L must lie in (0, 200]")
        need(0 <= self.margin <= 5, "margin must lie in [0, 5]")
        need(0 < self.grid_step <= self.L, "grid_step must lie in (0, L]")
        need(len(self.window) == 2 and 0 < self.window[0] < self.window[1], "window must be [lo, hi] with 0 < lo < hi")
        need(0 < self.delta <= 0.1, "delta must lie in (0, 0.1]")
        need(len(self.bins) == 3 and min(self.bins) > 0, "bins must be three positive counts")
        need(self.bins[2] % 2 == 0, "the angle bin count must be even")
        need(self.tol > 0, "tol must be positive")
        need(0 < self.bowen_L <= 16, "bowen_L must lie in (0, 16]")
        need(self.mode in MODES, f"mode must be one of {', '.join(MODES)}")
        need(self.profile in PROFILES, f"profile must be one of {', '.join(PROFILES)}")
        need(1 <= self.workers <= 256, "workers must lie in [1, 256]")
        for name in ("seed", "type_seed"):
            try:
                w = parse(getattr(self, name))
            except ValueError as exc:
                raise ConfigError(f"{name}: {exc}") from exc
            need(len(w) > 0, f"{name} must be a nonempty word")
        for name in ("surface", "target"):
            try:
                self.resolve(name)
            except (ValueError, KeyError, TypeError) as exc:
                raise ConfigError(f"{name}: {exc}") from exc
            except Exception as exc:  # geometric errors from build_surface
                raise ConfigError(f"{name}: {exc}") from exc

    def resolve(self, name: str = "surface") -> SurfaceStructure:
        spec = getattr(self, name)
        if isinstance(spec, dict):
            return build_surface(spec["x"], spec["y"], label=spec.get("label"))
        return surface_by_name(str(spec))

    def semantic(self) -> dict:
        data = asdict(self)
        for k in NON_SEMANTIC:
            data.pop(k)
        return data

    def hash(self) -> str:
        blob = json.dumps(self.semantic(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def out_dir(self) -> str:
        return self.out or os.environ.get(ENV_OUT) or DEFAULT_OUT
