"""key=value configuration files with a typed, range-checked schema.

Files are plain text, one ``key = value`` per line, ``#`` starts a comment.
Keys are namespaced by module prefix (``sim.``, ``annot.``, ``sogm.``,
``net.``, ``risk.``, ``plan.``, ``eval.``). Unknown keys are rejected so a
typo never silently falls back to a default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .errors import ConfigError


@dataclass(frozen=True)
class _Key:
    kind: type
    default: Any
    lo: float | None = None
    hi: float | None = None
    choices: tuple[str, ...] | None = None


def _num(kind, default, lo=None, hi=None):
    return _Key(kind, default, lo, hi)


SCHEMA: dict[str, _Key] = {
    # simulated world and sensor
    "sim.arena_w": _num(float, 16.0, 2.0, 200.0),
    "sim.arena_h": _num(float, 12.0, 2.0, 200.0),
    "sim.n_interior_walls": _num(int, 3, 0, 50),
    "sim.door_width": _num(float, 1.4, 0.5, 5.0),
    "sim.n_movables": _num(int, 4, 0, 100),
    "sim.movable_min": _num(float, 0.4, 0.05, 5.0),
    "sim.movable_max": _num(float, 0.9, 0.05, 5.0),
    "sim.movable_presence": _num(float, 0.85, 0.0, 1.0),
    "sim.n_actors": _num(int, 5, 0, 100),
    "sim.behavior": _Key(str, "bouncer", choices=("bouncer", "wanderer", "flow")),
    "sim.actor_speed": _num(float, 1.0, 0.01, 10.0),
    "sim.actor_radius": _num(float, 0.3, 0.02, 2.0),
    "sim.wander_eta": _num(float, 0.3, 0.0, math.pi),
    "sim.repulsion_radius": _num(float, 1.5, 0.0, 20.0),
    "sim.avoidance_radius": _num(float, 0.6, 0.0, 20.0),
    "sim.flow_kappa": _num(float, 0.5, 0.0, 1.0),
    "sim.n_goals": _num(int, 4, 1, 50),
    "sim.goal_tolerance": _num(float, 0.3, 0.01, 5.0),
    "sim.dl_flow": _num(float, 0.2, 0.02, 2.0),
    "sim.flow_clearance": _num(float, 0.3, 0.0, 2.0),
    "sim.t_session": _num(float, 30.0, 0.1, 3600.0),
    "sim.f_lidar": _num(float, 10.0, 0.1, 100.0),
    "sim.n_rays": _num(int, 720, 1, 4096),
    "sim.r_max": _num(float, 20.0, 0.5, 200.0),
    "sim.sigma_r": _num(float, 0.0, 0.0, 1.0),
    "sim.robot_speed": _num(float, 0.8, 0.0, 5.0),
    "sim.robot_radius": _num(float, 0.3, 0.02, 2.0),
    "sim.n_waypoints": _num(int, 4, 1, 50),
    "sim.n_sessions": _num(int, 4, 1, 64),
    # self-supervised annotation
    "annot.dl_map": _num(float, 0.06, 0.01, 1.0),
    "annot.theta_dyn": _num(float, 0.5, 0.0, 1.0),
    # SOGM geometry and generation
    "sogm.dl_2d": _num(float, 0.12, 0.01, 1.0),
    "sogm.dt": _num(float, 0.1, 0.01, 10.0),
    "sogm.horizon": _num(float, 3.0, 0.1, 60.0),
    "sogm.r_in": _num(float, 8.0, 0.5, 100.0),
    "sogm.n_f": _num(int, 3, 1, 10),
    "sogm.dl_sub": _num(float, 0.03, 0.005, 1.0),
    "sogm.stride": _num(int, 1, 1, 1000),
    "sogm.label_source": _Key(str, "truth", choices=("truth", "inferred")),
    # predictor
    "net.n1": _num(int, 3, 1, 6),
    "net.n2": _num(int, 2, 1, 8),
    "net.n3": _num(int, 2, 1, 8),
    "net.base_channels": _num(int, 16, 2, 256),
    "net.leaky_slope": _num(float, 0.1, 0.0, 1.0),
    "net.residual_scale_init": _num(float, 0.1, 0.0, 10.0),
    "net.share_propagation_weights": _Key(bool, False),
    "net.mask_mode": _Key(str, "active", choices=("gt", "active", "none")),
    "net.neg_ratio": _num(float, 2.0, 0.0, 100.0),
    "net.augment": _Key(bool, True),
    "net.lr": _num(float, 1e-2, 0.0, 10.0),
    "net.lr_final": _num(float, 1e-4, 0.0, 10.0),
    "net.momentum": _num(float, 0.98, 0.0, 0.9999),
    "net.grad_clip": _num(float, 2.0, 0.0, 1e9),
    "net.epochs": _num(int, 100, 1, 100000),
    "net.batch_size": _num(int, 4, 1, 1024),
    # risk maps
    "risk.p": _num(float, 3.0, 1.0, 64.0),
    "risk.d0": _num(float, 2.0, 0.01, 50.0),
    "risk.theta_occ": _num(float, 0.5, 1e-6, 1.0 - 1e-6),
    # planner
    "plan.w_risk": _num(float, 1.0, 0.0, 1e6),
    "plan.w_smooth": _num(float, 0.5, 0.0, 1e6),
    "plan.w_vel": _num(float, 1.0, 0.0, 1e6),
    "plan.v_max": _num(float, 1.2, 0.01, 20.0),
    "plan.v_nom": _num(float, 1.0, 0.01, 20.0),
    "plan.iters": _num(int, 200, 1, 100000),
    "plan.step": _num(float, 0.05, 1e-9, 10.0),
    "plan.k_nearest": _num(int, 3, 0, 50),
    # evaluation reports
    "eval.curve_points": _num(int, 2048, 2, 10_000_000),
}

# Overlay applied by the --small CLI flag: a 48x48, 11-layer pipeline that
# runs the full record->eval chain in CI time.
SMALL_PROFILE: dict[str, str] = {
    "sim.arena_w": "10.0",
    "sim.arena_h": "8.0",
    "sim.n_interior_walls": "2",
    "sim.n_movables": "3",
    "sim.n_actors": "4",
    "sim.t_session": "12.0",
    "sim.n_rays": "360",
    "sim.r_max": "12.0",
    "sim.n_sessions": "3",
    "sogm.r_in": "4.08",
    "sogm.horizon": "1.0",
    "sogm.stride": "4",
    "net.epochs": "60",
    "plan.iters": "120",
}


class Config:
    """Validated flat key->value store with schema defaults."""

    def __init__(self, overrides: dict[str, str] | None = None):
        self._values: dict[str, Any] = {k: spec.default for k, spec in SCHEMA.items()}
        if overrides:
            for k, v in overrides.items():
                self.set(k, v)

    def set(self, key: str, raw: str) -> None:
        if key not in SCHEMA:
            raise ConfigError(f"unknown config key '{key}'")
        spec = SCHEMA[key]
        raw = raw.strip()
        try:
            if spec.kind is bool:
                if raw.lower() in ("1", "true", "yes", "on"):
                    val: Any = True
                elif raw.lower() in ("0", "false", "no", "off"):
                    val = False
                else:
                    raise ValueError(raw)
            elif spec.kind is int:
                val = int(raw)
            elif spec.kind is float:
                val = float(raw)
            else:
                val = raw
        except ValueError:
            raise ConfigError(f"config key '{key}' expects {spec.kind.__name__}, got '{raw}'") from None
        if spec.choices is not None and val not in spec.choices:
            raise ConfigError(f"config key '{key}' must be one of {spec.choices}, got '{val}'")
        if spec.lo is not None and val < spec.lo:
            raise ConfigError(f"config key '{key}'={val} below minimum {spec.lo}")
        if spec.hi is not None and val > spec.hi:
            raise ConfigError(f"config key '{key}'={val} above maximum {spec.hi}")
        if spec.kind is float and not math.isfinite(val):
            raise ConfigError(f"config key '{key}' must be finite, got {val}")
        self._values[key] = val

    def __getitem__(self, key: str) -> Any:
        try:
            return self._values[key]
        except KeyError:
            raise ConfigError(f"unknown config key '{key}'") from None

    def section(self, prefix: str) -> dict[str, Any]:
        p = prefix.rstrip(".") + "."
        return {k: v for k, v in self._values.items() if k.startswith(p)}

    def items(self):
        return self._values.items()

    def dump(self) -> str:
        lines = [f"{k} = {_fmt(v)}" for k, v in sorted(self._values.items())]
        return "\n".join(lines) + "\n"


def _fmt(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def parse_lines(text: str) -> dict[str, str]:
    """Parse key=value lines, ignoring blank lines and # comments."""
    out: dict[str, str] = {}
    for ln, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {ln}: expected 'key = value', got '{line.strip()}'")
        key, raw = stripped.split("=", 1)
        out[key.strip()] = raw.strip()
    return out


def load_config(path: str | Path | None, small: bool = False) -> Config:
    """Build a Config from defaults, the optional --small overlay, then a file."""
    cfg = Config()
    if small:
        for k, v in SMALL_PROFILE.items():
            cfg.set(k, v)
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        for k, v in parse_lines(p.read_text()).items():
            cfg.set(k, v)
    return cfg
