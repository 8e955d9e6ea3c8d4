from __future__ import annotations

import numpy as np
import pytest

from gridcast.config import Config
from gridcast.sim.world import WorldMap


def make_box_world(w: float = 10.0, h: float = 8.0, movables=None) -> WorldMap:
    walls = np.array(
        [
            [0.0, 0.0, w, 0.0],
            [w, 0.0, w, h],
            [w, h, 0.0, h],
            [0.0, h, 0.0, 0.0],
        ]
    )
    return WorldMap(bounds=(0.0, 0.0, w, h), walls=walls, movables=movables or [])


@pytest.fixture
def box_world() -> WorldMap:
    return make_box_world()


@pytest.fixture
def small_cfg() -> Config:
    cfg = Config()
    cfg.set("sim.arena_w", "10.0")
    cfg.set("sim.arena_h", "8.0")
    cfg.set("sim.n_interior_walls", "1")
    cfg.set("sim.n_movables", "2")
    cfg.set("sim.n_actors", "3")
    cfg.set("sim.t_session", "5.0")
    cfg.set("sim.n_rays", "180")
    cfg.set("sim.r_max", "12.0")
    cfg.set("sim.n_sessions", "2")
    cfg.set("sogm.r_in", "4.08")
    cfg.set("sogm.horizon", "1.0")
    return cfg
