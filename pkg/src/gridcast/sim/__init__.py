from .actors import Actor, Behavior, StepParams, spawn_actor, step_actor
from .flow import FlowField, compute_flow_field
from .sensor import Frame, lidar_scan
from .session import SessionData, load_session, record_session, record_sessions
from .world import FreeGrid, WorldMap, build_free_grid, generate_walls, place_movables

__all__ = [
    "Actor",
    "Behavior",
    "StepParams",
    "spawn_actor",
    "step_actor",
    "FlowField",
    "compute_flow_field",
    "Frame",
    "lidar_scan",
    "SessionData",
    "load_session",
    "record_session",
    "record_sessions",
    "FreeGrid",
    "WorldMap",
    "build_free_grid",
    "generate_walls",
    "place_movables",
]
