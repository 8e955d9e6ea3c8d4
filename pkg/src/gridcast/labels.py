"""Semantic label codes shared across the pipeline."""

PERMANENT = 0
MOVABLE = 1
DYNAMIC = 2
UNKNOWN = 255

NAMES = {PERMANENT: "permanent", MOVABLE: "movable", DYNAMIC: "dynamic", UNKNOWN: "unknown"}
