"""polyarena: a composable 2.5-D polygon game engine.

Sprites are convex polygons with rigid-body kinematics living in ordered
layers; forces, tasks, action spaces, observers and game rules compose
into environments with a step/reset loop, procedurally generated trials,
trajectory recording, and a real-time play server.
"""

from . import (action_spaces, geometry, observers, physics, procgen, recipes,
               recorder, rules, sprites, tasks)
from .environment import Environment, StepKind, TimeStep
from .geometry import Contact, Polygon, detect_contact
from .recipes import build, builtin
from .sprites import Sprite, State, make_sprite

__version__ = "0.1.0"

__all__ = [
    "Environment", "StepKind", "TimeStep", "Contact", "Polygon",
    "detect_contact", "build", "builtin", "Sprite", "State", "make_sprite",
    "action_spaces", "geometry", "observers", "physics", "procgen",
    "recipes", "recorder", "rules", "sprites", "tasks",
]
