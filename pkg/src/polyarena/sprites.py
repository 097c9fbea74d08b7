"""Sprites (convex polygonal rigid bodies) and the layered 2.5-D State.

A State is an ordered mapping of layer name -> ordered sprite list; layer
order is z-order: earlier layers render behind later ones, and within a
layer earlier sprites render behind later ones. The State assigns each
admitted sprite a monotonically increasing id so rules and tasks can track
bodies across steps; ids are per-state, which keeps replays reproducible.
"""

import math

import numpy as np

from . import geometry
from .errors import InvariantViolation, UnknownLayer, UnknownShapeName

DEFAULTS = {
    "x": 0.5,
    "y": 0.5,
    "shape": "square",
    "angle": 0.0,
    "scale": 0.1,
    "x_vel": 0.0,
    "y_vel": 0.0,
    "angular_vel": 0.0,
    "mass": 1.0,
    "c0": 0,
    "c1": 0,
    "c2": 0,
    "opacity": 255,
}

FACTOR_KEYS = tuple(DEFAULTS) + ("metadata",)


class Sprite:
    """A convex polygonal body with pose, kinematics, mass and flat color.

    mass may be math.inf for anchored bodies (walls, paddles): they ignore
    forces and impulses but still take part in contact detection.
    """

    __slots__ = ("shape", "position", "angle", "scale", "velocity",
                 "angular_velocity", "mass", "color", "opacity", "metadata",
                 "id", "_world_cache")

    def __init__(self, shape, position, angle=0.0, scale=0.1,
                 velocity=(0.0, 0.0), angular_velocity=0.0, mass=1.0,
                 color=(0, 0, 0), opacity=255, metadata=None):
        self.shape = shape
        self.position = np.asarray(position, dtype=np.float64).copy()
        self.angle = float(angle)
        self.scale = float(scale)
        self.velocity = np.asarray(velocity, dtype=np.float64).copy()
        self.angular_velocity = float(angular_velocity)
        self.mass = float(mass)
        self.color = tuple(int(c) for c in color)
        self.opacity = int(opacity)
        self.metadata = dict(metadata) if metadata else {}
        self.id = None
        self._world_cache = None
        self.validate()

    def validate(self):
        if not isinstance(self.shape, geometry.Polygon):
            raise InvariantViolation("shape", "must be a geometry.Polygon")
        if not self.scale > 0:
            raise InvariantViolation("scale", f"must be > 0, got {self.scale}")
        if not self.mass > 0:
            raise InvariantViolation("mass", f"must be > 0, got {self.mass}")
        for field, value in (("position", self.position), ("velocity", self.velocity)):
            if value.shape != (2,) or not np.isfinite(value).all():
                raise InvariantViolation(field, f"must be a finite 2-vector, got {value}")
        if not math.isfinite(self.angle):
            raise InvariantViolation("angle", "must be finite")
        if not math.isfinite(self.angular_velocity):
            raise InvariantViolation("angular_vel", "must be finite")
        for name, value in zip(("c0", "c1", "c2"), self.color):
            if not 0 <= value <= 255:
                raise InvariantViolation(name, f"must be in [0, 255], got {value}")
        if not 0 <= self.opacity <= 255:
            raise InvariantViolation("opacity", f"must be in [0, 255], got {self.opacity}")

    @property
    def inv_mass(self):
        return 0.0 if math.isinf(self.mass) else 1.0 / self.mass

    @property
    def inertia(self):
        """Moment of inertia about the centroid at the sprite's scale."""
        if math.isinf(self.mass):
            return math.inf
        return self.mass * self.shape.unit_inertia * self.scale ** 2

    @property
    def inv_inertia(self):
        inertia = self.inertia
        return 0.0 if math.isinf(inertia) else 1.0 / inertia

    def world_vertices(self):
        # Pose-keyed cache: several consumers (solver, tasks, renderer) ask
        # within one step while the pose is unchanged. Callers never mutate
        # the returned array.
        key = (self.position[0], self.position[1], self.angle, self.scale)
        if self._world_cache is not None and self._world_cache[0] == key:
            return self._world_cache[1]
        verts = geometry.world_vertices(self.shape, self.position, self.angle, self.scale)
        self._world_cache = (key, verts)
        return verts

    def contains(self, point):
        return geometry.point_in_polygon(point, self.world_vertices())

    def __repr__(self):
        x, y = self.position
        return f"Sprite(id={self.id}, pos=({x:.3f}, {y:.3f}), scale={self.scale})"


def make_sprite(factors=None, **kwargs):
    """Build a sprite from a (possibly partial) factor assignment.

    Unspecified factors take the documented defaults: a black unit-mass
    square of scale 0.1 at the arena center, at rest, fully opaque.
    """
    merged = dict(DEFAULTS)
    for source in (factors or {}), kwargs:
        for key, value in source.items():
            if key not in FACTOR_KEYS and key != "vertices":
                raise InvariantViolation(key, "unknown sprite factor")
            merged[key] = value

    if "vertices" in merged:
        shape = geometry.Polygon(merged.pop("vertices"))
        merged.pop("shape", None)
    else:
        name = merged.pop("shape")
        if isinstance(name, geometry.Polygon):
            shape = name
        elif name in geometry.SHAPES:
            shape = geometry.SHAPES[name]
        else:
            raise UnknownShapeName(f"no shape named {name!r}")

    return Sprite(
        shape=shape,
        position=(merged["x"], merged["y"]),
        angle=merged["angle"],
        scale=merged["scale"],
        velocity=(merged["x_vel"], merged["y_vel"]),
        angular_velocity=merged["angular_vel"],
        mass=merged["mass"],
        color=(merged["c0"], merged["c1"], merged["c2"]),
        opacity=merged["opacity"],
        metadata=merged.get("metadata"),
    )


class State:
    """Ordered layers of sprites; insertion order defines the z-order."""

    def __init__(self, layers=None):
        self._layers = {}
        self._next_id = 1
        for name, sprites in (layers.items() if isinstance(layers, dict)
                              else (layers or [])):
            self.add_layer(name, sprites)

    def add_layer(self, name, sprites=()):
        if name in self._layers:
            raise InvariantViolation("layer", f"duplicate layer name {name!r}")
        self._layers[name] = []
        self.mutate_layer(name, add=sprites)

    def _admit(self, sprite):
        sprite.validate()
        if sprite.id is None:
            sprite.id = self._next_id
            self._next_id += 1
        return sprite

    @property
    def layer_names(self):
        return list(self._layers)

    def __contains__(self, layer):
        return layer in self._layers

    def sprites(self, layer):
        try:
            return list(self._layers[layer])
        except KeyError:
            raise UnknownLayer(f"no layer named {layer!r}") from None

    def z_order(self):
        """All sprites back-to-front: layer order, then in-layer order."""
        return [s for sprites in self._layers.values() for s in sprites]

    def layers(self):
        """(name, sprites) pairs in z-order; sprite lists are copies."""
        return [(name, list(sprites)) for name, sprites in self._layers.items()]

    def mutate_layer(self, layer, add=(), remove=None):
        """Apply removals (by predicate) then additions to one layer.

        Surviving sprites keep their relative order; additions append.
        """
        if layer not in self._layers:
            raise UnknownLayer(f"no layer named {layer!r}")
        if remove is not None:
            self._layers[layer] = [s for s in self._layers[layer] if not remove(s)]
        for sprite in add:
            self._layers[layer].append(self._admit(sprite))

    def count(self, layer=None):
        if layer is None:
            return sum(len(s) for s in self._layers.values())
        return len(self.sprites(layer))

    def __repr__(self):
        inner = ", ".join(f"{n}[{len(s)}]" for n, s in self._layers.items())
        return f"State({inner})"
