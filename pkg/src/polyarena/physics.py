"""Forces, impulse-based collision resolution, and the per-step integrator.

The time unit is one simulation step (dt = 1): velocities are arena widths
per step, forces are arena widths per step squared. Each step runs

    1. accumulate force deltas and apply them to velocities,
    2. resolve contacts for the configured layer pairs with sequential
       impulses (up to `passes` sweeps),
    3. push still-penetrating pairs apart by `correction` * depth,
    4. integrate: position += velocity, angle += angular velocity.

Velocities update before positions (semi-implicit Euler), which bounds the
energy drift of the iterative solver.
"""

import itertools
import math

import numpy as np

from .errors import MissingSprite, UnknownLayer
from .geometry import detect_contact

DEFAULT_PASSES = 4
DEFAULT_CORRECTION = 0.8


def _as_layers(layers):
    return (layers,) if isinstance(layers, str) else tuple(layers)


class KinematicDelta:
    """Accumulated per-sprite velocity and angular-velocity changes."""

    def __init__(self):
        self._deltas = {}

    def add(self, sprite, dv=(0.0, 0.0), dw=0.0):
        # Sprites outside any State have id None; fall back to object identity.
        key = sprite.id if sprite.id is not None else ("anon", id(sprite))
        entry = self._deltas.setdefault(key, [sprite, np.zeros(2), 0.0])
        entry[1] = entry[1] + np.asarray(dv, dtype=np.float64)
        entry[2] += dw

    def merge(self, other):
        for sprite, dv, dw in other._deltas.values():
            self.add(sprite, dv, dw)
        return self

    def apply(self):
        for sprite, dv, dw in self._deltas.values():
            sprite.velocity = sprite.velocity + dv
            sprite.angular_velocity += dw

    def get(self, sprite):
        key = sprite.id if sprite.id is not None else ("anon", id(sprite))
        entry = self._deltas.get(key)
        if entry is None:
            return np.zeros(2), 0.0
        return entry[1], entry[2]

    def __len__(self):
        return len(self._deltas)


class Force:
    """Base force: reads sprites from its layers, emits a KinematicDelta."""

    def __init__(self, layers):
        self.layers = _as_layers(layers)

    def _sprites(self, state):
        out = []
        for layer in self.layers:
            out.extend(state.sprites(layer))
        return out

    def deltas(self, state):
        raise NotImplementedError


class Drag(Force):
    """Linear drag: dv = -coeff * v, dw = -coeff * w.

    Geometric velocity decay, so any coeff in [0, 1] caps the speed a
    constant driving force can reach.
    """

    def __init__(self, coeff, layers):
        super().__init__(layers)
        if coeff < 0:
            raise ValueError(f"drag coeff must be >= 0, got {coeff}")
        self.coeff = float(coeff)

    def deltas(self, state):
        out = KinematicDelta()
        for sprite in self._sprites(state):
            out.add(sprite, -self.coeff * sprite.velocity,
                    -self.coeff * sprite.angular_velocity)
        return out


class ConstantForce(Force):
    """Uniform force vector (gravity and the like): dv = F / m."""

    def __init__(self, vector, layers):
        super().__init__(layers)
        self.vector = np.asarray(vector, dtype=np.float64)

    def deltas(self, state):
        out = KinematicDelta()
        for sprite in self._sprites(state):
            out.add(sprite, self.vector * sprite.inv_mass)
        return out


class Friction(Force):
    """Constant-magnitude deceleration opposing motion, clamped so one
    step never reverses the direction of travel."""

    def __init__(self, coeff, layers):
        super().__init__(layers)
        if coeff < 0:
            raise ValueError(f"friction coeff must be >= 0, got {coeff}")
        self.coeff = float(coeff)

    def deltas(self, state):
        out = KinematicDelta()
        for sprite in self._sprites(state):
            speed = float(np.linalg.norm(sprite.velocity))
            if speed > 0:
                out.add(sprite, -min(self.coeff, speed) * sprite.velocity / speed)
        return out


class Tether(Force):
    """Distance constraint between sprite pairs, enforced by a
    momentum-conserving impulse pair along the connecting axis.

    Pairs come either from zipping two layers or from an explicit id pair.
    The impulse depends only on the positional error, so a pair sitting at
    rest_length receives no delta regardless of its velocities.
    """

    def __init__(self, layer_a=None, layer_b=None, sprite_ids=None, rest_length=0.0):
        super().__init__(())
        if rest_length < 0:
            raise ValueError(f"rest_length must be >= 0, got {rest_length}")
        self.layer_a = layer_a
        self.layer_b = layer_b
        self.sprite_ids = tuple(sprite_ids) if sprite_ids else None
        self.rest_length = float(rest_length)

    def _pairs(self, state):
        if self.sprite_ids:
            by_id = {s.id: s for s in state.z_order()}
            try:
                return [(by_id[self.sprite_ids[0]], by_id[self.sprite_ids[1]])]
            except KeyError as missing:
                raise MissingSprite(f"no sprite with id {missing}") from None
        return list(zip(state.sprites(self.layer_a), state.sprites(self.layer_b)))

    def deltas(self, state):
        out = KinematicDelta()
        for a, b in self._pairs(state):
            offset = b.position - a.position
            distance = float(np.linalg.norm(offset))
            if distance < 1e-12:
                continue
            error = distance - self.rest_length
            if abs(error) < 1e-12:
                continue  # satisfied constraint (within float noise): no delta
            axis = offset / distance
            inv_total = a.inv_mass + b.inv_mass
            if inv_total == 0.0:
                continue
            out.add(a, axis * error * (a.inv_mass / inv_total))
            out.add(b, -axis * error * (b.inv_mass / inv_total))
        return out


class Collision:
    """Collision configuration: which layer pairs collide, how bouncy the
    contacts are, and whether impulses also spin the bodies.

    A pair (layer, same layer) collides all sprite pairs within the layer.
    """

    def __init__(self, layer_pairs, elasticity=1.0, update_angular=True):
        if not 0.0 <= elasticity <= 1.0:
            raise ValueError(f"elasticity must be in [0, 1], got {elasticity}")
        if isinstance(layer_pairs, tuple) and len(layer_pairs) == 2 \
                and all(isinstance(x, str) for x in layer_pairs):
            layer_pairs = [layer_pairs]
        self.layer_pairs = [tuple(p) for p in layer_pairs]
        self.elasticity = float(elasticity)
        self.update_angular = bool(update_angular)


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def resolve_collision(contact, a, b, elasticity, update_angular):
    """Impulse for one contact; returns the delta without applying it.

    The impulse magnitude is the standard restitution impulse at the
    contact point; pairs already separating get a zero delta, as do pairs
    where both bodies are anchored (infinite mass).
    """
    out = KinematicDelta()
    normal = contact.normal
    r_a = contact.point - a.position
    r_b = contact.point - b.position

    vel_a = a.velocity + a.angular_velocity * np.array([-r_a[1], r_a[0]])
    vel_b = b.velocity + b.angular_velocity * np.array([-r_b[1], r_b[0]])
    closing = float((vel_b - vel_a) @ normal)
    if closing >= 0.0:
        return out

    inv_masses = a.inv_mass + b.inv_mass
    denom = inv_masses
    if update_angular:
        denom += _cross(r_a, normal) ** 2 * a.inv_inertia
        denom += _cross(r_b, normal) ** 2 * b.inv_inertia
    if denom == 0.0:
        return out

    j = -(1.0 + elasticity) * closing / denom
    impulse = j * normal
    out.add(a, -impulse * a.inv_mass,
            -j * _cross(r_a, normal) * a.inv_inertia if update_angular else 0.0)
    out.add(b, impulse * b.inv_mass,
            j * _cross(r_b, normal) * b.inv_inertia if update_angular else 0.0)
    return out


def sprite_pairs(state, layer_a, layer_b):
    """Ordered candidate pairs for a layer pair; same-layer pairs once each."""
    if layer_a not in state or layer_b not in state:
        missing = layer_a if layer_a not in state else layer_b
        raise UnknownLayer(f"no layer named {missing!r}")
    if layer_a == layer_b:
        return list(itertools.combinations(state.sprites(layer_a), 2))
    return list(itertools.product(state.sprites(layer_a), state.sprites(layer_b)))


def contacting_pairs(state, layer_a, layer_b):
    """All (sprite_a, sprite_b, Contact) triples currently in contact."""
    found = []
    for a, b in sprite_pairs(state, layer_a, layer_b):
        contact = detect_contact(a.world_vertices(), b.world_vertices())
        if contact is not None:
            found.append((a, b, contact))
    return found


def step_physics(state, forces, passes=DEFAULT_PASSES, correction=DEFAULT_CORRECTION):
    """Advance the state by one step under the given force list.

    Collision instances in `forces` configure the contact solver; everything
    else contributes velocity deltas. Mutates the state in place and returns
    it for chaining.
    """
    collisions = [f for f in forces if isinstance(f, Collision)]
    plain = [f for f in forces if not isinstance(f, Collision)]

    total = KinematicDelta()
    for force in plain:
        total.merge(force.deltas(state))
    total.apply()

    if collisions:
        # Positions are fixed during the impulse sweeps, so world vertices
        # and contact sets are computed once and reused across passes.
        manifolds = []
        for config in collisions:
            for layer_a, layer_b in config.layer_pairs:
                for a, b, contact in contacting_pairs(state, layer_a, layer_b):
                    manifolds.append((a, b, contact, config))

        for _ in range(passes):
            any_impulse = False
            for a, b, contact, config in manifolds:
                delta = resolve_collision(contact, a, b, config.elasticity,
                                          config.update_angular)
                if len(delta):
                    delta.apply()
                    any_impulse = True
            if not any_impulse:
                break

        for a, b, contact, _ in manifolds:
            # Re-detect per pair: earlier corrections may have separated it.
            fresh = detect_contact(a.world_vertices(), b.world_vertices())
            if fresh is None:
                continue
            inv_total = a.inv_mass + b.inv_mass
            if inv_total == 0.0:
                continue
            push = correction * fresh.depth * fresh.normal / inv_total
            a.position = a.position - push * a.inv_mass
            b.position = b.position + push * b.inv_mass

    for sprite in state.z_order():
        sprite.position = sprite.position + sprite.velocity
        sprite.angle += sprite.angular_velocity
    return state
