"""Game rules: non-physical dynamics and multi-phase trial structure.

Rules run each step after the action space and before physics, in
declaration order, so sprites they create take part in the same step's
physics. A rule may also publish step directives ahead of the action
stage: layers to freeze, a task override, or a trial-reset request; the
plain rules publish nothing and only PhaseSequence uses this hook.
"""

import math

import numpy as np

from .errors import ImmutableField
from .physics import contacting_pairs

MUTABLE_FIELDS = ("x", "y", "angle", "scale", "x_vel", "y_vel", "angular_vel",
                  "mass", "c0", "c1", "c2", "opacity")


class StepDirectives:
    """What a rule wants from the surrounding step loop."""

    __slots__ = ("frozen_layers", "task_override", "request_reset", "phase")

    def __init__(self, frozen_layers=(), task_override=None,
                 request_reset=False, phase=None):
        self.frozen_layers = frozenset(frozen_layers)
        self.task_override = task_override
        self.request_reset = bool(request_reset)
        self.phase = phase


class Rule:
    def reset(self, state, rng):
        pass

    def directives(self, state, step_index):
        return StepDirectives()

    def step(self, state, step_index, rng):
        raise NotImplementedError


def _assign(sprite, field, value):
    if field in ("shape", "id", "vertices"):
        raise ImmutableField(f"{field} cannot be reassigned on a live sprite")
    if field == "x":
        sprite.position = np.array([float(value), sprite.position[1]])
    elif field == "y":
        sprite.position = np.array([sprite.position[0], float(value)])
    elif field == "x_vel":
        sprite.velocity = np.array([float(value), sprite.velocity[1]])
    elif field == "y_vel":
        sprite.velocity = np.array([sprite.velocity[0], float(value)])
    elif field == "angle":
        sprite.angle = float(value)
    elif field == "scale":
        sprite.scale = float(value)
    elif field == "angular_vel":
        sprite.angular_velocity = float(value)
    elif field == "mass":
        sprite.mass = float(value)
    elif field == "c0":
        sprite.color = (int(value), sprite.color[1], sprite.color[2])
    elif field == "c1":
        sprite.color = (sprite.color[0], int(value), sprite.color[2])
    elif field == "c2":
        sprite.color = (sprite.color[0], sprite.color[1], int(value))
    elif field == "opacity":
        sprite.opacity = int(value)
    else:
        sprite.metadata[field] = value
    sprite.validate()


class VanishOnContact(Rule):
    """Remove every prey sprite that touches any predator sprite."""

    def __init__(self, predator_layer, prey_layer):
        self.predator_layer = predator_layer
        self.prey_layer = prey_layer

    def step(self, state, step_index, rng):
        eaten = {b.id for _, b, _ in
                 contacting_pairs(state, self.predator_layer, self.prey_layer)}
        if eaten:
            state.mutate_layer(self.prey_layer, remove=lambda s: s.id in eaten)


class ModifyOnContact(Rule):
    """Apply field assignments to layer_a sprites touching layer_b sprites."""

    def __init__(self, layer_a, layer_b, assignments):
        self.layer_a = layer_a
        self.layer_b = layer_b
        self.assignments = dict(assignments)

    def step(self, state, step_index, rng):
        touched = {a.id for a, _, _ in
                   contacting_pairs(state, self.layer_a, self.layer_b)}
        for sprite in state.sprites(self.layer_a):
            if sprite.id in touched:
                for field, value in self.assignments.items():
                    _assign(sprite, field, value)


class ConditionalCreate(Rule):
    """Append factory output to a layer while predicate(state) holds and
    the layer is below max_count sprites."""

    def __init__(self, predicate, factory, layer, max_count):
        self.predicate = predicate
        self.factory = factory
        self.layer = layer
        self.max_count = int(max_count)

    def step(self, state, step_index, rng):
        if state.count(self.layer) < self.max_count and self.predicate(state):
            state.mutate_layer(self.layer, add=[self.factory(rng)])


class TimedRule(Rule):
    """Run the inner rule only while start_step <= step_index < end_step."""

    def __init__(self, start_step, end_step, inner):
        self.start_step = int(start_step)
        self.end_step = math.inf if end_step is None else int(end_step)
        self.inner = inner

    def reset(self, state, rng):
        self.inner.reset(state, rng)

    def step(self, state, step_index, rng):
        if self.start_step <= step_index < self.end_step:
            self.inner.step(state, step_index, rng)


class RandomDrift(Rule):
    """Constant-speed random-turn motion for scripted movers (ghosts).

    With probability turn_prob per step each sprite's velocity rotates by
    a uniform angle up to max_turn; speed is pinned to `speed`.
    """

    def __init__(self, layer, speed, turn_prob=0.1, max_turn=math.pi):
        self.layer = layer
        self.speed = float(speed)
        self.turn_prob = float(turn_prob)
        self.max_turn = float(max_turn)

    def reset(self, state, rng):
        for sprite in state.sprites(self.layer):
            heading = rng.uniform(0.0, 2.0 * math.pi)
            sprite.velocity = self.speed * np.array([math.cos(heading), math.sin(heading)])

    def step(self, state, step_index, rng):
        for sprite in state.sprites(self.layer):
            if rng.random() < self.turn_prob:
                turn = rng.uniform(-self.max_turn, self.max_turn)
                c, s = math.cos(turn), math.sin(turn)
                vx, vy = sprite.velocity
                sprite.velocity = np.array([c * vx - s * vy, s * vx + c * vy])
            norm = float(np.linalg.norm(sprite.velocity))
            if norm > 0:
                sprite.velocity = self.speed * sprite.velocity / norm


class Phase:
    """One trial segment: a name, a duration in steps (None = open-ended),
    an optional continuation predicate, the rules active during the phase,
    an optional task override, and layers frozen for the phase."""

    def __init__(self, name, duration=None, until=None, rules=(),
                 task=None, frozen_layers=()):
        if duration is not None and duration < 1:
            raise ValueError(f"phase duration must be >= 1, got {duration}")
        self.name = name
        self.duration = duration
        self.until = until
        self.rules = list(rules)
        self.task = task
        self.frozen_layers = tuple(frozen_layers)


class PhaseSequence(Rule):
    """Advance through phases (e.g. fixation -> stimulus -> response);
    after the last phase elapses, request a trial reset.

    A transition fires exactly once per boundary: the step on which a
    phase's duration has elapsed (or its predicate returns true) already
    belongs to the next phase.
    """

    def __init__(self, phases):
        phases = list(phases)
        if not phases:
            raise ValueError("need at least one phase")
        self.phases = phases
        self.reset(None, None)

    def reset(self, state, rng):
        self._index = 0
        self._steps_in_phase = 0
        if state is not None:
            for phase in self.phases:
                for rule in phase.rules:
                    rule.reset(state, rng)
                if phase.task is not None:
                    phase.task.reset(state)

    def _advance_if_due(self, state):
        while self._index < len(self.phases):
            phase = self.phases[self._index]
            elapsed = phase.duration is not None and self._steps_in_phase >= phase.duration
            fired = phase.until is not None and self._steps_in_phase > 0 and phase.until(state)
            if not (elapsed or fired):
                return
            self._index += 1
            self._steps_in_phase = 0

    def directives(self, state, step_index):
        self._advance_if_due(state)
        if self._index >= len(self.phases):
            return StepDirectives(request_reset=True)
        phase = self.phases[self._index]
        return StepDirectives(frozen_layers=phase.frozen_layers,
                              task_override=phase.task,
                              phase=phase.name)

    def step(self, state, step_index, rng):
        if self._index >= len(self.phases):
            return
        for rule in self.phases[self._index].rules:
            rule.step(state, step_index, rng)
        self._steps_in_phase += 1

    @property
    def current_phase(self):
        if self._index >= len(self.phases):
            return None
        return self.phases[self._index].name
