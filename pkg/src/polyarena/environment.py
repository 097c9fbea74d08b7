"""The environment: step/reset loop, timestep contract, and clone-based
ground-truth simulation for lookahead search.

Sub-step order is fixed (a breaking change guarded by a golden-trajectory
test): action space, then game rules, then physics, then the task verdict,
then observers. The reward on step t therefore describes exactly the state
rendered in step t's observations.

Determinism contract: a (seed, action sequence) pair reproduces the
trajectory bit for bit, including across clone_for_simulation boundaries.
"""

import copy
import enum
import inspect

import numpy as np

from .errors import InvariantViolation, SteppedAfterLast
from .physics import step_physics


class StepKind(enum.Enum):
    FIRST = "FIRST"
    MID = "MID"
    LAST = "LAST"


class TimeStep:
    """One environment tick: step kind, named observations, reward, meta."""

    __slots__ = ("kind", "observations", "reward", "meta")

    def __init__(self, kind, observations, reward, meta):
        self.kind = kind
        self.observations = observations
        self.reward = reward
        self.meta = meta

    def first(self):
        return self.kind is StepKind.FIRST

    def last(self):
        return self.kind is StepKind.LAST

    def __repr__(self):
        return f"TimeStep({self.kind.value}, reward={self.reward}, meta={self.meta})"


def _rng_stream(seed, index):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


class Environment:
    """Glue for one playable task.

    state_initializer: callable producing a fresh State each trial; it may
    take the init RNG stream as its only argument or take no arguments.
    forces: list of physics forces / collision configs.
    task / action_space: exactly one each (possibly composite).
    observers: named map of callables State -> observation (at least one).
    rules: optional game rules, applied in order.

    With auto_reset (default) a step after LAST internally resets and
    returns the new trial's FIRST; otherwise it raises SteppedAfterLast.
    """

    def __init__(self, state_initializer, task, action_space, observers,
                 forces=(), rules=(), seed=None, auto_reset=True,
                 passes=4, correction=0.8, meta=None):
        if not observers:
            raise InvariantViolation("observers", "need at least one observer")
        self.state_initializer = state_initializer
        self.task = task
        self.action_space = action_space
        self.observers = dict(observers)
        self.forces = list(forces)
        self.rules = list(rules)
        self.seed = seed if seed is not None else 0
        self.auto_reset = bool(auto_reset)
        self.passes = int(passes)
        self.correction = float(correction)
        self.meta = dict(meta or {})

        self._init_rng = _rng_stream(self.seed, 0)
        self._rules_rng = _rng_stream(self.seed, 1)
        self._wants_rng = len(inspect.signature(state_initializer).parameters) >= 1
        self.state = None
        self._step_index = 0
        self._trial_index = -1
        self._awaiting_reset = True

    # -- lifecycle -----------------------------------------------------------

    def reset(self):
        """Start a fresh trial: sample a state, clear task/rule memory."""
        if self._wants_rng:
            self.state = self.state_initializer(self._init_rng)
        else:
            self.state = self.state_initializer()
        self.task.reset(self.state)
        for rule in self.rules:
            rule.reset(self.state, self._rules_rng)
        self._step_index = 0
        self._trial_index += 1
        self._awaiting_reset = False
        return self._timestep(StepKind.FIRST, 0.0, phase=self._current_phase())

    def step(self, action):
        """Advance one tick; action None is the universal no-op."""
        if self._awaiting_reset:
            if not self.auto_reset:
                raise SteppedAfterLast("call reset() after a LAST timestep")
            return self.reset()

        self._step_index += 1
        directives = [rule.directives(self.state, self._step_index) for rule in self.rules]
        frozen = frozenset().union(*(d.frozen_layers for d in directives)) if directives else frozenset()
        snapshot = self._freeze(frozen)

        self.action_space.apply(action, self.state)
        for rule in self.rules:
            rule.step(self.state, self._step_index, self._rules_rng)
        step_physics(self.state, self.forces, self.passes, self.correction)
        self._thaw(snapshot)

        task = next((d.task_override for d in directives if d.task_override is not None),
                    self.task)
        verdict = task.verdict(self.state, self._step_index)
        rule_reset = any(d.request_reset for d in directives)
        kind = StepKind.LAST if (verdict.reset or rule_reset) else StepKind.MID
        if kind is StepKind.LAST:
            self._awaiting_reset = True
        phase = next((d.phase for d in directives if d.phase is not None), None)
        return self._timestep(kind, verdict.reward, phase=phase)

    # -- frozen layers ---------------------------------------------------------

    def _freeze(self, layers):
        """Snapshot kinematics of frozen layers; restored after physics so
        neither actions, impulses nor integration move them."""
        snapshot = []
        for layer in layers:
            for sprite in self.state.sprites(layer):
                snapshot.append((sprite, sprite.position.copy(), sprite.angle,
                                 sprite.velocity.copy(), sprite.angular_velocity))
        return snapshot

    @staticmethod
    def _thaw(snapshot):
        for sprite, position, angle, velocity, angular_velocity in snapshot:
            sprite.position = position
            sprite.angle = angle
            sprite.velocity = velocity
            sprite.angular_velocity = angular_velocity

    # -- observations ----------------------------------------------------------

    def _current_phase(self):
        for rule in self.rules:
            phase = getattr(rule, "current_phase", None)
            if phase is not None:
                return phase
        return None

    def _timestep(self, kind, reward, phase=None):
        observations = {name: obs(self.state) for name, obs in self.observers.items()}
        meta = {"step_index": self._step_index, "trial_index": self._trial_index}
        if phase is not None:
            meta["phase"] = phase
        return TimeStep(kind, observations, float(reward), meta)

    # -- specs & simulation ------------------------------------------------------

    def observation_spec(self):
        return {name: obs.spec() for name, obs in self.observers.items()}

    def action_spec(self):
        return self.action_space.spec()

    def clone_for_simulation(self):
        """Deep, independent copy: same future under the same actions,
        and stepping the clone never disturbs this environment."""
        return copy.deepcopy(self)
