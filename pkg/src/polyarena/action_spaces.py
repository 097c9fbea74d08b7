"""Action spaces: translate subject/agent input into state changes.

Each space is stateless apart from its configuration; apply() is a
deterministic function of (action, state). Out-of-range continuous input
is clamped rather than rejected (live input devices jitter past bounds);
structurally wrong input raises ActionOutOfSpec. An action of None is the
universal no-op, used by the play server when no input arrived this tick.
"""

import numbers

import numpy as np

from .errors import ActionOutOfSpec, MissingSubAction, UnknownLayer


class ActionSpec:
    """Structural description of an action space, serializable for the
    play-server handshake so the client can build the right input mapper."""

    def __init__(self, kind, name, lo=None, hi=None, tokens=None, parts=None):
        self.kind = kind
        self.name = name
        self.lo = None if lo is None else np.asarray(lo, dtype=np.float64)
        self.hi = None if hi is None else np.asarray(hi, dtype=np.float64)
        self.tokens = list(tokens) if tokens is not None else None
        self.parts = dict(parts) if parts is not None else None

    def to_json(self):
        doc = {"kind": self.kind, "name": self.name}
        if self.lo is not None:
            doc["lo"] = self.lo.tolist()
            doc["hi"] = self.hi.tolist()
        if self.tokens is not None:
            doc["tokens"] = list(self.tokens)
        if self.parts is not None:
            doc["parts"] = {k: v.to_json() for k, v in self.parts.items()}
        return doc

    def sample(self, rng):
        """A uniformly random in-spec action (random policies, fuzzing)."""
        if self.kind in ("continuous-box", "click"):
            return rng.uniform(self.lo, self.hi)
        if self.kind == "discrete":
            return self.tokens[int(rng.integers(len(self.tokens)))]
        return {name: spec.sample(rng) for name, spec in self.parts.items()}


def _clamped_vector(action, lo, hi, arity, what):
    try:
        vec = np.asarray(action, dtype=np.float64).reshape(-1)
    except (TypeError, ValueError):
        raise ActionOutOfSpec(f"{what}: expected {arity} numbers, got {action!r}")
    if vec.shape != (arity,) or not np.isfinite(vec).all():
        raise ActionOutOfSpec(f"{what}: expected {arity} finite numbers, got {action!r}")
    return np.clip(vec, lo, hi)


class ActionSpace:
    def apply(self, action, state):
        raise NotImplementedError

    def spec(self):
        raise NotImplementedError

    def neutral(self):
        """Action equivalent to no input; None means skip this space."""
        return None

    def _layer_sprites(self, state, layer):
        if layer not in state:
            raise UnknownLayer(f"no layer named {layer!r}")
        return state.sprites(layer)


class Joystick(ActionSpace):
    """Continuous force vector in [-1, 1]^2 scaled by `scaling`.

    In force mode (default) the velocity delta is scaling * action / mass,
    matching a physical stick force; velocity_mode skips the mass division
    for massless-cursor control.
    """

    def __init__(self, scaling, layer, velocity_mode=False):
        self.scaling = float(scaling)
        self.layer = layer
        self.velocity_mode = bool(velocity_mode)

    def apply(self, action, state):
        if action is None:
            return
        vec = _clamped_vector(action, -1.0, 1.0, 2, "joystick")
        for sprite in self._layer_sprites(state, self.layer):
            gain = self.scaling if self.velocity_mode else self.scaling * sprite.inv_mass
            sprite.velocity = sprite.velocity + gain * vec

    def spec(self):
        return ActionSpec("continuous-box", "joystick", lo=(-1, -1), hi=(1, 1))

    def neutral(self):
        return np.zeros(2)


GRID_TOKENS = ("none", "left", "right", "up", "down")

_GRID_STEPS = {
    "none": np.array([0.0, 0.0]),
    "left": np.array([-1.0, 0.0]),
    "right": np.array([1.0, 0.0]),
    "up": np.array([0.0, 1.0]),
    "down": np.array([0.0, -1.0]),
}


class Grid(ActionSpace):
    """Arrow-key interface: teleport layer sprites by step_size along an axis."""

    def __init__(self, step_size, layer):
        self.step_size = float(step_size)
        self.layer = layer

    def apply(self, action, state):
        if action is None:
            return
        if action not in _GRID_STEPS:
            raise ActionOutOfSpec(f"grid: unknown token {action!r}")
        offset = self.step_size * _GRID_STEPS[action]
        for sprite in self._layer_sprites(state, self.layer):
            sprite.position = sprite.position + offset

    def spec(self):
        return ActionSpec("discrete", "grid", tokens=GRID_TOKENS)

    def neutral(self):
        return "none"


class SetPosition(ActionSpace):
    """Touch-screen interface: place layer sprites at the action point.

    Velocity is untouched and the target is not clipped to the arena; a
    sprite may sit partially off-screen.
    """

    def __init__(self, layer):
        self.layer = layer

    def apply(self, action, state):
        if action is None:
            return
        target = _clamped_vector(action, 0.0, 1.0, 2, "set_position")
        for sprite in self._layer_sprites(state, self.layer):
            sprite.position = target.copy()

    def spec(self):
        return ActionSpec("continuous-box", "set_position", lo=(0, 0), hi=(1, 1))


class Click(ActionSpace):
    """Pair of clicks in [0, 1]^4: the first click picks the topmost layer
    sprite under it, the second sets the motion direction.

    If the first click lands in no sprite, nothing moves regardless of the
    second click. The velocity delta is motion_scale * (q - center).
    """

    def __init__(self, layer, motion_scale=0.02):
        self.layer = layer
        self.motion_scale = float(motion_scale)

    def apply(self, action, state):
        if action is None:
            return
        vec = _clamped_vector(action, 0.0, 1.0, 4, "click")
        pick, motion = vec[:2], vec[2:]
        target = None
        for sprite in self._layer_sprites(state, self.layer):
            if sprite.contains(pick):
                target = sprite  # later sprites draw on top, keep the last hit
        if target is None:
            return
        target.velocity = target.velocity + self.motion_scale * (motion - 0.5)

    def spec(self):
        return ActionSpec("click", "click", lo=(0, 0, 0, 0), hi=(1, 1, 1, 1))


class Composite(ActionSpace):
    """Named sub-spaces applied in declaration order (multi-agent play)."""

    def __init__(self, parts):
        self.parts = dict(parts)

    def apply(self, action, state):
        if action is None:
            return
        if not isinstance(action, dict):
            raise ActionOutOfSpec(f"composite: expected a dict, got {action!r}")
        for name in self.parts:
            if name not in action:
                raise MissingSubAction(f"missing sub-action {name!r}")
        for name, space in self.parts.items():
            space.apply(action[name], state)

    def spec(self):
        return ActionSpec("composite", "composite",
                          parts={k: v.spec() for k, v in self.parts.items()})

    def neutral(self):
        return {name: space.neutral() for name, space in self.parts.items()}
