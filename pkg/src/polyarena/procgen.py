"""Compositional random distributions and sprite generators.

Distributions sample factor assignments (dicts of factor key -> value) and
support membership queries, which is what makes hold-outs and train/test
splits possible: SetMinus rejection-samples its base until the draw falls
outside the hold-out's support.

All sampling takes an explicit numpy Generator; distributions themselves
are immutable after construction.
"""

import numbers

import numpy as np

from . import sprites
from .errors import (InvariantViolation, KeyMissing, PlacementBudgetExceeded,
                     RejectionBudgetExceeded)
from .geometry import detect_contact

SET_MINUS_BUDGET = 10_000

_WEIGHT_EPS = 1e-9


def _normalize_weights(weights, n):
    if weights is None:
        return np.full(n, 1.0 / n)
    w = np.asarray(weights, dtype=np.float64)
    if len(w) != n:
        raise InvariantViolation("weights", f"expected {n} weights, got {len(w)}")
    if (w < 0).any():
        raise InvariantViolation("weights", "weights must be nonnegative")
    total = w.sum()
    if total < _WEIGHT_EPS:
        raise InvariantViolation("weights", "weights sum to zero")
    return w / total


class Distribution:
    """Base: sample(rng) -> assignment dict; contains(assignment) -> bool."""

    keys = frozenset()

    def sample(self, rng):
        raise NotImplementedError

    def contains(self, assignment):
        raise NotImplementedError

    def _require(self, assignment, key):
        if key not in assignment:
            raise KeyMissing(f"assignment lacks key {key!r}")
        return assignment[key]


class Uniform(Distribution):
    """Continuous uniform over [lo, hi] for one factor key."""

    def __init__(self, key, lo, hi):
        if hi < lo:
            raise InvariantViolation(key, f"empty interval [{lo}, {hi}]")
        self.key = key
        self.lo = float(lo)
        self.hi = float(hi)
        self.keys = frozenset([key])

    def sample(self, rng):
        return {self.key: float(rng.uniform(self.lo, self.hi))}

    def contains(self, assignment):
        value = self._require(assignment, self.key)
        return self.lo <= value <= self.hi


class Discrete(Distribution):
    """Weighted choice over explicit atoms for one factor key."""

    def __init__(self, key, values, weights=None):
        if not values:
            raise InvariantViolation(key, "no values")
        self.key = key
        self.values = list(values)
        self.weights = _normalize_weights(weights, len(self.values))
        self.keys = frozenset([key])

    def sample(self, rng):
        index = int(rng.choice(len(self.values), p=self.weights))
        return {self.key: self.values[index]}

    def contains(self, assignment):
        value = self._require(assignment, self.key)
        return any(v == value and w > 0
                   for v, w in zip(self.values, self.weights))


class Product(Distribution):
    """Independent product of sub-distributions over disjoint key sets."""

    def __init__(self, *components):
        seen = set()
        for comp in components:
            if seen & comp.keys:
                raise InvariantViolation("keys", f"overlapping keys {seen & comp.keys}")
            seen |= comp.keys
        self.components = tuple(components)
        self.keys = frozenset(seen)

    def sample(self, rng):
        merged = {}
        for comp in self.components:
            merged.update(comp.sample(rng))
        return merged

    def contains(self, assignment):
        return all(comp.contains(assignment) for comp in self.components)


class Mixture(Distribution):
    """Pick a component by weight, then sample it."""

    def __init__(self, components, weights=None):
        if not components:
            raise InvariantViolation("components", "empty mixture")
        self.components = tuple(components)
        self.weights = _normalize_weights(weights, len(self.components))
        self.keys = frozenset().union(*(c.keys for c in self.components))

    def sample(self, rng):
        index = int(rng.choice(len(self.components), p=self.weights))
        return self.components[index].sample(rng)

    def contains(self, assignment):
        return any(w > 0 and comp.contains(assignment)
                   for comp, w in zip(self.components, self.weights))


class SetMinus(Distribution):
    """Samples of base that fall outside the hold-out's support.

    The hold-out is itself a Distribution used only for membership, so a
    continuous hold-out excludes a region, not a measure-zero point set.
    """

    def __init__(self, base, hold_out):
        self.base = base
        self.hold_out = hold_out
        self.keys = base.keys

    def sample(self, rng):
        for _ in range(SET_MINUS_BUDGET):
            draw = self.base.sample(rng)
            if not self.hold_out.contains(draw):
                return draw
        raise RejectionBudgetExceeded(
            f"no sample outside hold-out after {SET_MINUS_BUDGET} draws")

    def contains(self, assignment):
        return self.base.contains(assignment) and not self.hold_out.contains(assignment)


class SpriteGenerator:
    """Draws a sprite count, then per-sprite factors from a distribution.

    With disjoint=True a freshly placed sprite must not contact any sprite
    already placed (within this layer or passed in from earlier layers);
    each sprite gets max_rejections re-draws before giving up.
    """

    def __init__(self, count, factors, disjoint=False, max_rejections=100):
        if isinstance(count, numbers.Integral):
            if count < 0:
                raise InvariantViolation("count", f"must be >= 0, got {count}")
        elif not isinstance(count, Distribution):
            raise InvariantViolation("count", "must be an int or a Distribution")
        if max_rejections < 1:
            raise InvariantViolation("max_rejections", "must be >= 1")
        self.count = count
        self.factors = factors
        self.disjoint = disjoint
        self.max_rejections = max_rejections

    def _draw_count(self, rng):
        if isinstance(self.count, numbers.Integral):
            return int(self.count)
        assignment = self.count.sample(rng)
        (value,) = assignment.values()
        return int(value)

    def generate(self, rng, existing=()):
        """Sample a sprite list; `existing` are sprites placed earlier."""
        placed = list(existing)
        made = []
        for _ in range(self._draw_count(rng)):
            for _ in range(self.max_rejections):
                sprite = sprites.make_sprite(self.factors.sample(rng))
                if not self.disjoint or not self._overlaps(sprite, placed):
                    break
            else:
                raise PlacementBudgetExceeded(
                    f"no disjoint placement in {self.max_rejections} tries")
            placed.append(sprite)
            made.append(sprite)
        return made

    @staticmethod
    def _overlaps(sprite, placed):
        verts = sprite.world_vertices()
        return any(detect_contact(verts, other.world_vertices()) is not None
                   for other in placed)


def generate_layer(generator, rng, existing=()):
    """Functional alias for SpriteGenerator.generate."""
    return generator.generate(rng, existing=existing)
