"""Exception types raised by the engine.

Everything derives from EngineError so callers can catch engine failures
as one family while tests pin the precise class.
"""


class EngineError(Exception):
    """Base class for all engine errors."""


# --- geometry ---------------------------------------------------------------

class DegeneratePolygon(EngineError):
    """Polygon area is (numerically) zero or vertices are invalid."""


class NonPositiveMass(EngineError):
    pass


class NonPositiveScale(EngineError):
    pass


# --- sprites / state --------------------------------------------------------

class UnknownShapeName(EngineError):
    pass


class InvariantViolation(EngineError):
    """A field value breaks a documented invariant; message names the field."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class UnknownLayer(EngineError):
    pass


# --- procedural generation --------------------------------------------------

class RejectionBudgetExceeded(EngineError):
    """SetMinus could not find a sample outside the hold-out region."""


class PlacementBudgetExceeded(EngineError):
    """Disjoint sprite placement ran out of rejection attempts."""


class KeyMissing(EngineError):
    """Membership query lacks a key the distribution constrains."""


# --- physics ----------------------------------------------------------------

class MissingSprite(EngineError):
    pass


# --- action spaces ----------------------------------------------------------

class MissingSubAction(EngineError):
    pass


class ActionOutOfSpec(EngineError):
    """Action has the wrong arity/type and cannot be clamped into spec."""


# --- rules ------------------------------------------------------------------

class ImmutableField(EngineError):
    pass


# --- observers --------------------------------------------------------------

class CapacityExceeded(EngineError):
    """More sprites than the feature observer's fixed capacity."""


# --- environment ------------------------------------------------------------

class SteppedAfterLast(EngineError):
    """step() called after a LAST timestep with auto-reset disabled."""


# --- recipes ----------------------------------------------------------------

class SchemaError(EngineError):
    """Recipe document fails validation; carries the path to the bad node."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class UnknownComponentName(EngineError):
    pass


class UnknownBuiltin(EngineError):
    pass


# --- recorder ---------------------------------------------------------------

class SinkWriteError(EngineError):
    pass


# --- wire protocol ----------------------------------------------------------

class ProtocolError(EngineError):
    pass
