"""Domain exceptions shared across the package.

Everything raised by library code derives from GameError so callers (and
the CLI) can distinguish domain precondition failures from plain bugs.
"""


class GameError(Exception):
    """Base class for all domain errors."""


class InvalidPartition(GameError):
    """Coalition structure blocks overlap or do not cover the fleet."""


class FleetTooSmall(GameError):
    """Operation needs at least two trucks."""


class FleetTooLarge(GameError):
    """Fleet exceeds the size cap of an exhaustive operation."""


class XiOutOfRange(GameError):
    """Leader share xi must lie in (0, 1]."""


class EpsilonOrderError(GameError):
    """Operation requires the electric saving rate below the fuel rate."""


class ConditionHolds(GameError):
    """The ratio core condition holds; the fallback scheme does not apply."""


class NotEfficient(GameError):
    """Payoffs do not sum to the grand-coalition value."""


class BothTypesRequired(GameError):
    """Operation is defined only for mixed fleets."""


class ZeroShapleyPayoff(GameError):
    """Relative deviation is undefined against a zero benchmark payoff."""


class TooManyStructures(GameError):
    """Structure enumeration would exceed the configured guard."""
