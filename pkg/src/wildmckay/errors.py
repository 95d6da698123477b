"""Exception hierarchy shared by all modules."""


class WildMcKayError(Exception):
    """Base class for every error raised by this package."""


class PrecisionExhausted(WildMcKayError):
    """A value could not be certified at the working precision."""


class NotInvertible(WildMcKayError):
    pass


class WrongCharacteristic(WildMcKayError):
    pass


class HenselConditionFailed(WildMcKayError):
    pass


class NonIntegralRoot(WildMcKayError):
    """Point counting needs an exact root of q that does not exist."""


class DivergentEvaluation(WildMcKayError):
    pass


class Unramified(WildMcKayError):
    pass


class NoRootOfUnity(WildMcKayError):
    pass


class UnsupportedTower(WildMcKayError):
    pass


class UnsupportedDegree(WildMcKayError):
    pass


class NonFreeDetected(WildMcKayError):
    """The equivariant lattice came out with the wrong rank.

    The lattice is always free of full rank, so this signals a bug.
    """


class GroupMismatch(WildMcKayError):
    pass


class PseudoReflectionPresent(WildMcKayError):
    pass


class WildGroup(WildMcKayError):
    pass


class UndeterminedTail(WildMcKayError):
    pass


class NonAffineTail(WildMcKayError):
    pass


class ValidationError(WildMcKayError):
    """Malformed user input (JSON payloads, CLI arguments)."""
