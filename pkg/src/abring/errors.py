"""Exception types raised by the ring calculations."""


class RingError(ValueError):
    """Base class for domain errors (bad parameters, singular modes)."""


class DegenerateModeError(RingError):
    """A mode with zero energy (mu == 0 and nu == 0) was requested."""


class ConfigMismatchError(RingError):
    pass


class NotNormalizedError(RingError):
    pass


class OverflowGuardError(RingError):
    """The electron count exceeds the configured summation cap."""
