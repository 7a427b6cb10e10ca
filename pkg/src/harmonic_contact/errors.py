"""Exception hierarchy shared by all modules."""


class ContactError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ContactError, ValueError):
    """Argument lies outside the domain of the potential or operation."""


class EnergyOutOfRange(DomainError):
    """Requested energy cannot be stored inside the potential's domain."""


class RangeError(DomainError):
    """Virtual displacement maps to an energy the potential cannot attain."""


class InvalidPotential(ContactError, ValueError):
    """Potential violates the monotonicity conditions."""


class QuadratureFailure(ContactError, ArithmeticError):
    pass


class NonMonotonicTime(ContactError, ValueError):
    pass


class OverdampedUnsupported(ContactError, ValueError):
    """Damping ratio is at or above critical; no oscillatory exit exists."""


class DegenerateBound(ContactError, ArithmeticError):
    """The transformation gradient diverges at first contact, so no finite bound exists."""


class RegimeMismatch(ContactError, ValueError):
    pass


class NoExitDetected(ContactError, RuntimeError):
    pass


class StepSizeUnderflow(ContactError, RuntimeError):
    pass


class ConfigError(ContactError, ValueError):
    pass
