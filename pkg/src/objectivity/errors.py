"""Exception types raised by the library."""


class ObjectivityError(Exception):
    """Base class for all library errors."""


class NotSummable(ObjectivityError, ValueError):
    """The spectrum has a divergent sum of inverse eigenvalues."""


class EnergyTooLow(ObjectivityError, ValueError):
    """The energy cap does not exceed the ground energy of the spectrum."""


class ConvergenceFailure(ObjectivityError, RuntimeError):
    """A numerical solver failed to bracket or converge."""


class RegimeViolation(ObjectivityError, ValueError):
    """The continuity-bound regime eps' <= 1 is violated."""


class OracleAssertionError(ObjectivityError, AssertionError):
    """A finite-dimensional oracle check failed."""
