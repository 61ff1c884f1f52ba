"""Exception hierarchy.

Every failure raised by the library derives from :class:`ModelError`.  The
CLI maps the two families (validation vs numerical) onto distinct exit codes.
"""


class ModelError(Exception):
    """Base class for all library errors."""


class ValidationError(ModelError, ValueError):
    """Bad input: out-of-domain arguments or inconsistent parameters."""


class DomainError(ValidationError):
    pass


class ParameterError(ValidationError):
    pass


class ConsistencyError(ValidationError):
    """sigma_tilde does not match sigma_bar * tanh(rho0) / rho0."""


class ResolutionError(ValidationError):
    """A grid is too coarse for the requested computation."""


class PreconditionError(ValidationError):
    pass


class SingularModeError(ValidationError):
    """A closed form with a removable singularity was asked for at j = 0."""


class NumericalError(ModelError, ArithmeticError):
    """A numerical procedure failed to deliver a certified result."""


class CharacteristicEscapeError(NumericalError):
    """A backward characteristic left the extended domain [0, 2]."""


class ContractionError(NumericalError):
    """The fixed-point map was observed not to contract."""


class BracketError(NumericalError):
    """A root-finding bracket does not enclose a sign change."""
