"""Exception hierarchy shared by all modules."""


class TankFDIError(Exception):
    """Base class for errors raised by :mod:`tankfdi`."""


class ConfigError(TankFDIError, ValueError):
    """Invalid configuration (parameters, scenario, differentiator...)."""


class DomainError(TankFDIError, ValueError):
    """A square-root argument of a redundancy map left its domain.

    Parameters
    ----------
    argument : str
        Human-readable expression of the offending argument.
    value : float
        Its value.
    """

    def __init__(self, argument, value, message=None):
        self.argument = argument
        self.value = value
        if message is None:
            message = f"square-root argument {argument} = {value!r} is out of domain"
        super().__init__(message)


class SingularConfigurationError(DomainError):
    """The operating point violates configuration (C): x1 > x3 > x2 > 0."""


class IntegrationError(TankFDIError, ArithmeticError):
    """The integrator produced a non-finite level."""

    def __init__(self, variable, value, t):
        self.variable = variable
        self.value = value
        self.t = t
        super().__init__(f"non-finite {variable} = {value!r} after step ending at t={t:g} s")
