"""Exception hierarchy shared by all circsim modules."""


class CircsimError(Exception):
    """Base class for every error raised by circsim."""


class RegimeError(CircsimError):
    """A closed-form expression was asked for outside its validity regime."""


class MismatchError(CircsimError):
    """Operands do not share carrier, modulation frequency or sampling grid."""


class DegenerateError(CircsimError):
    """A quantity needed for a ratio or a phase is zero or vanishingly small."""


class RangeError(CircsimError):
    """A frequency lies outside the data range it must be evaluated in."""


class SingularError(CircsimError):
    """A linear system or parameter conversion is numerically singular."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class ConvergenceError(CircsimError):
    """Harmonic truncation did not converge to the requested tolerance."""


class GridError(CircsimError):
    """A time-domain sampling grid violates coherence or Nyquist constraints."""


class NotFoundError(CircsimError):
    """A searched-for feature (e.g. an isolation band) does not exist."""


class ParseError(CircsimError):
    """Malformed input text; ``line`` is the 1-based offending line."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(CircsimError):
    """Invalid scenario configuration; ``key`` names the offending entry."""

    def __init__(self, message, key=None):
        self.key = key
        super().__init__(message)


class UnknownParamError(ConfigError):
    """A sensitivity sweep was requested over an unsupported parameter."""
