"""Exception types shared across the library."""


class CondtestError(Exception):
    """Base class for all library errors."""


class NegativeWeight(CondtestError):
    pass


class ZeroTotalMass(CondtestError):
    pass


class DomainMismatch(CondtestError):
    pass


class BadQuerySet(CondtestError):
    pass


class ZeroMassSet(CondtestError):
    """Raised when a conditional query lands on a set of zero probability.

    Mirrors the oracle failure rule: conditioning on a zero-mass set
    terminates the caller.
    """


class IllegalShapeForModel(CondtestError):
    pass


class DisciplineViolation(CondtestError):
    pass


class SetsNotDisjoint(CondtestError):
    pass


class NotInNoGapRegime(CondtestError):
    pass


class OddN(CondtestError):
    pass


class DomainTooLarge(CondtestError):
    pass


class BadBlockGeometry(CondtestError):
    pass


class EvalFailed(CondtestError):
    """The multiplicative weight estimator exhausted its round budget."""


class IncompatibleOracleModel(CondtestError):
    pass


class SpecParseError(CondtestError):
    pass
