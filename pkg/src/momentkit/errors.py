"""Exception and warning types shared across momentkit."""


class MomentkitError(Exception):
    """Base class for all momentkit errors."""


class ParseError(MomentkitError):
    def __init__(self, position, message):
        self.position = position
        self.message = message
        super().__init__(f"at offset {position}: {message}")


class DomainError(MomentkitError):
    """A value that must be strictly positive was not (k identifies where)."""

    def __init__(self, k, message):
        self.k = k
        self.message = message
        super().__init__(f"k={k}: {message}")


class RangeError(MomentkitError):
    """Evaluation requested beyond a materialized prefix."""


class ContractionError(MomentkitError):
    """The subnormality criterion is only valid for contractions."""


class IncompatibleMeasures(MomentkitError):
    pass


class NonConvergence(MomentkitError):
    pass


class UnknownKernel(MomentkitError):
    pass


class DisagreementError(MomentkitError):
    """Two routes that a theorem says must agree did not."""


class LeftInvertibilityWarning(UserWarning):
    pass
