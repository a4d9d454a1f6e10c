"""Exception hierarchy.

Everything raised on purpose by the package derives from ``LeopoldtError``
(itself a ``ValueError``) so callers and the CLI can map failures to exit
codes without catching unrelated bugs.
"""


class LeopoldtError(ValueError):
    pass


class InvalidParameter(LeopoldtError):
    pass


class OrderUnavailable(LeopoldtError):
    """No element of the requested multiplicative order exists in the field."""


class FieldTooSmall(LeopoldtError):
    pass


class NotInDomain(LeopoldtError):
    pass


class PrecisionError(LeopoldtError):
    pass


class NotAPowerSeries(LeopoldtError):
    pass


class HypothesisViolated(LeopoldtError):
    pass


class PartialResult(LeopoldtError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index
