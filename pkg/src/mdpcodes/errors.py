"""Exception hierarchy shared by every module of the package."""


class MDPError(Exception):
    """Base class for all errors raised by mdpcodes."""


class NonPrimeCharacteristic(MDPError, ValueError):
    pass


class ReducibleModulus(MDPError, ValueError):
    pass


class DimensionMismatch(MDPError, ValueError):
    pass


class FieldMismatch(MDPError, ValueError):
    pass


class NotSquare(MDPError, ValueError):
    pass


class IndexOutOfRange(MDPError, IndexError):
    pass


class NotStrictlyIncreasing(MDPError, ValueError):
    pass


class InsufficientBlocks(MDPError, ValueError):
    pass


class ShapeMismatch(MDPError, ValueError):
    pass


class NotObservable(MDPError, ValueError):
    pass


class NotControllable(MDPError, ValueError):
    pass


class RankDeficient(MDPError, ValueError):
    pass


class FormatError(MDPError, ValueError):
    """A serialized artifact is malformed; ``field`` names the offending key."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class BudgetExceeded(MDPError):
    """An exhaustive computation would exceed its configured budget."""

    def __init__(self, what, required, budget):
        super().__init__(f"{what}: {required} required, budget is {budget}")
        self.what = what
        self.required = required
        self.budget = budget


class NotFound(MDPError):
    """A search finished without a hit.

    ``certified`` is true only when the whole candidate space was scanned, in
    which case the absence is a proof of nonexistence over that field.
    """

    def __init__(self, message, attempts, certified=False):
        super().__init__(message)
        self.attempts = attempts
        self.certified = certified


class ExtensionFailed(MDPError):
    pass
