"""Exception taxonomy shared by every module."""


class RamificationError(ValueError):
    """Base class for all computational errors raised by the package."""


class RingMismatch(RamificationError):
    pass


class DimMismatch(RamificationError):
    pass


class NonUnit(RamificationError):
    pass


class NonInvertible(RamificationError):
    pass


class PrecisionTooLow(RamificationError):
    pass


class BadParam(RamificationError):
    pass


class Degenerate(RamificationError):
    pass


class EmptySlice(RamificationError):
    pass


class TooLarge(RamificationError):
    """Raised when an enumeration would exceed its element budget."""

    def __init__(self, predicted_size, budget=None):
        self.predicted_size = predicted_size
        self.budget = budget
        msg = f"predicted size {predicted_size} exceeds budget"
        if budget is not None:
            msg += f" {budget}"
        super().__init__(msg)
