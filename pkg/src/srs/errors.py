"""Exception types shared by all modules.

Every domain error derives from SrsError so the CLI can map them to exit code 2.
"""


class SrsError(Exception):
    """Base class for domain errors."""

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details

    def to_json(self):
        out = {"error": type(self).__name__, "message": str(self)}
        for key, value in self.details.items():
            out[key] = value
        return out


class NotIsolating(SrsError):
    pass


class Reducible(SrsError):
    pass


class NoSignChange(SrsError):
    pass


class FieldMismatch(SrsError):
    pass


class ZeroLeadingCoefficient(SrsError):
    pass


class NotInSchurCohn(SrsError):
    pass


class SizeExceeded(SrsError):
    pass


class CycleCountExceeded(SrsError):
    pass


class UnsupportedDimension(SrsError):
    pass


class OutOfRange(SrsError):
    pass


class RootNotGreaterThanOne(SrsError):
    pass


class NotInBrunotteModule(SrsError):
    pass


class InvalidCnsPolynomial(SrsError):
    pass


class PointBudgetExceeded(SrsError):
    pass


class PrecisionInsufficient(SrsError):
    pass


class NotMonic(SrsError):
    pass


class NotExpanding(SrsError):
    pass


class NotSalem(SrsError):
    pass


class ConfigError(SrsError):
    pass


class ParseError(SrsError):
    pass


class IoError(SrsError):
    pass
