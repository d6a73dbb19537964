"""Shared exception types.

Everything raised on purpose by the library derives from LabError so harness
code can distinguish "the mathematics disagrees" (a check failure, reported)
from "the computation could not be carried out" (one of these, surfaced).
"""


class LabError(Exception):
    pass


class UnsupportedField(LabError):
    """p not prime, or p^f outside the supported table range."""


class FieldMismatch(LabError):
    """Operands belong to different fields or rings."""


class DivisionByZero(LabError):
    pass


class NotAUnit(LabError):
    """Inversion requested for a non-unit ring element."""


class PrecisionExhausted(LabError):
    """A digit beyond the tracked precision would be needed."""


class BadIndex(LabError):
    """Malformed digit vector / label index."""


class OutOfBall(LabError):
    """A coset reduction landed outside the enumerated ball."""


class SingularMatrix(LabError):
    pass


class CharacterMismatch(LabError):
    """Character applied to an argument from the wrong group or field."""


class CutoffExceeded(LabError):
    """A cutoff-bounded search was asked to certify beyond its cutoff."""


class WordTooLong(LabError):
    pass


class ConfigError(LabError):
    pass


class ResourceBudgetExceeded(LabError):
    """Estimated ball/matrix size above the configured budget."""


class DimensionMismatch(LabError):
    pass
