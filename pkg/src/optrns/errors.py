"""Exception hierarchy shared by every module.

Every domain error derives from :class:`RnsError` (itself a ``ValueError``) so
callers can catch the whole family; the CLI reports the class name.
"""


class RnsError(ValueError):
    """Base class for all domain errors."""


class TooSmall(RnsError):
    pass


class NonCoprime(RnsError):
    def __init__(self, i: int, j: int, message: str | None = None):
        self.i = i
        self.j = j
        super().__init__(message or f"moduli at positions {i} and {j} share a common factor")


class OutOfRange(RnsError):
    pass


class DigitOutOfRange(RnsError):
    pass


class OperandOutOfRange(RnsError):
    pass


class ModuliMismatch(RnsError):
    pass


class MalformedOneHot(RnsError):
    pass


class InvalidModulus(RnsError):
    pass


class Unroutable(RnsError):
    pass


class NonPrimeModulus(RnsError):
    pass


class ConfigMismatch(RnsError):
    pass


class UnknownTech(RnsError):
    pass


class MissingParam(RnsError):
    pass


class WidthMismatch(RnsError):
    pass


class DuplicateChannel(RnsError):
    pass


class RangeOverflow(RnsError):
    def __init__(self, message: str, index: int | None = None):
        self.index = index
        super().__init__(message)


class LengthMismatch(RnsError):
    pass


class SchemaError(RnsError):
    """A JSON document does not follow the expected layout."""


class InvalidParam(RnsError):
    pass
