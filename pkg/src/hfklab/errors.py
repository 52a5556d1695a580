"""Exception hierarchy shared by every hfklab module."""


class HfklabError(Exception):
    """Base class for all library errors."""


class InputError(HfklabError, ValueError):
    """Bad user input: malformed files, invalid parameters, failed preconditions."""


class ParseError(InputError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class NotDivisible(InputError):
    pass


class InvalidTorusParams(InputError):
    pass


class NotLSpacePolynomial(InputError):
    pass


class OddSignature(InputError):
    pass


class AsymmetricPolynomial(InputError):
    pass


class EvenLambda(InputError):
    pass


class DuplicateEntry(ParseError):
    pass


class NonpositiveRank(ParseError):
    pass


class DimensionMismatch(InputError):
    pass


class Singular(InputError):
    pass


class NotASubcomplex(InputError):
    pass


class InvalidComplex(InputError):
    pass


class WindowTooSmall(InputError):
    pass


class NotAKnot(InputError):
    pass


class InternalError(HfklabError, RuntimeError):
    """An internal invariant was violated; indicates a bug, not bad input."""
