"""Exception hierarchy shared by all hlpseq modules.

Four families, each mapped to a distinct CLI exit code:
validation (3), infeasible-guard (4), unsupported-operation (5).
Parse errors exit with the usage code (2).
"""


class HlpError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ValidationError(HlpError):
    """Invalid domain input (bad generators, permutations, parameters)."""

    exit_code = 3


class InfeasibleError(HlpError):
    """A resource guard tripped (search space or sample budget too large)."""

    exit_code = 4


class UnsupportedError(HlpError):
    """Operation not defined for the given variant or parameter range."""

    exit_code = 5


class ParseError(HlpError):
    """Descriptor or config text failed to parse; carries the position."""

    exit_code = 2

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


# -- validation family ------------------------------------------------------

class NonCoprime(ValidationError):
    def __init__(self, a, b, g):
        self.a, self.b, self.g = a, b, g
        super().__init__(f"generators {a} and {b} share factor {g}")


class TooSmall(ValidationError):
    def __init__(self, value):
        self.value = value
        super().__init__(f"generator {value} is < 2")


class Duplicate(ValidationError):
    def __init__(self, value):
        self.value = value
        super().__init__(f"duplicate permutation value {value}")


class NonPositive(ValidationError):
    def __init__(self, value):
        self.value = value
        super().__init__(f"permutation value {value} is not a positive integer")


class PermTooShort(ValidationError):
    def __init__(self, needed, available):
        self.needed, self.available = needed, available
        super().__init__(
            f"permutation prefix has {available} values, position {needed} requested")


class SequenceTooShort(ValidationError):
    def __init__(self, needed, available):
        self.needed, self.available = needed, available
        super().__init__(
            f"sequence prefix has {available} terms, index {needed} requested")


class OutOfRange(ValidationError):
    pass


class DegenerateInterval(ValidationError):
    pass


class AlphaBoundary(ValidationError):
    def __init__(self, alpha):
        self.alpha = alpha
        super().__init__(
            f"alpha={alpha} is an endpoint; use identity_permutation (alpha=1) "
            "or square_exponents (alpha=0)")


class OddP(ValidationError):
    def __init__(self, p):
        self.p = p
        super().__init__(f"Gaussian even-moment factor undefined for odd p={p}")


class ZeroScale(ValidationError):
    pass


class TooSmallStart(ValidationError):
    pass


class Overlap(ValidationError):
    pass


class RatioTooLarge(ValidationError):
    pass


class MeanNotZero(ValidationError):
    pass


class InvalidFunction(ValidationError):
    pass


# -- guard family ------------------------------------------------------------

class Infeasible(InfeasibleError):
    pass


# -- unsupported family ------------------------------------------------------

class Unsupported(UnsupportedError):
    pass
