"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
2 for invalid input, 3 for a failed computation, 4 for exhausted precision.
"""


class AlbaneseError(Exception):
    exit_code = 3


class InputError(AlbaneseError, ValueError):
    exit_code = 2


class ComputationError(AlbaneseError, ArithmeticError):
    exit_code = 3


class InsufficientPrecision(AlbaneseError):
    exit_code = 4


class PrecisionExhausted(InsufficientPrecision):
    pass


# curve construction
class NotOddModel(InputError):
    pass


class SingularCurve(InputError):
    pass


class BadBasis(InputError):
    pass


class BadF(InputError):
    pass


# field arithmetic
class DivisionByZero(ComputationError, ZeroDivisionError):
    pass


class ZeroInput(ComputationError):
    pass


class OddGapUnreachable(ComputationError):
    pass


# words and tensors
class OutOfRange(InputError, IndexError):
    pass


class BadLetter(InputError):
    pass


class AlphabetMismatch(InputError):
    pass


class BadConstantTerm(ComputationError):
    pass


class UndecidableCoefficients(ComputationError):
    pass


# connections and gauges
class NotIntegrable(ComputationError):
    pass


class DimensionMismatch(InputError):
    pass


# Hodge filtration
class ObstructionFound(ComputationError):
    pass


class NotElliptic(InputError):
    pass


# period maps
class MissingExtension(ComputationError):
    pass


class NonPrimitiveLift(ComputationError):
    pass


class UnsupportedLevel(InputError):
    pass


# numerical evaluation
class NonLogPole(ComputationError):
    pass


class OracleMissingValue(ComputationError, KeyError):
    pass
