"""Exception classes raised across pckit."""


class PckitError(Exception):
    """Base class for all pckit errors."""


# coefficient rings
class NonUnit(PckitError, ZeroDivisionError):
    pass


class ZeroResidue(PckitError, ValueError):
    pass


class InvalidRingSpec(PckitError, ValueError):
    pass


class RingMismatch(PckitError, TypeError):
    pass


# matrix groups
class NonInvertible(PckitError, ValueError):
    pass


class CharTwoOrthogonal(PckitError, ValueError):
    pass


class NotSimilitudeGroup(PckitError, ValueError):
    pass


# words
class RankMismatch(PckitError, ValueError):
    pass


# invariants
class NonInvertibleSlot(PckitError, ValueError):
    pass


# pseudocharacters
class MembershipViolation(PckitError, ValueError):
    pass


class IncompatibleContexts(PckitError, ValueError):
    pass


class NotInKernel(PckitError, ValueError):
    pass


class WrongKind(PckitError, ValueError):
    pass


class UnsupportedOperands(PckitError, ValueError):
    pass


class UnknownEmbedding(PckitError, ValueError):
    pass


class NoWitness(PckitError, ValueError):
    pass


# groups / reconstruction / cohomology
class NotAHomomorphism(PckitError, ValueError):
    pass


class ClosureCapExceeded(PckitError, RuntimeError):
    pass


class SearchSpaceTooLarge(PckitError, RuntimeError):
    pass


class BudgetExceeded(PckitError, RuntimeError):
    pass


class UnsupportedFlavor(PckitError, ValueError):
    pass


class NotSemisimple(PckitError, ValueError):
    pass


class CharTwo(PckitError, ValueError):
    pass


# problem files
class ParseError(PckitError, ValueError):
    pass


class SchemaError(PckitError, ValueError):
    pass
