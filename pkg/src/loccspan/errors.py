"""Exception hierarchy.

Everything raised on purpose by this package derives from ``LoccSpanError``.
Input problems additionally derive from ``ValueError`` so callers that only
know the builtin hierarchy still catch them; the CLI maps ``InvalidInput``
to exit code 1 and ``NumericalError`` to exit code 2.
"""


class LoccSpanError(Exception):
    """Base class for all errors raised by loccspan."""


class InvalidInput(LoccSpanError, ValueError):
    """Malformed or out-of-range input."""


class InvalidIndex(InvalidInput):
    pass


class ShapeError(InvalidInput):
    pass


class InvalidParty(InvalidInput):
    pass


class InvalidPartition(InvalidInput):
    pass


class UnsupportedPartition(InvalidInput):
    """Partition is valid but would need a party permutation pass."""


class UnsupportedFamilyParams(InvalidInput):
    pass


class NotFound(InvalidInput, KeyError):
    def __str__(self):
        # KeyError quotes its argument; keep the plain message.
        return Exception.__str__(self)


class BadConstraint(InvalidInput):
    pass


class InstanceTooLarge(InvalidInput):
    pass


class NumericalError(LoccSpanError, ArithmeticError):
    """A decomposition failed or a value that must be finite was not."""


class ReductionError(LoccSpanError):
    """Eigenstates selected from a mixed set are not mutually orthogonal."""


class WitnessUnavailable(LoccSpanError):
    """The party's span matrix is full: only trivial measurements exist."""


class DegeneratePivot(LoccSpanError):
    """Every candidate partner coefficient is symbolically zero."""
