"""Exception types shared across the package.

Plain ``ValueError`` is used for bad arguments and domain violations
(inverting zero, malformed moduli, ...).  The classes below mark the two
situations the command line maps to dedicated exit codes.
"""


class SizeLimitError(ValueError):
    """A table or sweep would exceed the configured size/budget limit."""


class VerificationError(Exception):
    """A closed form and its independent brute-force oracle disagree."""


class IrrationalSumError(VerificationError):
    """An exponential sum turned out not to be a rational integer.

    Never expected for the implemented power-map family; signals a
    parameterization bug rather than a numeric problem.
    """
