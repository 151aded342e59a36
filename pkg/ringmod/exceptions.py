""" Custom error types """

from abc import ABCMeta
from collections.abc import Iterable

from .const import (
    EXIT_HYPOTHESIS_VIOLATED,
    EXIT_INVALID_INPUT,
    EXIT_NUMERICAL_FAILURE,
)

__all__ = [
    "RingmodError",
    "InvalidInputError",
    "DegenerateDomainError",
    "UnsupportedGeometryError",
    "DomainFileError",
    "UndersampledError",
    "NumericalError",
    "ResolutionTooCoarseError",
    "SolverFailureError",
    "OptimizerError",
    "ConstructionFailedError",
    "BracketFailureError",
    "HypothesisViolatedError",
]


class RingmodError(Exception):
    """Base error type for ringmod custom errors."""

    __metaclass__ = ABCMeta
    exit_code = EXIT_INVALID_INPUT

    def __init__(self, msg):
        super(RingmodError, self).__init__(msg)


class InvalidInputError(RingmodError, ValueError):
    """Malformed input or a parameter outside its admissible range."""

    pass


class DegenerateDomainError(RingmodError):
    """Operation needs both complement components to contain more than a point."""

    pass


class UnsupportedGeometryError(RingmodError):
    """Unbounded complement component cannot be represented for this operation."""

    pass


class DomainFileError(RingmodError):
    """Domain file cannot be read or has an unsupported format"""

    def __init__(self, path, reason=None, supported=None):
        """
        Create exception for a domain file that could not be used.

        :param str path: the offending file path or URL
        :param str reason: what went wrong
        :param Iterable[str] supported: collection of supported extensions
        """
        msg = "Cannot use domain file '{}'".format(path)
        if reason:
            msg = "{}: {}".format(msg, reason)
        if isinstance(supported, Iterable):
            msg = "{}; supported extensions: {}".format(
                msg, ", ".join(map(str, supported))
            )
        super(DomainFileError, self).__init__(msg)


class UndersampledError(InvalidInputError):
    """Boundary data has fewer samples than the truncation requires."""

    def __init__(self, samples, truncation):
        super(UndersampledError, self).__init__(
            "Got {} boundary samples; truncation N={} needs at least {}".format(
                samples, truncation, 2 * truncation + 1
            )
        )


class NumericalError(RingmodError):
    """Base type for numerical failures."""

    exit_code = EXIT_NUMERICAL_FAILURE


class ResolutionTooCoarseError(NumericalError):
    """The two labeled boundary sets touch after rasterization."""

    pass


class SolverFailureError(NumericalError):
    """Linear solve did not reach the requested residual."""

    pass


class OptimizerError(NumericalError):
    """No objective evaluation of the affine search succeeded."""

    pass


class ConstructionFailedError(NumericalError):
    """A harmonic construction fails already at its smallest parameter."""

    pass


class BracketFailureError(NumericalError):
    """Root bracket could not be established."""

    pass


class HypothesisViolatedError(RingmodError):
    """Input violates a hypothesis the construction depends on."""

    exit_code = EXIT_HYPOTHESIS_VIOLATED
