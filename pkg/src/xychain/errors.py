"""Exception types shared across the package."""


class XYChainError(Exception):
    """Base class for all computation errors raised by this package."""


class DomainError(XYChainError):
    """An input lies outside the domain a routine is defined on."""


class ConvergenceError(XYChainError):
    """Node doubling exhausted its budget without reaching the tolerance."""


class PhysicalityError(XYChainError):
    """A state or correlator set violates positivity beyond numerical noise."""


class SpacingError(XYChainError):
    """A derivative was requested on a non-uniform or too-short grid."""


class EmptyInputError(XYChainError):
    """An operation that needs at least one element received none."""


class SizeError(XYChainError):
    """A finite-chain request exceeds the dense-diagonalization ceiling."""


class SweepPointError(XYChainError):
    """A sweep aborted at a specific grid point; the message says where."""


class UsageError(XYChainError):
    """Invalid command line or config file input (exit code 2)."""
