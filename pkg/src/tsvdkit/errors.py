"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Tensor orders or extents do not match what an operation requires."""


class FormatError(ValueError):
    """A tensor file is malformed; the message names the failing byte offset."""


class NumericalError(RuntimeError):
    """A numerical routine failed to produce a usable result."""


class SymmetryError(NumericalError):
    """A spectrum expected to be conjugate symmetric was not, so its inverse
    transform is not real."""
