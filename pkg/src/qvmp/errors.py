"""Exception types shared across the package."""


class QvmpError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(QvmpError, ValueError):
    """Operands have incompatible shapes or lengths."""


class PartitionError(QvmpError, ValueError):
    """Requested block width does not divide the column count."""


class FormatError(QvmpError, ValueError):
    """Matrix or histogram text could not be parsed."""


class CompositionError(QvmpError, ValueError):
    """Qubit mapping for circuit composition is invalid."""


class InversionError(QvmpError, ValueError):
    """Circuit cannot be inverted (contains measurement)."""


class ContractError(QvmpError, ValueError):
    """Operation called on a circuit that violates its preconditions."""


class ResourceError(QvmpError, RuntimeError):
    """Simulation would exceed the configured qubit cap."""
