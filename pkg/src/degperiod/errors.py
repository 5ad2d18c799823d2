"""Exception types shared across the package."""


class DegPeriodError(Exception):
    """Base class for errors raised by this package."""


class ModulusMismatch(DegPeriodError, ValueError):
    """Operands live in different fields."""


class BudgetExceeded(DegPeriodError):
    """An enumeration or coefficient-size budget would be exceeded."""


class NotASquare(DegPeriodError, ValueError):
    """A discriminant has no square root in the working cyclotomic field."""


class ReconstructionError(DegPeriodError):
    """A power series could not be matched by a rational function at this horizon."""


class DetectionError(DegPeriodError):
    """No eventually periodic fit, or inconsistent fits, within the horizon."""
