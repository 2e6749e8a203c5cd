"""Exception hierarchy shared by the library and the command line.

Every error carries the process exit code the CLI reports for it.
"""

from typing import Any, Optional, Sequence


class LatticeLabError(Exception):
    """Base class for all errors raised by latticelab."""

    exit_code: int = 1


class InputError(LatticeLabError):
    exit_code = 2


class ParseError(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class SingularBasis(InputError):
    pass


class NotSquarefree(InputError):
    pass


class NotTotallyReal(InputError):
    pass


class IrreducibilityUnverified(InputError):
    pass


class UnsupportedScalarKind(InputError):
    pass


class InfeasibleShape(InputError):
    pass


class ZeroElement(InputError):
    pass


class PrecisionExhausted(LatticeLabError):
    exit_code = 3


class BudgetExceeded(LatticeLabError):
    exit_code = 4


class SearchBudgetExceeded(BudgetExceeded):
    pass


class GridExhausted(BudgetExceeded):
    """No grid point reached the target; `best` holds the closest value seen."""

    def __init__(self, message: str, best: Optional[float] = None):
        super().__init__(message)
        self.best = best


class VerificationFailed(LatticeLabError):
    exit_code = 5


class SingularMinor(LatticeLabError):
    pass


class DegenerateP1(LatticeLabError):
    pass


class WitnessNotEmpty(LatticeLabError):
    pass


class AxisPointPresent(LatticeLabError):
    """The first coordinate axis contains the nonzero lattice point `u`."""

    def __init__(self, u: Sequence[int], coords: Optional[Sequence[Any]] = None):
        super().__init__(f"first axis contains the lattice point u={tuple(u)}")
        self.u = tuple(u)
        self.coords = tuple(coords) if coords is not None else None
