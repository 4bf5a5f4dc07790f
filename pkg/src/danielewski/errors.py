"""Exception types shared across the package.

Every failure that a caller can act on gets its own class; plain bugs
raise the builtin exceptions.  Checkers that *report* rather than raise
return CheckReport objects instead (see danielewski.verification).
"""

from __future__ import annotations


class DanielewskiError(Exception):
    """Base class for all package-specific errors."""


class NotDivisibleError(DanielewskiError):
    """An exact division by a power of x failed.

    Carries the offending power and a witness monomial (rendered string),
    and optionally the chart index on which the division was attempted.
    """

    def __init__(self, power: int, witness: str, chart: int | None = None):
        self.power = power
        self.witness = witness
        self.chart = chart
        where = f" on chart {chart + 1}" if chart is not None else ""
        super().__init__(
            f"not divisible by x^{power}{where}; witness monomial {witness}"
        )


class NotSimpleRootError(DanielewskiError):
    """A supplied root is not a simple root of the relevant polynomial."""


class NotSquarefreeError(DanielewskiError):
    """gcd(P, P') is non-constant, so no Bezout pair exists."""


class SingularSystemError(DanielewskiError):
    """An exact linear system that should be regular turned out singular."""


class PreconditionError(DanielewskiError):
    """Caller violated a documented precondition (degrees, distinctness...)."""


class DuplicateRootsError(PreconditionError):
    """A root list that must be pairwise distinct contains repeats."""


class CannotSeparateError(DanielewskiError):
    """No generic separating function exists (sigma_i(0) collide) and the
    surface carries no built-in one."""


class NotTriangularError(DanielewskiError):
    """Relations are not cascade-solvable, so substitution-based ideal
    membership does not apply; fall back to chart-level checks."""


class GlobalizationError(DanielewskiError):
    """No ambient polynomial within the degree bound restricts to the given
    chart data.  This is a legitimate 'inconclusive' outcome, not a bug."""

    def __init__(self, bound: int, message: str = ""):
        self.bound = bound
        super().__init__(message or f"no ambient form found within total degree {bound}")


class CapExceededError(DanielewskiError):
    """A nilpotency iteration hit its cap; the check is inconclusive."""

    def __init__(self, cap: int, generator: str):
        self.cap = cap
        self.generator = generator
        super().__init__(f"derivation not nilpotent on {generator} within {cap} steps")


class ParseError(DanielewskiError):
    """Syntax error in a polynomial expression; carries 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")
