"""Exception hierarchy shared by every module of the package."""


class FsfError(Exception):
    """Base class for all package errors."""


class SpecInfeasible(FsfError, ValueError):
    """The requested band geometry does not fit in the half spectrum."""


class BadAssignment(FsfError, ValueError):
    """Transition values have the wrong arity or lie outside [0, 1]."""


class ArityMismatch(BadAssignment):
    """Number of coefficients does not match the number of free variables."""


class GridTooFine(FsfError):
    """Frequency grid would exceed the configured point budget."""


class AllZeroResponse(FsfError):
    """Stopband response is identically zero, so the PSL is undefined."""


class Infeasible(FsfError):
    """Linear program has no feasible point."""


class Unbounded(FsfError):
    """Linear program objective is unbounded below."""


class NoConvergence(FsfError):
    """Constraint exchange ran out of iterations with violations left."""


class TooManyVariables(FsfError, ValueError):
    """Brute-force search requested on more than two free variables."""


class ParseError(FsfError, ValueError):
    """Malformed fixture file; the message carries row and column."""


class UnknownPreset(FsfError, KeyError):
    """Table preset name is not one of the embedded tables."""
