"""Exception types shared across the solver modules."""


class EnumerationCapError(RuntimeError):
    """Raised when a brute-force enumeration would exceed its configured cap."""


class ProblemFileError(ValueError):
    """Raised when a problem document is missing, malformed, or inconsistent."""


class SolverFailure(RuntimeError):
    """Raised when a solver reports non-convergence and the caller cannot proceed."""
