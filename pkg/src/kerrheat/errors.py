"""Exception taxonomy shared across the package.

The CLI maps ConfigError to exit code 2 and every other KerrheatError
to exit code 1.
"""


class KerrheatError(Exception):
    """Base class for all package-specific failures."""


class ConfigError(KerrheatError):
    """Malformed or inconsistent run configuration."""


class DomainError(KerrheatError, ValueError):
    """Input value outside the mathematical domain of an operation."""


class NoBistabilityError(DomainError):
    """No multi-root power window exists at the requested detuning."""


class LinearizationError(DomainError):
    """Quadratic expansion about the working point is not diagonalizable
    as a stable mode (B <= 0: parametric-instability side)."""


class ContractError(KerrheatError):
    """Caller violated an inter-operation contract (e.g. the amplitude
    passed in is not actually a steady state, or frames do not match)."""


class TruncationError(KerrheatError):
    """Basis-size cap reached before the state fit in the truncated space."""


class ConvergenceError(KerrheatError):
    """Iterative solve exhausted its budget without meeting tolerance."""


class AmbiguityError(KerrheatError):
    """Stationary solve is numerically degenerate (null space dimension > 1
    at working tolerance).  For branch-resolved quantities use the
    displaced-frame solver instead of the bare one."""


class SolverError(KerrheatError):
    """A direct linear-algebra step failed (singular resolvent, breakdown)."""


class FitError(KerrheatError):
    """Least-squares fit failed; carries the best parameters seen so far."""

    def __init__(self, message, best=None, residual_rms=None):
        super().__init__(message)
        self.best = best
        self.residual_rms = residual_rms
