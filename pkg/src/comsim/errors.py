"""Exception types raised by the comsim numerical pipeline."""

from __future__ import annotations


class ComsimError(Exception):
    """Base class for all comsim-specific failures."""


class DimensionMismatch(ComsimError, ValueError):
    """Matrix arguments have incompatible or non-square shapes."""


class SingularSystem(ComsimError):
    """The vectorized Lyapunov system is numerically singular.

    Usually signals a drift matrix at (or numerically indistinguishable
    from) the stability boundary.
    """


class NotConverged(ComsimError):
    """Iterative integration failed to reach the requested residual."""


class EigenFailure(ComsimError):
    """Eigenvalue iteration did not converge."""


class NonPositiveTemperature(ComsimError, ValueError):
    """Thermal occupation requested at T <= 0."""


class NegativePower(ComsimError, ValueError):
    """Pump power must be non-negative."""


class FixedPointDiverged(ComsimError):
    """Self-consistent steady-state iteration exceeded its budget.

    Retry with the approximate detuning mode, which solves the linear
    system with the bare plasmon detuning.
    """


class UnresolvedCoupling(ComsimError, ValueError):
    """Neither an effective coupling nor (pump power, g_c) was provided."""


class UnknownMode(ComsimError, KeyError):
    """A mode label does not exist in the requested topology."""


class UnphysicalCovariance(ComsimError):
    """Covariance matrix violates the uncertainty bound beyond tolerance."""


class UnsupportedDetuning(ComsimError, ValueError):
    """Closed-form spectrum requested outside its validity detuning."""


class HeatingRunaway(ComsimError):
    """Perturbative phonon-number denominator is non-positive.

    The perturbative cooling theory breaks down here; the value is
    reported as an error rather than clamped.
    """


class QuadratureNotConverged(ComsimError):
    """Adaptive quadrature failed to meet its tolerance."""


class NoStablePoint(ComsimError):
    """An entire tuned-axis range is unstable at this scanned value."""


class ConfigError(ComsimError, ValueError):
    """Configuration file or CLI override could not be validated."""
