"""Exception types raised across the package."""

from __future__ import annotations


class TrackingError(Exception):
    """Base class for all package errors."""


class CoincidentPose(TrackingError, ValueError):
    """Robot and target positions coincide, so range/bearing is undefined."""


class SingularPrior(TrackingError, ValueError):
    """A prior covariance is not invertible."""


class BudgetExceeded(TrackingError, ValueError):
    """An attack budget is larger than the number of attackable elements."""


class ScaleExceeded(TrackingError, RuntimeError):
    """An exhaustive search would exceed the configured evaluation cap."""


class NotMonotone(TrackingError, ValueError):
    """A set function has a negative marginal gain."""


class NotSubmodular(TrackingError, ValueError):
    """A set function violates diminishing returns."""


class ZeroSingleton(TrackingError, ValueError):
    """A set function is zero on a singleton, so curvature is undefined."""


class ConfigInvalid(TrackingError, ValueError):
    """A campaign configuration file failed validation."""


class CsvMalformed(TrackingError, ValueError):
    """A metrics CSV file does not follow the expected schema."""
