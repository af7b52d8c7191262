"""Exception types shared across the package."""


class ChiralGateError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(ChiralGateError):
    """Invalid or inconsistent scenario configuration (CLI exit code 2)."""


class DomainError(ChiralGateError):
    """A time argument falls outside the window a pulse is defined on."""


class SingularScheduleError(ChiralGateError):
    """A counteradiabatic schedule produced an unbounded drive amplitude."""

    def __init__(self, t, value):
        self.t = t
        self.value = value
        super().__init__(
            f"corrected pulse amplitude overflows at t={t:.6g} us (|value|={value:.3g})"
        )


class FrameTrackingError(ChiralGateError):
    """Instantaneous eigenframe could not be continued smoothly in time."""


class IntegrityError(ChiralGateError):
    """An internal consistency check failed (non-Hermitian generator, norm loss)."""
