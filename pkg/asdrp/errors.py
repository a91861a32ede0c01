#############################################################################
# errors.py
#
# exception and warning types shared by the channel and capacity packages
#
# Sat Oct 17 2026
#############################################################################


class CapacityError(Exception):
    """Base class for numeric failures raised by this package."""


class NonSummableError(CapacityError):
    """Partial sums of a decay profile did not converge within the budget."""


class DomainError(CapacityError, ValueError):
    """An argument lies outside the domain of a closed-form expression."""


class InvalidPowerError(DomainError):
    """The power parameter must exceed 1 for the log-uniform scheme."""


class GuardTooShortError(CapacityError):
    """The guard length violates tail_sum(profile, L) * P <= sigma^2."""


class QuadratureError(CapacityError):
    """A quadrature rule failed its normalisation self-check."""


class TruncationTooShallowWarning(UserWarning):
    """Simulated paths stop early enough that the neglected interference is not small."""


class GuardLengthClampedWarning(UserWarning):
    """The closed-form guard length was non-positive and has been clamped to 0."""


class ExtrapolationWarning(UserWarning):
    """A tabulated profile was evaluated beyond its table."""
