"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SdreduceError(Exception):
    """Base class for all library errors."""


class UsageError(SdreduceError):
    """Bad arguments or configuration supplied by the caller."""


class UnknownId(UsageError):
    """Equation or family identifier not registered."""


class DomainError(SdreduceError):
    """Numerical-domain failure: the requested evaluation left the valid domain."""


class NonFiniteSample(DomainError):
    """An evaluator returned a non-finite value inside a stencil or sweep."""


class NoBracket(DomainError):
    """Root bracket without a sign change."""


class BadGrid(DomainError):
    """Abscissae not strictly increasing."""


class AnsatzSingular(DomainError):
    """Evaluation on the singular set of a reduction ansatz (y = 0 or r = 0)."""


class PoleCollision(DomainError):
    """Chiral-field variables collide (x = 0 makes the two pole positions equal)."""


class NegativeRadicand(DomainError):
    """Closed-form family evaluated where its square root turns negative."""


class TimeZero(DomainError):
    """Self-similar profile lifted to (x, t) at t = 0."""


class PoleAtNu2(DomainError):
    """Implicit traveling-wave relation evaluated at its pole nu = 2."""


class NonMonotone(DomainError):
    """Hodograph inversion attempted on a non-monotone slice."""


class YDependentGauge(DomainError):
    """Gauge function extracted from one row fails to balance the other rows."""


class DegenerateDenominator(DomainError):
    """Second-derivative relations evaluated where their denominator vanishes."""


class DegenerateHessian(DomainError):
    """Generating function with vanishing second derivative in its first slot."""


class OracleAmbiguous(SdreduceError):
    """A sign/variant oracle found no unique admissible choice."""


class GuardError(SdreduceError):
    """A run-level guard tripped."""


class HyperbolicityLost(GuardError):
    """Evolution entered (or started in) the non-wave-like regime max(alpha) >= 0."""


class BlowUp(GuardError):
    """Trajectory left the finite range; carries the last finite sample."""

    def __init__(self, message, t_last=None, state_last=None):
        super().__init__(message)
        self.t_last = t_last
        self.state_last = state_last
