"""Exception taxonomy for numerical failure modes.

ValueError remains the vehicle for plain domain violations (bad arguments,
out-of-range orders); the classes below mark failures of the numerics
that callers may want to catch and report individually.
"""


class IndefSLError(Exception):
    """Base class for numerical failures in this package."""


class IntegrationFailure(IndefSLError):
    def __init__(self, message, x=None):
        super().__init__(message if x is None else f"{message} (at x={x:.6g})")
        self.x = x


class NonDecayingTail(IndefSLError):
    """The WKB tail at the truncation radius is not on the decaying branch."""


class TruncationUnconverged(IndefSLError):
    """Doubling the truncation radius moved the answer too much."""


class BranchAmbiguous(IndefSLError):
    """Square-root branch selection failed (spectral parameter on a band)."""


class IdentityViolated(IndefSLError):
    """A defining polynomial identity failed beyond tolerance."""


class SummabilityFailed(IndefSLError):
    """Band-data tail sums have not converged at the requested truncation."""


class DenominatorVanishes(IndefSLError):
    """M_+ - M_- (or a variant) vanished at a sample point."""

    def __init__(self, lam, message=None):
        super().__init__(message or f"denominator vanishes at lambda={lam}")
        self.lam = lam


class RootNotBracketed(IndefSLError):
    """A bracketing scan exhausted its window without a sign change."""


class ZeroOnContour(IndefSLError):
    """Argument-principle contour passed through (near-)zero values."""


class EvaluationFailed(IndefSLError):
    """An m-evaluator could not produce a value at the requested point."""


class TailMassTooLarge(IndefSLError):
    """First-moment tail of the potential beyond the window is not small."""
