"""Exception and warning types shared across the library."""


class Error(Exception):
    """Base class for all library errors."""


class EvaluationError(Error):
    """A user-supplied function returned a non-finite value or raised."""


class DomainError(Error):
    """An argument lies outside the domain an operation works on."""


class InvalidMeasureError(Error):
    """A weighting measure violates its positivity or domain rules."""


class InvalidEntropyError(Error):
    """An entropy generator fails its convexity or derivative audits."""


class InvalidMassError(Error):
    """A curvature (mass) function is not strictly positive."""


class MissingAnchorError(Error):
    """A score family has no self-accuracy anchor for the requested value."""


class NearSingularityError(Error):
    """Mass recovery was attempted too close to the reference value."""


class LabelMismatchError(Error):
    """A probability refers to an outcome label the variable does not have."""


class InvalidProbabilityError(Error):
    """Weights are negative or do not sum to one."""


class UnsupportedFormError(Error):
    """The requested conversion or representation is not available."""


class SpecError(Error):
    """A JSON score definition failed to parse or validate."""


class InconsistentMassWarning(UserWarning):
    """The two finite-difference mass estimates disagree noticeably."""
