"""Exception hierarchy shared by all modules."""


class ShilovError(Exception):
    """Base class for all library errors."""


class InputError(ShilovError):
    """Malformed or inconsistent user input (CLI exit code 2)."""


class DomainError(ShilovError):
    """A point or stencil leaves the declared evaluation box."""


class EvaluationError(ShilovError):
    """A field evaluator returned a non-finite value."""


class GluingError(ShilovError):
    """Collar condition for the peak-gluing construction failed."""


class SamplingError(ShilovError):
    """Boundary sampling failed on too many rays."""


class ClassificationError(ShilovError):
    """Point is not on the polytope boundary within tolerance."""


class ProfileError(ShilovError):
    """Levi spectrum does not match the requested eigenvalue profile."""


class NumericRankError(ShilovError):
    """Rank computation produced an inconsistent (odd-parity) result."""


class UnderSampledError(ShilovError):
    """Point cloud too sparse for the requested box-counting scales."""


class OracleViolation(ShilovError):
    """An independent falsification oracle found a counterexample (CLI exit 3)."""
