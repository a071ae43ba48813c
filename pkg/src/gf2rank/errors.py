"""Exception hierarchy shared across the package."""


class Gf2RankError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(Gf2RankError):
    """Malformed textual input (weight spec, matrix file, ...)."""


class InvalidDistribution(Gf2RankError):
    """Weight distribution violates its invariants (bad atom, bad sum)."""


class DimensionMismatch(Gf2RankError):
    """Row length incompatible with the matrix column count."""


class TooLarge(Gf2RankError):
    """Instance exceeds the size limit of an exhaustive routine."""


class PrecisionLoss(Gf2RankError):
    """Rounding-error bound of a numerical sum exceeds the allowed tolerance."""


class TruncationTooSmall(Gf2RankError):
    """Truncated support leaves more tail mass than permitted."""


class NumericalResidue(Gf2RankError):
    """A quantity that must be real carries a non-negligible imaginary part."""


class InvalidParam(Gf2RankError):
    """Parameter outside the documented domain."""


class NoConvergence(Gf2RankError):
    """Iteration or scan failed to converge within its budget."""


class Inconsistent(Gf2RankError):
    """Independent computation routes disagree beyond tolerance."""


class VerificationFailed(Gf2RankError):
    """A verification suite reported at least one failing check."""
