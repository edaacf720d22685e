"""Exception hierarchy shared by every module."""


class AlgebraError(ValueError):
    """Base class for all errors raised by selfclose."""


class InvalidPresentation(AlgebraError):
    pass


class IncompatibleHomomorphisms(AlgebraError):
    pass


class NotEnumerable(AlgebraError):
    """Raised when a hom-set is infinite and cannot be listed."""


class PreconditionViolation(AlgebraError):
    pass


class InsufficientTable(AlgebraError):
    """A homology degree above the asserted table cutoff was requested."""


class InsufficientData(AlgebraError):
    """A graded map is not defined up to the requested degree."""


class UndefinedDimension(AlgebraError):
    pass


class UnsupportedModel(AlgebraError):
    pass


class InfiniteSolutionSet(AlgebraError):
    """A ring constraint system has infinitely many integer solutions."""


class SuiteRefused(AlgebraError):
    """A verification suite's hypothesis does not hold for the given input."""


class InconsistentEvidence(AlgebraError):
    """Two closeness rules produced disjoint intervals."""
