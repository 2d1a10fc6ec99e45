"""Exception hierarchy.  The CLI reports these by class name."""


class QKMError(Exception):
    """Base class for all library errors."""


class NotGCM(QKMError):
    pass


class NotSymmetrizable(QKMError):
    pass


class SingularCartanMatrix(QKMError):
    pass


class RankMismatch(QKMError):
    pass


class DatumMismatch(QKMError):
    pass


class NotDominant(QKMError):
    pass


class OutOfDepth(QKMError):
    """A weight outside the retained (fully correct) region was requested."""


class DepthTooSmallForRequest(QKMError):
    pass


class NotSingular(QKMError):
    pass


class GenerationFailure(QKMError):
    """A weight block is not spanned by F-images of retained singular vectors."""


class ExponentNotInLattice(QKMError):
    pass


class NoSolution(QKMError):
    pass


class NonUniqueSolution(QKMError):
    pass


class GoldenMismatch(QKMError):
    pass


class ParseError(QKMError, ValueError):
    pass
