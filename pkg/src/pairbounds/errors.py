"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`PairBoundsError`, which is itself a :class:`ValueError`, so callers
that only care about "bad input" can catch the builtin.
"""


class PairBoundsError(ValueError):
    pass


# graph construction / analysis
class IndexOutOfRange(PairBoundsError):
    pass


class SelfLoop(PairBoundsError):
    pass


class DuplicateEdge(PairBoundsError):
    pass


class EmptyGraph(PairBoundsError):
    pass


class InfeasibleDegree(PairBoundsError):
    pass


# labelers
class TooManyPairs(PairBoundsError):
    pass


class ParityError(PairBoundsError):
    pass


class DegreeTooLarge(PairBoundsError):
    pass


# instances and relations
class BadParams(PairBoundsError):
    pass


class SizeMismatch(PairBoundsError):
    pass


class DimMismatch(PairBoundsError):
    pass


# learning
class BadGamma(PairBoundsError):
    pass


class EmptyDataset(PairBoundsError):
    pass


class Divergence(PairBoundsError):
    pass


# bounds
class BadDelta(PairBoundsError):
    pass


class TraceExceedsBound(PairBoundsError):
    pass


class PreconditionMNotBigEnough(PairBoundsError):
    pass


# experiment runner
class ConfigError(PairBoundsError):
    pass
