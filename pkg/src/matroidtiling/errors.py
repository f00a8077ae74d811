"""Exception types shared across the package."""


class MatroidError(Exception):
    """Base class for all validation and construction errors."""


class UnequalBaseSizes(MatroidError):
    pass


class BepViolation(MatroidError):
    """Base exchange fails for the pair (A, B) at element x."""

    def __init__(self, A, B, x):
        self.A, self.B, self.x = A, B, x
        super().__init__(f"no exchange for x={x} in A={sorted(A)} against B={sorted(B)}")


class InvalidRank(MatroidError):
    pass


class GroundMismatch(MatroidError):
    pass


class GroundOverlap(MatroidError):
    pass


class HasLoops(MatroidError):
    pass


class NotAFace(MatroidError):
    pass


class NotARidge(MatroidError):
    pass


class NotAFlaceSequence(MatroidError):
    pass


class NotABasePolytope(MatroidError):
    pass


class NotASemitiling(MatroidError):
    def __init__(self, message, cell=None):
        self.cell = cell
        super().__init__(message)


class NotWeighted(MatroidError):
    pass


class NotAPuzzle(MatroidError):
    pass


class NotCollapsible(MatroidError):
    pass


class HypothesisViolation(MatroidError):
    """An insertion construction was called outside its case hypotheses."""


class PreconditionViolation(MatroidError):
    pass


class InternalNonTermination(MatroidError):
    """A budgeted loop exceeded its step cap; indicates invalid input or a bug."""


class SearchBudgetExceeded(MatroidError):
    pass


class NplusBound(MatroidError):
    """Extension guarantee only covers rank-3 ground sets of size at most 9."""


class SchemaError(MatroidError):
    def __init__(self, message, field=None):
        self.field = field
        super().__init__(message)
