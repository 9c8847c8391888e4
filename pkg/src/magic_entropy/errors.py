"""Exception types shared across modules."""

from .tableau import ZeroProbabilityError


class BudgetExceededError(RuntimeError):
    """A configured size limit (branches, candidates, matrix dimension) was hit."""


class InfeasibleError(RuntimeError):
    """The request is outside what the chosen method can handle."""


class TruthVectorBoundWarning(RuntimeWarning):
    """More truth-vector classes were observed than the 2^(K^2/2) sanity ceiling."""


__all__ = ["BudgetExceededError", "InfeasibleError", "TruthVectorBoundWarning", "ZeroProbabilityError"]
