"""Exception types shared across the package."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to meet its contract."""


class EigenDecompositionError(NumericalError):
    """Eigenvalue computation did not converge or violated its residual bound."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class RankDeficiencyError(NumericalError):
    """A pivoted factorization hit a non-positive pivot.

    ``rank`` is the number of pivots completed before the failure, i.e. the
    size of the largest leading positive definite block found.
    """

    def __init__(self, message, rank):
        super().__init__(message)
        self.rank = rank


class SingularOperatorError(NumericalError):
    """A linear matrix equation has a (nearly) singular operator."""


class PoleError(NumericalError):
    """Transfer-function evaluation requested at (or too close to) a pole."""


class CertificateError(NumericalError):
    """A symmetric matrix failed a passivity-certificate check.

    ``violation`` measures how far the offending eigenvalue lies on the
    wrong side of the semidefiniteness boundary.
    """

    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation


class ReductionRejected(NumericalError):
    """A reduction attempt was rejected (indefinite Gram matrix, singular
    shifted feedthrough, too few admissible zeros, ill conditioning).

    ``pivot_index`` carries the first failing Cholesky pivot when the
    rejection was caused by an indefinite Gram matrix.
    """

    def __init__(self, message, pivot_index=None):
        super().__init__(message)
        self.pivot_index = pivot_index
