# coding=utf8


class MomentProblemError(Exception):
    pass


class ArgumentError(MomentProblemError, ValueError):
    pass


class FormatError(ArgumentError):
    """Malformed JSON input (bad schema, negative exponents, ragged lists)."""


class DegreeError(MomentProblemError, ValueError):
    """A polynomial or matrix needs moments beyond the functional's degree budget."""


class CapacityError(MomentProblemError):
    pass


class DomainError(MomentProblemError, ValueError):
    pass


class MembershipError(DomainError):
    def __init__(self, message: str, indices: list = None):
        super().__init__(message)
        self.indices = indices or []


class EstimationError(MomentProblemError):
    pass


class DegenerateError(MomentProblemError):
    pass


class InfeasibleError(MomentProblemError):
    pass


class CatalogLookupError(MomentProblemError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ''


class NonConvergenceError(MomentProblemError):
    def __init__(self, message: str, best_iterate=None, residuals: dict = None, iterations: int = 0):
        super().__init__(message)
        self.best_iterate = best_iterate
        self.residuals = residuals or {}
        self.iterations = iterations


class VerificationError(MomentProblemError):
    def __init__(self, leg: str, message: str, certificate=None):
        super().__init__(f'[{leg}] {message}')
        self.leg = leg
        self.certificate = certificate
