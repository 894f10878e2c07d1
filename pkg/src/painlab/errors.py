"""Exception hierarchy shared by all modules."""


class PainlabError(Exception):
    """Base class for all library errors."""


class NumericalFailure(PainlabError):
    """Integration or transport could not complete."""


class PoleEncountered(NumericalFailure):
    pass


class StepLimitExceeded(NumericalFailure):
    pass


class NonFiniteRhs(NumericalFailure):
    pass


class IllConditionedTransport(NumericalFailure):
    pass


class InsufficientSamples(PainlabError):
    pass


class NonUniformSpacing(PainlabError):
    pass


class DefectiveMatrix(PainlabError):
    pass


class DegenerateLeadingCoefficient(PainlabError):
    pass


class SingularEvaluation(PainlabError):
    """A denominator vanished; the message names it."""


class SingularParametrization(SingularEvaluation):
    pass


class DegenerateBranch(PainlabError):
    pass


class BranchCutCrossing(PainlabError):
    pass


class RealityViolated(PainlabError):
    pass


class DegenerateEigenvalues(PainlabError):
    pass


class NonGenericState(PainlabError):
    pass


class ZeroColumnViolation(PainlabError):
    pass


class NonSingularRhs(PainlabError):
    pass


class DegenerateDenominator(PainlabError):
    pass


class ZeroDelta(PainlabError):
    pass


class NotFirstOrderPole(PainlabError):
    pass


class MovingPoleCollision(PainlabError):
    pass


class ConfigError(PainlabError):
    pass


def nonzero(value, name, exc=SingularEvaluation, tol=0.0):
    """Return ``value`` unless its magnitude is at most ``tol``."""
    v = value
    while hasattr(v, "v"):
        v = v.v
    if abs(v) <= tol:
        raise exc(f"vanishing denominator: {name}")
    return value
