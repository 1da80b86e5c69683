"""Exception hierarchy shared by every module."""


class LevyError(Exception):
    """Base class for all package errors."""


class SpecError(LevyError):
    """Malformed triplet or spec-file data."""


class DimensionMismatch(SpecError):
    pass


class NonSymmetricQ(SpecError):
    pass


class NegativeEigenvalue(SpecError):
    pass


class NonIntegrableLevyMeasure(SpecError):
    pass


class AtomAtOrigin(SpecError):
    pass


class NonIntegrable(LevyError):
    """A requested moment of the Levy measure diverges."""


class NotDominated(LevyError):
    pass


class InfiniteMass(LevyError):
    pass


class SignedPartNotRepresentable(LevyError):
    """Measure subtraction left the supported density families."""


class HypothesisNotVerified(LevyError):
    pass


class InvalidWitness(LevyError):
    pass


class UnknownName(LevyError, KeyError):
    def __str__(self):
        # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""


class Unsupported(LevyError):
    pass


class NumericalError(LevyError):
    """Base for numerical failures (CLI exit code 3)."""


class QuadratureFailure(NumericalError):
    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class MaxSubdivisions(NumericalError):
    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class EvaluationFailure(NumericalError):
    pass
