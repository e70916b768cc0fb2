"""Exception and warning types raised across the package."""


class FlatFrontError(Exception):
    """Base class; ``code`` is the machine-readable name used by the CLI."""

    @property
    def code(self):
        return type(self).__name__


class NonRegularCurve(FlatFrontError):
    pass


class VanishingCurvature(FlatFrontError):
    pass


class GridTooCoarse(FlatFrontError):
    pass


class DualityViolation(FlatFrontError):
    def __init__(self, message, residual=None, name=None):
        super().__init__(message)
        self.residual = residual
        self.name = name


class DegenerateGram(FlatFrontError):
    pass


class UmbilicDegenerate(FlatFrontError):
    def __init__(self, message, segments=None):
        super().__init__(message)
        # per-branch pieces of a spherical caustic, when any could be built
        self.segments = segments or []


class NotOnSingularLocus(FlatFrontError):
    pass


class EmptySingularLocus(FlatFrontError):
    pass


class LinearSingularityPresent(FlatFrontError):
    pass


class PeriodConditionViolated(FlatFrontError):
    pass


class InvalidParameter(FlatFrontError):
    pass


class ParseError(FlatFrontError):
    pass


class SchemaError(FlatFrontError):
    def __init__(self, key, message=None):
        super().__init__(message or f"invalid or missing key: {key}")
        self.key = key


class NonFiniteVertex(FlatFrontError):
    pass


class DegenerateCausticExport(FlatFrontError):
    pass


class PeriodDefectWarning(UserWarning):
    """The generator does not close up; the front lives on the universal cover."""
