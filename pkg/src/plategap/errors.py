"""Exception hierarchy for plategap."""


class PlateError(ValueError):
    """Base class for invalid input or degenerate configurations."""


class GeometryError(PlateError):
    pass


class AdmissibilityError(PlateError):
    """Load exponent too close to an integer mode index."""


class SingularSystemError(PlateError):
    pass


class PoleError(PlateError):
    """Evaluation point sits on a pole of the characteristic function."""


class DegenerateConfigurationError(PlateError):
    pass


class BracketError(PlateError):
    """No sign change where exactly one root is expected."""


class QuadratureError(RuntimeError):
    pass
