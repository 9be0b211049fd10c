"""Exception hierarchy.

Input-type errors (bad specs, inadmissible vectors) map to CLI exit code 2;
a failed verdict is never an exception.
"""


class ModstripError(ValueError):
    """Base class for every error raised by this package."""


class InputError(ModstripError):
    pass


class SpecParseError(InputError):
    pass


class DomainError(InputError):
    """A point or parameter lies outside the region an operation accepts."""


class SingularityError(DomainError):
    """Evaluation hit the support of the singular measure."""


class PoleError(DomainError):
    """Generator evaluated at one of its real poles."""


class ParameterError(InputError):
    pass


class PrecisionError(InputError):
    """A grid operation would lose more than the documented accuracy."""


class AdmissibilityError(InputError):
    """A vector is not band-limited enough for the membership test."""


class DegenerateProjectionError(InputError):
    pass


class NotInnerError(InputError):
    pass


class NormalizationError(InputError):
    pass


class RealityError(InputError):
    pass
