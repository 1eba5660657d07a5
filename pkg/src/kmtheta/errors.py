"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent input data."""


class DegenerateFormError(InputError):
    """The bilinear form is (numerically) degenerate."""


class NullVectorError(InputError):
    """A vector with (C, C) = 0 where a nonzero self-pairing is needed."""


class NotNegativePlaneError(InputError):
    """Two vectors do not span a negative definite 2-plane."""


class IncidenceError(InputError):
    """A configuration violates the incidence conditions."""


class RegularityError(InputError):
    """A vector is orthogonal (or nearly so) to one of the configuration vectors."""


class SingularLocusError(ArithmeticError):
    """Evaluation point lies on the locus where R(x, z) vanishes."""


class AccuracyError(ArithmeticError):
    """A numerical budget was exhausted before reaching the requested tolerance.

    The best available estimate and its error bound are kept on the exception.
    """

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error
