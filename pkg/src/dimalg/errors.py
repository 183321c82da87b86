"""Exception hierarchy shared by every layer of the kernel."""


class DimalgError(Exception):
    """Base class for all errors raised by this package."""


class VarTableMismatch(DimalgError, ValueError):
    pass


class UnknownVariable(DimalgError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown variable"


class InvertibilityError(DimalgError, ValueError):
    """A negative power or substitution would break the Laurent contract."""


class DimensionMismatch(DimalgError, ValueError):
    """Addition attempted across two different slices."""


class ModelMismatch(DimalgError, ValueError):
    pass


class NotAUnit(DimalgError, ValueError):
    pass


class ShapeMismatch(DimalgError, ValueError):
    pass


class InconsistentIdentification(DimalgError, ValueError):
    pass


class InvalidBracket(DimalgError, ValueError):
    """A bracket table violates antisymmetry or dimension homogeneity."""


class WitnessError(DimalgError):
    """A mathematical precondition failed; ``witness`` names the culprit."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotCoisotropic(WitnessError):
    pass


class IdealizerViolation(WitnessError):
    pass


class IllDefined(WitnessError):
    pass


class NotACasimir(WitnessError):
    pass


class NonzeroBracketDimension(DimalgError, ValueError):
    pass


class DimensionIncompatible(DimalgError, ValueError):
    pass


class InconsistentProduct(WitnessError):
    """The induced entries for the base-product coordinates have no solution."""
