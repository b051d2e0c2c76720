"""Exception types shared across the package."""


class NcprodError(Exception):
    """Base class for all errors raised by ncprod."""


class ZeroSeed(NcprodError, ValueError):
    pass


class ConstraintViolated(NcprodError, ValueError):
    """A family parameter constraint does not evaluate to exactly 1.

    ``constraint`` names the polynomial identity and ``defect`` is
    ``value - 1`` (exact in exact mode).
    """

    def __init__(self, constraint: str, value, defect=None):
        self.constraint = constraint
        self.value = value
        self.defect = defect if defect is not None else value - 1
        super().__init__(f"constraint {constraint} violated: evaluates to {value} (defect {self.defect})")


class NotUnitVector(NcprodError, ValueError):
    pass


class NotOrthogonal(NcprodError, ValueError):
    pass


class NotUnit(NcprodError, ValueError):
    pass


class MatrixShapeMismatch(NcprodError, ValueError):
    pass


class NotAntisymmetric(NcprodError, ValueError):
    pass


class AxiomsNotVerified(NcprodError):
    """An operation that needs a solution of the axioms got a tensor that fails them."""


class IdealNotCentral(NcprodError):
    pass


class SpecParseError(NcprodError, ValueError):
    pass
