"""
Error categories for parallax.

Input errors mean the request itself is malformed or outside a documented
contract; domain errors mean the numbers violate a precondition of the
requested decision. The CLI maps both to exit status 2.
"""


class ParallaxError(Exception):
    """Base class for parallax errors."""
    pass


# ---------- Input errors ----------

class InputError(ParallaxError):
    """Malformed or out-of-contract input."""
    pass


class ParseError(InputError):
    """A matrix file, norm spec or settings file could not be parsed."""
    pass


class ShapeMismatchError(InputError):
    """Operands have incompatible shapes."""
    pass


class NotSquareError(InputError):
    """A square matrix was required."""
    pass


class BadHandleError(InputError):
    """Norm handle is invalid for this operand (p < 1, k out of range, ...)."""
    pass


class NonFiniteError(InputError):
    """Input contains NaN or Inf."""
    pass


class ComplexInputError(InputError):
    """A real matrix was required."""
    pass


class TooLargeError(InputError):
    """Enumeration would exceed the supported dimension."""
    pass


class BadDimensionError(InputError):
    """Module element has the wrong multiplicity for this check."""
    pass


class BadBasisError(InputError):
    """Orthonormal basis is too small for this check."""
    pass


# ---------- Domain errors ----------

class DomainError(ParallaxError):
    """Numerical precondition failure."""
    pass


class ZeroMatrixError(DomainError):
    """A nonzero matrix was required."""
    pass


class NotHermitianError(DomainError):
    """Matrix is not Hermitian within tolerance."""
    pass


class SingularMatrixError(DomainError):
    """Matrix is rank-deficient within tolerance."""
    pass


class NotUnitError(DomainError):
    """Vector does not have Euclidean norm one."""
    pass


class NotMinimalError(DomainError):
    """Self inner product is not a rank-one orthogonal projection."""
    pass


class NotIdempotentError(DomainError):
    """Self inner product is not idempotent."""
    pass
