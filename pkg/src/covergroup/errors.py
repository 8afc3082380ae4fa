"""Exception classes raised across the package."""


class CoverGroupError(Exception):
    """Base class for all errors raised by ``covergroup``."""


class CertificationError(CoverGroupError, ValueError):
    """A matrix could not be certified as an element of the group."""


class NotOrthogonal(CertificationError):
    """``M^T G M`` differs from ``G`` by more than the tolerance."""

    def __init__(self, residual, tol):
        super().__init__(f"not pseudo-orthogonal: residual {residual:.3e} > tol {tol:.1e}")
        self.residual = residual
        self.tol = tol


class WrongComponent(CertificationError):
    """The matrix is pseudo-orthogonal but outside the identity component."""

    def __init__(self, which, value):
        super().__init__(f"wrong component: det of {which} block is {value:.3e} <= 0")
        self.which = which
        self.value = value


class NearDegenerate(CoverGroupError, ArithmeticError):
    """A signature Gram-Schmidt pivot had the wrong sign or was too small."""


class IllConditioned(CoverGroupError, ArithmeticError):
    """A linear solve was too badly conditioned to trust."""


class NearBoundary(CoverGroupError, ValueError):
    """A domain point is too close to the boundary of the domain."""


class DegenerateBasis(CoverGroupError, ValueError):
    """Basis vectors of a plane are not linearly independent."""


class NotNegative(CoverGroupError, ValueError):
    """A plane is not negative definite for the scalar product."""


class BlockLeakage(CoverGroupError, ArithmeticError):
    """Off-diagonal blocks of a fiber element exceed the tolerance."""


class NotRotation(CoverGroupError, ValueError):
    """A 2x2 matrix is not close enough to SO(2)."""


class SubdivisionExhausted(CoverGroupError, RuntimeError):
    """Adaptive angle lifting hit its evaluation cap."""


class ConstraintViolated(CoverGroupError, ArithmeticError):
    """A cover element violates psi(X) = rho(tau)."""


class ParityMismatch(CoverGroupError, ValueError):
    """The requested construction needs the other parity of n."""


class KindMismatch(CoverGroupError, ValueError):
    """Quotient group and compact form do not match."""


class NotTangent(CoverGroupError, ValueError):
    """A vector is not tangent to the Einstein universe at the given point."""


class DegenerateNorm(CoverGroupError, ArithmeticError):
    """A normalization denominator vanished."""


class StepError(CoverGroupError, ValueError):
    """Finite-difference step outside the supported range."""
