"""Exception hierarchy shared by all modules."""


class FoliationError(Exception):
    """Base class for all package errors."""


class ZeroPolynomial(FoliationError):
    """An operation received the zero polynomial."""


class DegenerateLinearPart(FoliationError):
    """Eigenvalue ratio test on a linear part with zero determinant."""


class NotSingular(FoliationError):
    """Blow-up or classification requested at a regular point."""


class NotSaddleNode(FoliationError):
    """Saddle-node profiling requested on a non-saddle-node germ."""


class OrderTooSmall(FoliationError):
    """Requested jet order is too small to be useful downstream."""


class NotInvariantBranch(FoliationError):
    """The supplied branch is not invariant for the local 1-form."""


class TruncationInsufficient(FoliationError):
    """A residue failed to stabilize over two consecutive truncation orders."""


class MaxBlowupsExceeded(FoliationError):
    """The reduction loop hit its blow-up budget."""


class AlgebraicCenterUnsupported(FoliationError):
    """A point that must be blown up has non-rational coordinates."""


class ProximityMismatch(FoliationError):
    """Internal consistency check A = -F^T F failed."""


class FormulaMismatch(FoliationError):
    """A closed formula disagrees with its recorded or oracle value."""


class NotInvariant(FoliationError):
    """A divisor used in an index formula has a non-invariant attachment."""


class NotReducedEffective(FoliationError):
    """GSV requested on a divisor that is not reduced and effective."""


class CommonComponent(FoliationError):
    """Two curves passed to an intersection routine share a component."""


class GenericityFailure(FoliationError):
    """Randomized genericity certificates kept disagreeing."""


class UnsupportedBranch(FoliationError):
    """A Puiseux branch needs non-rational coefficients."""


class ParseError(FoliationError):
    """A job document could not be parsed."""
