"""Exception types shared across the package."""


class CStarIndexError(Exception):
    """Base class for all package-specific errors."""


class ShapeMismatch(CStarIndexError):
    """Operands live in different ambient spaces or have incompatible shapes."""


class BlockMismatch(CStarIndexError):
    """A trace or element was used against the wrong block structure."""


class NotAnAlgebra(CStarIndexError):
    """A presented subspace fails the *-closure or product-closure residuals."""


class NotUnital(CStarIndexError):
    """An inclusion fails the unital dimension-consistency bookkeeping."""


class NotSubalgebra(CStarIndexError):
    """The claimed subalgebra is not contained in the larger algebra."""


class TraceNotFaithful(CStarIndexError):
    """The trace density is singular (some weight vanishes)."""


class DegenerateModule(CStarIndexError):
    """Module Gram-Schmidt exhausted a linear basis without reconstructing."""


class NotCentral(CStarIndexError):
    """A quasi-basis sum failed the centrality test (broken quasi-basis)."""


class SearchDidNotConverge(CStarIndexError):
    """The minimal-index descent stopped with a large gradient norm."""


class InconsistentExtension(CStarIndexError):
    """The least-squares extension of the dual expectation is inconsistent."""


class IndexNotScalar(CStarIndexError):
    """An operation requiring a scalar index met a genuinely central one."""


class DegeneratePerron(CStarIndexError):
    """The top eigenvalue of the inclusion-matrix square is not simple."""


class NotIntermediate(CStarIndexError):
    """A claimed intermediate algebra fails the sandwich containment."""


class DegenerateIntermediate(CStarIndexError):
    """An intermediate coincides with the bottom algebra (zero denominator)."""


class NotInBasicConstruction(CStarIndexError):
    """An operator does not commute with the right action; outside A1."""


class CorrespondenceViolation(CStarIndexError):
    """The de-tensoring round trip failed; would falsify the finite analogue."""


class NotASubgroup(CStarIndexError):
    """The given index set is not multiplicatively closed in the group."""


class SizeCapExceeded(CStarIndexError):
    """A construction was refused because it exceeds the desk-scale cap."""


class JobSpecError(CStarIndexError):
    """A CLI job document failed validation."""


class VerificationError(CStarIndexError):
    """A numerical invariant that must hold was violated."""
