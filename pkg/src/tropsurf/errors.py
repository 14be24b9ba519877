"""Exception types shared across the package."""


class TropsurfError(Exception):
    """Base class for every error raised by this package."""


class FixtureSyntaxError(TropsurfError):
    """Malformed fixture text.  Carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class NonRegularError(TropsurfError):
    """A simplex repeats one of its own faces (regularity violation)."""


class IncoherentIncidenceError(TropsurfError):
    """Facet edge ids do not match the facet's vertex pairs, or a facet
    references a cell that does not exist."""


class DisconnectedError(TropsurfError):
    """The complex is not connected, or has an isolated vertex."""


class UnknownIdError(TropsurfError):
    """A vertex / edge / facet id that does not exist."""


class NotSymmetricError(TropsurfError):
    """Matrix input is not symmetric."""


class SingularError(TropsurfError):
    """Congruence transform is not invertible."""


class DimensionMismatchError(TropsurfError):
    """Matrix dimensions do not match."""


class MissingAlphaError(TropsurfError):
    """A structure constant for an (edge, endpoint) incidence is missing."""


class DuplicateAlphaError(TropsurfError):
    """A structure constant was assigned more than once."""


class ConstraintViolatedError(TropsurfError):
    """alpha(v,e) + alpha(w,e) != deg(e) on some edge.

    ``violations`` lists every failing edge as (edge_id, alpha_v, alpha_w, degree).
    """

    def __init__(self, violations):
        self.violations = tuple(violations)
        parts = ", ".join(
            f"edge {e}: {av}+{aw} != deg {d}" for e, av, aw, d in self.violations
        )
        super().__init__(f"edge constraint violated: {parts}")


class NotDegreeTwoError(TropsurfError):
    """Some edge does not have degree exactly 2."""


class NotSemidefiniteAtVertexError(TropsurfError):
    """Blow-up requested at a vertex whose local matrix is not negative
    semidefinite."""


class NotIncidentError(TropsurfError):
    """Edge is not incident to the given vertex."""


class PreconditionViolatedError(TropsurfError):
    """Some local intersection matrix has two or more positive eigenvalues."""


class NotASurfaceError(TropsurfError):
    """Facet subset does not form a closed surface."""


class NotACocycleError(TropsurfError):
    """Edge assignment violates the triangle cocycle law."""


class NotSubcomplexError(TropsurfError):
    """A claimed subcomplex is not closed under taking faces."""


class NotVerifiedDecompositionError(TropsurfError):
    """Operation requires a verified manifold-with-fins decomposition."""


class AlreadyOrientableError(TropsurfError):
    """Double cover requested for an orientable manifold part."""
