"""Exception types shared across the package."""


class SepstructError(Exception):
    """Base class for all errors raised by this package."""


class NotHermitianError(SepstructError):
    """Matrix expected to be Hermitian is not, beyond tolerance."""


class DimensionMismatchError(SepstructError):
    """Matrix shape is inconsistent with the declared bipartite dimensions."""


class NotNormalizedError(SepstructError):
    """State vector does not have unit norm."""


class OutOfRangeError(SepstructError):
    """A family parameter lies outside its admissible range."""


class ParseError(SepstructError):
    """Input text does not conform to the state JSON schema."""


class ValidationError(SepstructError):
    """A density-matrix invariant failed.

    The ``invariant`` attribute names the failed check: one of
    "finite", "dims", "hermitian", "psd", "trace".
    """

    def __init__(self, invariant: str, message: str | None = None):
        self.invariant = invariant
        super().__init__(message or f"density matrix invariant violated: {invariant}")


class NoSeparablePointError(SepstructError):
    """A search for a criterion-separable point along a family line found none."""


class InputNotEntangledError(SepstructError):
    """An operation requiring certified-entangled inputs received one that is not."""


class IncomparableError(SepstructError):
    """The subtraction weight in a finer-relation decomposition is zero
    (the second state's support is not contained in the first's)."""


class ProductStateError(SepstructError):
    """A pure state expected to be entangled has Schmidt rank one."""


class OracleUndecidedError(SepstructError):
    """The separability oracle could not certify a required question.

    ``partial`` carries whatever partial result was computed before the
    undecidable question was hit (may be None).
    """

    def __init__(self, message: str, partial=None):
        self.partial = partial
        super().__init__(message)
