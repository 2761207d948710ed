"""Exception hierarchy.

Every domain error carries a stable ``code`` (the class name) so the CLI can
emit structured error payloads without guessing at provenance.
"""

from __future__ import annotations


class OrbiqrrError(Exception):
    """Base class for all domain errors raised by this package."""

    @property
    def code(self) -> str:
        return type(self).__name__


# -- exact arithmetic ------------------------------------------------------

class NonUnitConstantTerm(OrbiqrrError):
    """Series inversion requires an invertible (d=0, z=0) coefficient."""


class PoleAtZero(OrbiqrrError):
    """The nonequivariant limit hit a pole at lambda = 0."""


class LogObstruction(OrbiqrrError):
    """The nonequivariant limit is undefined on log-lambda terms."""


class ExpObstruction(OrbiqrrError):
    """exp() of a scalar is only representable for rational multiples of ln(lambda)."""


class CyclotomicOrderTooSmall(OrbiqrrError):
    """A root of unity does not live in the requested cyclotomic field."""


class NonInvertible(OrbiqrrError):
    """Division by a scalar that is zero or carries log-lambda terms."""


# -- target model ----------------------------------------------------------

class InvalidParams(OrbiqrrError):
    """Bad parameters passed to a built-in target constructor."""


class BasisMismatch(OrbiqrrError):
    """A cohomology class refers to components or basis entries the target lacks."""


class IndexOutOfRange(OrbiqrrError):
    """Eigenbundle index outside 0 <= l < r_i."""


class SchemaError(OrbiqrrError):
    """Malformed config document; message carries the offending field path."""


class InvariantViolation(OrbiqrrError):
    """A structural invariant of the target/bundle data failed validation."""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        msg = invariant if not detail else f"{invariant}: {detail}"
        super().__init__(msg)


# -- Givental space / loop operators ---------------------------------------

class TruncationTooNarrow(OrbiqrrError):
    """Requested quantity needs coefficients outside the declared truncation."""


class NonUnitTwist(OrbiqrrError):
    """The twisting class has no square root at the constant level."""


# -- genus-0 pipeline -------------------------------------------------------

class AssumptionViolated(OrbiqrrError):
    """Hypergeometric modification needs a split bundle pulled back from the coarse space."""


class PositivityViolated(OrbiqrrError):
    """z-powers above 1 survive in the small-parameter expansion (c1(F) too big)."""


class NormalFormViolation(OrbiqrrError):
    """Ingested J-function data does not have the z + t + O(1/z) head."""


class UnsupportedTarget(OrbiqrrError):
    """Invariant extraction only implemented for the declared hypersurface modes."""


class DimensionMismatch(OrbiqrrError):
    """Correlator insertions violate the virtual dimension constraint."""


class InsufficientTable(OrbiqrrError):
    """A universal-equation check needs correlator entries absent from the table."""

    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__(f"missing correlator entries: {self.missing}")


# -- quantization ------------------------------------------------------------

class NotInfinitesimallySymplectic(OrbiqrrError):
    """Quantization rejected an operator B z^m that is not infinitesimally symplectic."""


class IndexOverflow(OrbiqrrError):
    """A Fock operator produced variable indices beyond the polynomial's bounds."""


# -- CLI / cache -------------------------------------------------------------

class CorruptCache(OrbiqrrError):
    """A cached artifact failed its content-hash check."""


class UsageError(OrbiqrrError):
    """Bad command line; exits with status 2."""
