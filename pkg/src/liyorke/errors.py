"""Exception hierarchy.

Every failure carries enough structure (offending index, pair, time label)
for a caller to report it without re-deriving anything.
"""

from __future__ import annotations

from typing import Any


class LiYorkeError(Exception):
    """Base class for all errors raised by the package."""

    def __init__(self, message: str, **witness: Any):
        super().__init__(message)
        self.witness = witness


# -- matrix -----------------------------------------------------------------

class MatrixError(LiYorkeError, ValueError):
    pass


class NotSquare(MatrixError):
    pass


class NonBinaryEntry(MatrixError):
    pass


class ZeroRowOrColumn(MatrixError):
    pass


class NotIrreducible(MatrixError):
    pass


class HypothesisViolated(MatrixError):
    """Irreducibility or the row-sum >= 2 condition fails."""


class NotAdmissible(MatrixError):
    pass


class TooShort(MatrixError):
    pass


class BudgetExceeded(MatrixError):
    pass


class CountOverflow(MatrixError, OverflowError):
    pass


class MatrixFileError(MatrixError):
    pass


# -- symbolic ---------------------------------------------------------------

class SymbolicError(LiYorkeError):
    pass


class CycleMismatch(SymbolicError, ValueError):
    pass


class DepthExplosion(SymbolicError):
    pass


class IncompatibleSchedules(SymbolicError, ValueError):
    pass


# -- dynamical systems ------------------------------------------------------

class DynsysError(LiYorkeError):
    pass


class DomainViolation(DynsysError, ValueError):
    pass


class NotMonotone(DynsysError):
    pass


class EmptyPreimage(DynsysError):
    pass


class NonIncreasingTimes(DynsysError, ValueError):
    pass


class TailNotAnalyzable(DynsysError):
    pass


class ConfigError(LiYorkeError, ValueError):
    pass


# -- certification ----------------------------------------------------------

class CertificationError(LiYorkeError):
    pass


class Reducible(CertificationError):
    pass


class RowSumCondition(CertificationError):
    pass


class Overlapping(CertificationError):
    pass


class CoveringFailed(CertificationError):
    pass


class NotExpanding(CertificationError):
    pass


class CriterionFailed(CertificationError):
    """lambda * mu**(k0 - 1) does not exceed 1."""


class SelfLoopMissing(CertificationError):
    pass


class MarginalVerdict(CertificationError):
    pass


class InvalidCertificate(CertificationError):
    pass


# -- synthesis / diagnostics ------------------------------------------------

class SynthesisError(LiYorkeError):
    pass


class TolTooTight(SynthesisError):
    pass


class DepthTooLarge(SynthesisError):
    pass


class NoMonotonePreimage(SynthesisError):
    pass


class ShadowingFailure(SynthesisError):
    pass


class HorizonTooShort(LiYorkeError):
    pass
