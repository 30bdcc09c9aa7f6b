"""Exception types shared across the package.

Axiom violations carry enough context (offending sets, ranks) to be
actionable; everything else is a plain subclass of MatroidError so callers
can catch the whole family at once.
"""

from __future__ import annotations


class MatroidError(Exception):
    """Base class for all errors raised by this package."""


class AxiomViolation(MatroidError):
    """A proposed family of cyclic flats fails one of the lattice axioms."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class Z0Violation(AxiomViolation):
    """The family is not a lattice under inclusion, or the computed
    join/meet of two members leaves the family."""


class Z1Violation(AxiomViolation):
    """The least member does not have rank zero."""


class Z2Violation(AxiomViolation):
    """A nested pair violates 0 < r(Y) - r(X) < |Y - X|."""


class Z3Violation(AxiomViolation):
    """A pair violates the submodular inequality
    r(X v Y) + r(X ^ Y) + |(X n Y) - (X ^ Y)| <= r(X) + r(Y)."""


class BudgetExceeded(MatroidError):
    """An exact computation was refused because the instance is larger than
    the stated budget for that algorithm."""


class HasLoops(MatroidError):
    """The operation requires a loopless matroid."""


class HasColoops(MatroidError):
    """The operation requires a coloop-free matroid."""


class NotATExpansion(MatroidError):
    """The matroid does not arise from the t-fold expansion being undone."""


class DecompositionMismatch(MatroidError):
    """A claimed decomposition (union factors, presentation) does not
    reproduce the target matroid."""


class MalformedTree(MatroidError):
    """A branch decomposition fails a structural requirement (not a cubic
    tree, labels missing or duplicated)."""


class InvalidTangle(MatroidError):
    """A set family fails one of the tangle axioms at the claimed order."""


class InputOrderNotPositroid(MatroidError):
    """The base ordering handed to an expansion-order construction is not
    itself a positroid order."""
