"""Exception types shared across the library.

Infeasibility errors (caps, search budgets) derive from ``InfeasibleError``
so the CLI can map them to exit code 2 uniformly.
"""

from __future__ import annotations


class CongrankError(Exception):
    """Base class for all library errors."""


class NotAUnit(CongrankError, ArithmeticError):
    """Inversion requested for a residue divisible by p."""


class DimensionMismatch(CongrankError, ValueError):
    """Operands have incompatible dimensions."""


class ModulusMismatch(CongrankError, ValueError):
    """Operands live over different moduli."""


class NotInvertible(CongrankError, ArithmeticError):
    """Matrix determinant is divisible by p."""


class BadLevel(CongrankError, ValueError):
    """Reduction level outside the valid range for the modulus."""


class OrderExceedsBound(CongrankError, RuntimeError):
    """Element order search passed its bound without reaching the identity."""


class PresentationMismatch(CongrankError, ValueError):
    """Algebra elements belong to different presentations."""


class NonScalarCommutator(CongrankError, ArithmeticError):
    """Internal consistency failure: a monomial commutator was not scalar."""


class ZeroElement(CongrankError, ValueError):
    """Operation undefined on the zero element."""


class Unsupported(CongrankError, ValueError):
    """Requested parameters outside the supported range of this operation."""


class InfeasibleError(CongrankError, RuntimeError):
    """A size cap or budget refuses the requested computation."""


class GroupTooLarge(InfeasibleError):
    """Group enumeration would exceed the configured cap."""


class SpaceTooLarge(InfeasibleError):
    """Subspace enumeration would exceed the configured cap."""


class SearchBudgetExceeded(InfeasibleError):
    """Rank search exceeded its extension-step budget."""
