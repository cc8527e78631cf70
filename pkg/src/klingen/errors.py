"""Exception types shared across the package.

Every failure mode that a caller can meaningfully react to gets its own
class; anything else is a plain ValueError/TypeError at the point of use.
"""

from __future__ import annotations


class KlingenError(Exception):
    """Base class for all package-specific errors."""


# ---------------------------------------------------------------- finite fields

class NotPrime(KlingenError):
    """The requested characteristic is not a prime number."""


class FieldTooLarge(KlingenError):
    """The requested field order exceeds the supported bound."""


class MixedFields(KlingenError):
    """Arithmetic attempted between elements of different fields."""


class DivisionByZero(KlingenError):
    """Inversion or division of the zero element."""


# ---------------------------------------------------------------- matrix groups

class NotSimilitude(KlingenError):
    """A matrix expected to lie in GSp(4) does not."""


class UnknownName(KlingenError):
    """named_subgroup was asked for a name it does not know."""


class ClosureTooLarge(KlingenError):
    """Subgroup closure exceeded its element bound."""


class GroupTooLarge(KlingenError):
    """A whole-group operation was asked for beyond its size bound."""


# ------------------------------------------------------------- character data

class ValueNotPinned(KlingenError):
    """A character value (or aggregate) was requested that the stored
    class data does not determine."""


class NotScopedClass(KlingenError):
    """classify() met an element outside the classification's scope."""


class DixonBoundExceeded(KlingenError):
    """dixon_table called on a group beyond its size/class bounds."""


class MismatchReport(KlingenError):
    """verify_char_lemmas found disagreements.

    The ``failures`` attribute lists every failed check as
    ``(check_name, expected, actual)`` triples.
    """

    def __init__(self, failures):
        self.failures = list(failures)
        lines = "; ".join(
            f"{name}: expected {exp!r}, got {act!r}" for name, exp, act in self.failures
        )
        super().__init__(f"{len(self.failures)} check(s) failed: {lines}")


# ------------------------------------------------------------ truncated p-adics

class PrecisionTooLow(KlingenError):
    """A construction was attempted below the minimum safe precision."""


class PrecisionExhausted(KlingenError):
    """An arithmetic result is indistinguishable from zero at the
    remaining precision (e.g. inverting a residue that vanishes to the
    tracked depth)."""


class PrecisionInsufficient(KlingenError):
    """A yes/no question (integrality, reduction) cannot be decided at the
    tracked precision.  Never guessed."""


class NonConvergence(KlingenError):
    """Randomized subgroup estimation failed to stabilize in budget."""


# ------------------------------------------------------------------- counting

class NonIntegralResult(KlingenError):
    """A closed-form count or dimension evaluated to a non-integer or a
    negative number."""


class NotPolynomial(KlingenError):
    """Formula values are inconsistent with a polynomial in q of the
    expected degree window."""


# ------------------------------------------------------------------ dimensions

class DisagreementError(KlingenError):
    """The two independent dimension routes disagree.  Fatal: raised with
    both values attached, never reconciled silently."""

    def __init__(self, q, n, family, sum_value, formula_value):
        self.q = q
        self.n = n
        self.family = family
        self.sum_value = sum_value
        self.formula_value = formula_value
        super().__init__(
            f"dimension routes disagree at q={q}, n={n}, family={family}: "
            f"support-sum gives {sum_value}, closed formula gives {formula_value}"
        )


class ResourceBound(KlingenError):
    """A verification suite hit an explicit resource bound (size, budget)."""
