"""Klingen fixed-vector dimensions, assembled two independent ways.

The total dim pi^{Kl(n)} is computed both as the support-weighted sum

    sum over the support table of  (coset count) x (per-coset fixed dim)

and as a closed formula in q and n (a four-case polynomial family in q,
scaled by q^{floor((n-2)/4)}).  The two routes share no code: the sum route
draws its counts from the coset enumeration and its per-coset dimensions
from the finite-group character data, while the formula route is a direct
rational evaluation.  Their agreement is the package's primary invariant,
and ``mode="both"`` turns any discrepancy into a fatal DisagreementError.

Zero paths: representations induced from the paramodular normalizer have
no Klingen-fixed vectors at any level, nongeneric families vanish at every
level, and levels n in {0, 1} admit no fixed vectors for either generic
family.  These return canned zero reports without consulting either route.

All rational arithmetic is exact (fractions.Fraction); floors of negative
arguments are mathematical floors (toward -infinity), and negative powers
of q are kept as exact rationals until the final integrality assertion.
That reading is what makes the n=1 evaluation collapse to 0 identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from .chartab import (
    FAMILY_NONGENERIC,
    FAMILY_TYPE_I,
    FAMILY_TYPE_II,
    SigmaFamily,
    dim_fixed_family,
)
from .cosets import enumerate_supp
from .errors import DisagreementError, NonIntegralResult, NotPolynomial

ORIGIN_K = "K"
ORIGIN_PARAMODULAR = "paramodular"
_ORIGINS = (ORIGIN_K, ORIGIN_PARAMODULAR)

_MODES = ("sum", "formula", "both")

# Formula-route coefficient c_n(q), keyed by n mod 4.
_C_POLYS = {
    0: lambda q: q * q + 36 * q + 71,
    1: lambda q: 4 * q * q + 50 * q + 72,
    2: lambda q: 11 * q + 61,
    3: lambda q: 22 * q + 68,
}

# Corollary constants (typeI families chi5 at q=2, X4 at q=3), by n mod 4.
_COROLLARY_CONSTANTS = {
    2: {0: 219, 1: 260, 2: 155, 3: 184},
    3: {0: 112, 1: 147, 2: 65, 3: 85},
}

# Interpolation nodes for the degree check; the first seven fit the
# polynomial, the last two cross-validate it.
_FIT_NODES = (2, 3, 4, 5, 7, 8, 9)
_CHECK_NODES = (11, 13)


@dataclass(frozen=True)
class DimRequest:
    """One dimension query: field size, level, family, inducing origin."""

    q: int
    n: int
    sigma: SigmaFamily
    origin: str = ORIGIN_K

    def __post_init__(self) -> None:
        if not isinstance(self.q, int) or self.q < 2:
            raise ValueError(f"q must be an integer >= 2, got {self.q!r}")
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"level n must be an integer >= 0, got {self.n!r}")
        if self.origin not in _ORIGINS:
            raise ValueError(
                f"origin must be one of {_ORIGINS}, got {self.origin!r}"
            )


@dataclass(frozen=True)
class DimReport:
    """Result of a dimension query.

    ``total`` is the authoritative value for the requested mode;
    ``by_family`` lists (family, count, per_coset_dim, subtotal) rows of
    the sum route; ``formula_value`` is the closed-form evaluation; and
    ``agree`` records whether the two routes coincide.
    """

    total: int
    by_family: Tuple[Tuple[str, int, str, int], ...]
    formula_value: int
    agree: bool


def _floor_div(a: int, b: int) -> int:
    # Python's // is already the mathematical floor for integers.
    return a // b


def _as_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise NonIntegralResult(f"{what} evaluated to non-integer {x}")
    return int(x)


def _formula_value(q: int, n: int, kind: str) -> int:
    """Closed-form dimension for a generic family at level n >= 1."""
    c = Fraction(_C_POLYS[n % 4](q))
    m = _floor_div(n - 2, 4)
    qm = Fraction(q) ** m
    value = (
        (((q - 1) * c + 72) * qm - 72) / Fraction((q - 1) ** 2)
        - Fraction(18 * (n + 2), q - 1)
        - n * (n + 3)
    )
    if kind == FAMILY_TYPE_II:
        value += 2 * _floor_div(n - 1, 2)
    total = _as_int(value, f"closed formula at q={q}, n={n}, {kind}")
    if total < 0:
        raise NonIntegralResult(
            f"closed formula at q={q}, n={n}, {kind} gave negative {total}"
        )
    return total


def _sum_route(
    q: int, n: int, sigma: SigmaFamily
) -> Tuple[int, Tuple[Tuple[str, int, str, int], ...]]:
    rows: List[Tuple[str, int, str, int]] = []
    total = 0
    for fc in enumerate_supp(q, n):
        per = dim_fixed_family(fc.row, sigma, q)
        subtotal = fc.count * per
        rows.append((fc.family, fc.count, fc.per_coset_dim, subtotal))
        total += subtotal
    return total, tuple(rows)


def _zero_report() -> DimReport:
    return DimReport(total=0, by_family=(), formula_value=0, agree=True)


def dim_klingen(req: DimRequest, mode: str = "both") -> DimReport:
    """dim pi^{Kl(n)} for the requested family, via the requested route(s).

    Both routes are cheap closed forms, so both are always evaluated and
    recorded in the report; ``mode`` selects which value ``total`` reports
    ("sum" or "formula") and, for "both", makes any disagreement fatal.
    """
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")
    if req.origin == ORIGIN_PARAMODULAR:
        return _zero_report()
    if req.sigma.kind == FAMILY_NONGENERIC:
        return _zero_report()
    if req.n <= 1:
        return _zero_report()

    sum_total, by_family = _sum_route(req.q, req.n, req.sigma)
    formula_total = _formula_value(req.q, req.n, req.sigma.kind)
    agree = sum_total == formula_total
    if mode == "both" and not agree:
        raise DisagreementError(
            req.q, req.n, req.sigma.display_name(req.q), sum_total, formula_total
        )
    total = formula_total if mode == "formula" else sum_total
    return DimReport(
        total=total,
        by_family=by_family,
        formula_value=formula_total,
        agree=agree,
    )


def corollary_value(q: int, n: int) -> int:
    """The displayed piecewise evaluation for the typeI family at q in {2,3}.

    q=2: -(n+9)(n+12) + 2^{floor((n-2)/4)} * {219, 260, 155, 184};
    q=3: -(n+6)^2     + 3^{floor((n-2)/4)} * {112, 147,  65,  85},
    constants keyed by n mod 4.  Exact rational evaluation with the
    negative-floor reading, asserted integral.
    """
    if q not in _COROLLARY_CONSTANTS:
        raise ValueError(f"corollary constants are tabulated for q in (2, 3), got {q}")
    if n < 1:
        raise ValueError(f"corollary is stated for n >= 1, got {n}")
    const = _COROLLARY_CONSTANTS[q][n % 4]
    qm = Fraction(q) ** _floor_div(n - 2, 4)
    if q == 2:
        value = -(n + 9) * (n + 12) + qm * const
    else:
        value = -((n + 6) ** 2) + qm * const
    return _as_int(value, f"corollary at q={q}, n={n}")


def _interpolate(points: Sequence[Tuple[int, int]]) -> List[Fraction]:
    """Exact Lagrange interpolation; returns coefficients, low degree first."""
    size = len(points)
    coeffs = [Fraction(0)] * size
    for i, (xi, yi) in enumerate(points):
        # basis numerator prod_{j != i} (x - xj), built up coefficient-wise
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            denom *= xi - xj
            nxt = [Fraction(0)] * (len(basis) + 1)
            for k, coeff in enumerate(basis):
                nxt[k] -= coeff * xj
                nxt[k + 1] += coeff
            basis = nxt
        scale = Fraction(yi) / denom
        for k, coeff in enumerate(basis):
            coeffs[k] += coeff * scale
    return coeffs


def _poly_eval(coeffs: Sequence[Fraction], x: int) -> Fraction:
    acc = Fraction(0)
    for coeff in reversed(coeffs):
        acc = acc * x + coeff
    return acc


def _dim_at(q: int, n: int, kind: str) -> int:
    if n <= 1:
        return 0
    return _formula_value(q, n, kind)


def degree_in_q(n: int, sigma_kind: str) -> int:
    """Degree of dim pi^{Kl(n)} as a polynomial in q (fixed level n).

    Fits an exact polynomial through the formula values at seven field
    sizes, then cross-validates at two more; a mismatch means the values
    are not polynomial in q and raises NotPolynomial.  The zero polynomial
    reports degree 0.
    """
    if n < 0:
        raise ValueError(f"level n must be >= 0, got {n}")
    if sigma_kind not in (FAMILY_TYPE_I, FAMILY_TYPE_II):
        raise ValueError(
            f"sigma_kind must be {FAMILY_TYPE_I!r} or {FAMILY_TYPE_II!r}, "
            f"got {sigma_kind!r}"
        )
    points = [(q, _dim_at(q, n, sigma_kind)) for q in _FIT_NODES]
    coeffs = _interpolate(points)
    for q in _CHECK_NODES:
        predicted = _poly_eval(coeffs, q)
        actual = _dim_at(q, n, sigma_kind)
        if predicted != actual:
            raise NotPolynomial(
                f"degree-{len(coeffs) - 1} fit through q={_FIT_NODES} predicts "
                f"{predicted} at q={q}, but the formula gives {actual} (n={n})"
            )
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return len(coeffs) - 1
