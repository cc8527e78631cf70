"""Exact arithmetic in small finite fields F_q, q = p^f.

Elements are polynomials over F_p reduced modulo a fixed monic irreducible
of degree f.  The modulus is chosen deterministically: the irreducible monic
polynomial whose non-leading coefficient vector (c_{f-1}, ..., c_1, c_0) has
the least base-p integer encoding sum(c_i * p^i).  For f = 1 the modulus is
the polynomial x and plays no role.

Everything here is exact; there is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DivisionByZero, FieldTooLarge, MixedFields, NotPrime

FIELD_BOUND = 512


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p (tuples of ints, index = degree)
# ---------------------------------------------------------------------------

def _poly_trim(c: tuple[int, ...]) -> tuple[int, ...]:
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return c[:i]


def _poly_mul(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(tuple(out))


def _poly_divmod(
    a: tuple[int, ...], b: tuple[int, ...], p: int
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Quotient and remainder of a by b (b monic-normalizable, nonzero)."""
    b = _poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    rem = list(a)
    deg_b = len(b) - 1
    quo = [0] * max(0, len(a) - deg_b)
    for i in range(len(rem) - 1, deg_b - 1, -1):
        coef = rem[i] % p
        if coef:
            factor = (coef * inv_lead) % p
            quo[i - deg_b] = factor
            for j, bj in enumerate(b):
                rem[i - deg_b + j] = (rem[i - deg_b + j] - factor * bj) % p
    return _poly_trim(tuple(quo)), _poly_trim(tuple(rem))


def _poly_mod(a: tuple[int, ...], m: tuple[int, ...], p: int) -> tuple[int, ...]:
    return _poly_divmod(a, m, p)[1]


def _is_irreducible(m: tuple[int, ...], p: int) -> bool:
    """Exhaustive trial division by all monic polynomials of degree 1..deg/2."""
    deg = len(m) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        # all monic polynomials of degree d: p^d candidates
        for code in range(p**d):
            cand = []
            k = code
            for _ in range(d):
                cand.append(k % p)
                k //= p
            cand.append(1)
            if not _poly_divmod(m, tuple(cand), p)[1]:
                return False
    return True


# ---------------------------------------------------------------------------
# field spec and elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """An immutable description of F_q, q = p^f, with its fixed modulus.

    ``modulus`` holds the full coefficient tuple (c_0, ..., c_{f-1}, 1) of the
    monic irreducible used for reduction.
    """

    p: int
    f: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.f

    # -- constructors -------------------------------------------------------

    def elem(self, coeffs) -> "FqElem":
        """Element from a coefficient iterable (constant term first)."""
        c = [x % self.p for x in coeffs]
        if len(c) > self.f:
            c = list(_poly_mod(tuple(c), self.modulus, self.p))
        c += [0] * (self.f - len(c))
        return FqElem(self, tuple(c[: self.f]))

    def scalar(self, k: int) -> "FqElem":
        """The image of the integer k in the prime subfield."""
        return self.elem([k])

    def __call__(self, k: int) -> "FqElem":
        return self.scalar(k)

    @property
    def zero(self) -> "FqElem":
        return self.scalar(0)

    @property
    def one(self) -> "FqElem":
        return self.scalar(1)

    def from_encoding(self, k: int) -> "FqElem":
        """Inverse of FqElem.encoding(): base-p digits, constant term first.

        Returns interned instances, so matrix-group scans share the q
        element objects instead of allocating new ones.
        """
        if not 0 <= k < self.q:
            raise ValueError(f"encoding {k} out of range for q={self.q}")
        return _element_table(self)[k]

    def __repr__(self) -> str:  # compact, deterministic
        return f"F{self.q}"


@dataclass(frozen=True)
class FqElem:
    """An element of a fixed F_q: coefficient tuple of length f, reduced."""

    spec: FieldSpec
    coeffs: tuple[int, ...]

    # -- bookkeeping ---------------------------------------------------------

    def _check(self, other: "FqElem") -> None:
        if self.spec != other.spec:
            raise MixedFields(f"{self.spec} vs {other.spec}")

    def _coerce(self, other) -> "FqElem":
        if isinstance(other, FqElem):
            self._check(other)
            return other
        if isinstance(other, int):
            return self.spec.scalar(other)
        return NotImplemented

    def encoding(self) -> int:
        """Canonical integer encoding sum(c_i * p^i); 0 -> 0, 1 -> 1."""
        k = 0
        for c in reversed(self.coeffs):
            k = k * self.spec.p + c
        return k

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FqElem(
            self.spec,
            tuple((a + b) % self.spec.p for a, b in zip(self.coeffs, other.coeffs)),
        )

    __radd__ = __add__

    def __neg__(self):
        return FqElem(self.spec, tuple((-a) % self.spec.p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prod = _poly_mul(self.coeffs, other.coeffs, self.spec.p)
        red = _poly_mod(prod, self.spec.modulus, self.spec.p)
        return FqElem(self.spec, red + (0,) * (self.spec.f - len(red)))

    __rmul__ = __mul__

    def inverse(self) -> "FqElem":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return self ** (self.spec.q - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.spec.scalar(other) / self if isinstance(other, int) else NotImplemented

    def __pow__(self, e: int) -> "FqElem":
        if e < 0:
            return self.inverse() ** (-e)
        result = self.spec.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.spec.scalar(other)
        if isinstance(other, FqElem):
            return self.spec == other.spec and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.p, self.spec.f, self.coeffs))

    def __repr__(self):
        return f"{self.spec}:{self.encoding()}"


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def field_make(p: int, f: int = 1, bound: int = FIELD_BOUND) -> FieldSpec:
    """Construct F_{p^f} with the deterministic least modulus.

    Raises NotPrime if p is composite, FieldTooLarge if p^f exceeds bound.
    """
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if f < 1:
        raise ValueError("extension degree must be >= 1")
    if p**f > bound:
        raise FieldTooLarge(f"p^f = {p ** f} exceeds bound {bound}")
    if f == 1:
        return FieldSpec(p, 1, (0, 1))
    for code in range(p**f):
        # code's base-p digits, most significant digit = c_{f-1}
        digits = []
        k = code
        for _ in range(f):
            digits.append(k % p)
            k //= p
        # digits[0] = c_0 ... from least significant: code = sum c_i p^i
        cand = tuple(digits) + (1,)
        if _is_irreducible(cand, p):
            return FieldSpec(p, f, cand)
    raise RuntimeError("unreachable: an irreducible of every degree exists")


def field_for_q(q: int) -> FieldSpec:
    """F_q for a prime power q (factored automatically)."""
    p = None
    for cand in range(2, q + 1):
        if q % cand == 0:
            p = cand
            break
    if p is None or not _is_prime(p):
        raise NotPrime(f"{q} is not a prime power")
    f = 0
    m = q
    while m % p == 0:
        m //= p
        f += 1
    if m != 1:
        raise NotPrime(f"{q} is not a prime power")
    return field_make(p, f)


def fq_arith(a: FqElem, b: FqElem, op: str) -> FqElem:
    """Named dispatcher: op in {'add', 'sub', 'mul', 'div'}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


@lru_cache(maxsize=None)
def _element_table(spec: FieldSpec) -> tuple:
    out = []
    for k in range(spec.q):
        digits = []
        m = k
        for _ in range(spec.f):
            digits.append(m % spec.p)
            m //= spec.p
        out.append(FqElem(spec, tuple(digits)))
    return tuple(out)


def enumerate_field(spec: FieldSpec) -> list[FqElem]:
    """All q elements in the canonical encoding order (0 first, then 1)."""
    return list(_element_table(spec))


@lru_cache(maxsize=None)
def _squares(spec: FieldSpec) -> frozenset:
    return frozenset(x * x for x in enumerate_field(spec))


def is_square(a: FqElem) -> bool:
    """Whether a is a square in its field (0 counts as a square).

    In characteristic 2 squaring is a bijection, so everything is a square.
    """
    return a in _squares(a.spec)


def units(spec: FieldSpec) -> list[FqElem]:
    """The nonzero elements, in encoding order."""
    return [x for x in enumerate_field(spec) if not x.is_zero()]
