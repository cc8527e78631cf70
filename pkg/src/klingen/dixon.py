"""Exact character tables of small matrix groups by eigenvector descent.

This is the independent oracle for the fixed-vector dimensions: it never
looks at the pinned value tables.  The method is the classical one of
Dixon and Schneider:

  1. compute the conjugacy classes and the class-multiplication
     coefficients a_{ij}^k = #{(x,y) in C_i x C_j : xy = z_k};
  2. the vectors omega = (omega_k) of central-character values are the
     common eigenvectors of the matrices (M_i)_{j,k} = a_{ij}^k; find them
     modulo a prime ell = 1 (mod exp G) with ell > 2 sqrt(|G|), where all
     eigenvalues are rational;
  3. recover each degree d from d^2 = |G| / sum_k omega_k omega_{k*} / h_k
     (mod ell) together with 0 < d <= sqrt(|G|);
  4. lift the modular values to exact cyclotomic integers through the
     root-of-unity multiplicities m_j = (1/e) sum_t chi(g^t) z^{-jt};
  5. verify sum d^2 = |G| and first orthogonality exactly.

Everything is exact: modular arithmetic with proven-unique lifts, then
cyclotomic integers over Q with Fraction coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List

from .errors import DixonBoundExceeded, MismatchReport, NonIntegralResult
from .groupfq import GSpElem, Mat4, Subgroup, conjugacy_classes, gsp_elem

ORDER_BOUND = 2 * 10**4
CLASS_BOUND = 64


# ---------------------------------------------------------------------------
# small number theory helpers
# ---------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> List[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _choose_prime(exponent: int, group_order: int, n_classes: int) -> int:
    """Smallest prime ell = 1 mod exponent with ell > 2 sqrt(|G|) and
    ell > #classes (the latter keeps small divisions well-defined)."""
    floor_bound = max(math.isqrt(4 * group_order) + 1, n_classes + 1, 3)
    ell = exponent + 1
    while ell < floor_bound or not _is_prime(ell):
        ell += exponent
    return ell


def _primitive_root_of_unity(ell: int, e: int) -> int:
    """An element of exact multiplicative order e modulo ell (e | ell-1)."""
    assert (ell - 1) % e == 0
    primes = _prime_factors(e)
    for g in range(2, ell):
        h = pow(g, (ell - 1) // e, ell)
        if all(pow(h, e // p, ell) != 1 for p in primes):
            return h
    raise RuntimeError("no primitive root found (not prime?)")


# ---------------------------------------------------------------------------
# cyclotomic integers (exact values)
# ---------------------------------------------------------------------------

def _poly_div_exact(num: List[int], den: List[int]) -> List[int]:
    """Exact division of integer polynomials (constant first)."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        assert c % den[dd] == 0
        f = c // den[dd]
        out[i - dd] = f
        for j, dj in enumerate(den):
            num[i - dd + j] -= f * dj
    assert all(x == 0 for x in num)
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Coefficients (constant first) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_div_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple:
    """x^m reduced mod Phi_n for m = 0 .. max(n, 2 deg - 1), as tuples."""
    phi = cyclotomic_polynomial(n)
    d = len(phi) - 1
    top = max(n, 2 * d - 1)
    table = []
    cur = [Fraction(0)] * d
    if d > 0:
        cur[0] = Fraction(1)
    for m in range(top + 1):
        table.append(tuple(cur))
        # multiply by x
        carry = cur[d - 1]
        nxt = [Fraction(0)] + cur[: d - 1]
        if carry:
            for i in range(d):
                nxt[i] -= carry * phi[i]
        cur = nxt
    return tuple(table)


class Cyclotomic:
    """An element of Q(zeta_n) in the power basis of Q[x]/Phi_n(x)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        self.order = order
        d = len(cyclotomic_polynomial(order)) - 1
        cs = tuple(Fraction(c) for c in coeffs)
        assert len(cs) == d
        self.coeffs = cs

    # constructors -----------------------------------------------------
    @staticmethod
    def zero(order: int) -> "Cyclotomic":
        d = len(cyclotomic_polynomial(order)) - 1
        return Cyclotomic(order, (0,) * d)

    @staticmethod
    def from_rational(order: int, value) -> "Cyclotomic":
        d = len(cyclotomic_polynomial(order)) - 1
        return Cyclotomic(order, (Fraction(value),) + (Fraction(0),) * (d - 1))

    @staticmethod
    def root_power(order: int, k: int) -> "Cyclotomic":
        """zeta_order^k."""
        table = _power_table(order)
        return Cyclotomic(order, table[k % order])

    # arithmetic -------------------------------------------------------
    def _check(self, other: "Cyclotomic"):
        assert self.order == other.order

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(self.order, other)
        self._check(other)
        return Cyclotomic(
            self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(self.order, other)
        self._check(other)
        return Cyclotomic(
            self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self):
        return Cyclotomic(self.order, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.order, tuple(a * other for a in self.coeffs))
        self._check(other)
        d = len(self.coeffs)
        conv = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        conv[i + j] += a * b
        table = _power_table(self.order)
        out = [Fraction(0)] * d
        for m, c in enumerate(conv):
            if c:
                base = table[m]
                for i in range(d):
                    if base[i]:
                        out[i] += c * base[i]
        return Cyclotomic(self.order, tuple(out))

    __rmul__ = __mul__
    __radd__ = __add__

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugation zeta -> zeta^{-1}."""
        table = _power_table(self.order)
        d = len(self.coeffs)
        out = [Fraction(0)] * d
        for k, c in enumerate(self.coeffs):
            if c:
                base = table[(self.order - k) % self.order]
                for i in range(d):
                    if base[i]:
                        out[i] += c * base[i]
        return Cyclotomic(self.order, tuple(out))

    # predicates -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.as_fraction() == Fraction(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise NonIntegralResult(f"{self!r} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def as_int(self) -> int:
        f = self.as_fraction()
        if f.denominator != 1:
            raise NonIntegralResult(f"{f} is not an integer")
        return f.numerator

    def __repr__(self):
        if self.is_rational():
            return f"Cyc({self.coeffs[0] if self.coeffs else 0})"
        return f"Cyc(order={self.order}, {list(self.coeffs)})"


# ---------------------------------------------------------------------------
# modular linear algebra
# ---------------------------------------------------------------------------

def _mat_apply(mat: List[List[int]], vec: List[int], m: int) -> List[int]:
    return [sum(row[k] * vec[k] for k in range(len(vec)) if vec[k]) % m for row in mat]


def _charpoly_mod(t: List[List[int]], m: int) -> List[int]:
    """Monic characteristic polynomial mod m (constant first) by the
    Faddeev-LeVerrier recursion; needs m prime and m > dim."""
    d = len(t)
    coeffs = [0] * (d + 1)
    coeffs[d] = 1
    work = [[0] * d for _ in range(d)]  # M_0 = 0
    c_prev = 1
    for k in range(1, d + 1):
        for i in range(d):
            work[i][i] = (work[i][i] + c_prev) % m
        nxt = [
            [
                sum(t[i][a] * work[a][j] for a in range(d)) % m
                for j in range(d)
            ]
            for i in range(d)
        ]
        work = nxt
        tr = sum(work[i][i] for i in range(d)) % m
        ck = (-tr * pow(k, m - 2, m)) % m
        coeffs[d - k] = ck
        c_prev = ck
    return coeffs


def _poly_roots_mod(coeffs: List[int], m: int) -> List[int]:
    roots = []
    for x in range(m):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % m
        if acc == 0:
            roots.append(x)
    return roots


def _kernel_mod(a: List[List[int]], m: int) -> List[List[int]]:
    """Basis of the kernel of a (rows x cols) mod m."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    work = [row[:] for row in a]
    pivots = []
    r = 0
    for c in range(cols):
        piv = None
        for rr in range(r, rows):
            if work[rr][c] % m:
                piv = rr
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = pow(work[r][c], m - 2, m)
        work[r] = [(x * inv) % m for x in work[r]]
        for rr in range(rows):
            if rr != r and work[rr][c] % m:
                f = work[rr][c]
                work[rr] = [(x - f * y) % m for x, y in zip(work[rr], work[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * cols
        v[fc] = 1
        for rr, pc in enumerate(pivots):
            v[pc] = (-work[rr][fc]) % m
        basis.append(v)
    return basis


def _rref_rows(vectors: List[List[int]], m: int):
    """Row-reduce; returns (rows, pivot_columns)."""
    work = [v[:] for v in vectors]
    cols = len(work[0])
    pivots = []
    r = 0
    for c in range(cols):
        piv = None
        for rr in range(r, len(work)):
            if work[rr][c] % m:
                piv = rr
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = pow(work[r][c], m - 2, m)
        work[r] = [(x * inv) % m for x in work[r]]
        for rr in range(len(work)):
            if rr != r and work[rr][c] % m:
                f = work[rr][c]
                work[rr] = [(x - f * y) % m for x, y in zip(work[rr], work[r])]
        pivots.append(c)
        r += 1
    return work[:r], pivots


# ---------------------------------------------------------------------------
# the character table object
# ---------------------------------------------------------------------------

@dataclass
class CharacterTable:
    """Exact character table: values[i][k] is chi_i on class k."""

    group: Subgroup
    classes: list
    class_of: Dict[tuple, int]
    exponent: int
    ell: int
    degrees: List[int]
    values: list  # List[List[Cyclotomic]]
    identity_class: int

    @property
    def n_chars(self) -> int:
        return len(self.degrees)

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def class_index(self, g: GSpElem) -> int:
        return self.class_of[g.key()]

    def value(self, i: int, k: int) -> Cyclotomic:
        return self.values[i][k]

    def value_at(self, i: int, g: GSpElem) -> Cyclotomic:
        return self.values[i][self.class_of[g.key()]]

    def fixed_dim(self, i: int, subgroup: Subgroup) -> int:
        """dim chi_i^R = (1/|R|) sum_{g in R} chi_i(g), exact."""
        total = Cyclotomic.zero(self.exponent)
        for g in subgroup.elements:
            total = total + self.values[i][self.class_of[g.key()]]
        frac = total.as_fraction() / subgroup.order
        if frac.denominator != 1 or frac < 0:
            raise NonIntegralResult(
                f"character sum {frac} is not a nonnegative integer"
            )
        return frac.numerator

    def inner(self, i: int, j: int) -> Fraction:
        """First-orthogonality inner product <chi_i, chi_j>, exact."""
        total = Cyclotomic.zero(self.exponent)
        for k, cls in enumerate(self.classes):
            total = total + cls.size * (self.values[i][k] * self.values[j][k].conjugate())
        return total.as_fraction() / self.group.order


# ---------------------------------------------------------------------------
# the solver
# ---------------------------------------------------------------------------

def _element_order(g: GSpElem, identity_key: tuple) -> int:
    n = 1
    x = g
    while x.key() != identity_key:
        x = x * g
        n += 1
    return n


def dixon_table(
    group: Subgroup,
    order_bound: int = ORDER_BOUND,
    class_bound: int = CLASS_BOUND,
) -> CharacterTable:
    """Compute the exact character table of a small group."""
    if group.order > order_bound:
        raise DixonBoundExceeded(
            f"group order {group.order} exceeds bound {order_bound}"
        )
    classes = conjugacy_classes(group)
    r = len(classes)
    if r > class_bound:
        raise DixonBoundExceeded(f"{r} classes exceed bound {class_bound}")

    spec = group.spec
    identity = gsp_elem(Mat4.identity(spec))
    id_key = identity.key()
    class_of: Dict[tuple, int] = {}
    for k, cls in enumerate(classes):
        for g in cls.elements:
            class_of[g.key()] = k
    id_class = class_of[id_key]
    sizes = [cls.size for cls in classes]
    reps = [cls.rep for cls in classes]

    orders = [_element_order(g, id_key) for g in reps]
    exponent = math.lcm(*orders)
    ell = _choose_prime(exponent, group.order, r)

    # inverse classes
    kstar = [class_of[g.inverse().key()] for g in reps]

    # class matrices (M_i)_{j,k} = a_{ij}^k
    mats = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i, cls in enumerate(classes):
        mi = mats[i]
        for x in cls.elements:
            xi = x.inverse()
            for k, z in enumerate(reps):
                j = class_of[(xi * z).key()]
                mi[j][k] += 1

    # simultaneous eigenvector descent mod ell
    full = [[1 if a == b else 0 for b in range(r)] for a in range(r)]
    spaces = [(full, list(range(r)))]  # (rref rows, pivot columns)
    for i in range(r):
        if i == id_class:
            continue
        if all(len(rows) == 1 for rows, _ in spaces):
            break
        mat_i = [[mats[i][j][k] % ell for k in range(r)] for j in range(r)]
        refined = []
        for rows, pivots in spaces:
            d = len(rows)
            if d == 1:
                refined.append((rows, pivots))
                continue
            images = [_mat_apply(mat_i, v, ell) for v in rows]
            # T[a][b]: coefficient of basis vector a in image of vector b
            t = [[images[b][pivots[a]] % ell for b in range(d)] for a in range(d)]
            cp = _charpoly_mod(t, ell)
            for lam in _poly_roots_mod(cp, ell):
                shifted = [
                    [(t[a][b] - (lam if a == b else 0)) % ell for b in range(d)]
                    for a in range(d)
                ]
                eigen_vecs = []
                for combo in _kernel_mod(shifted, ell):
                    vec = [0] * r
                    for a, ca in enumerate(combo):
                        if ca:
                            for pos in range(r):
                                vec[pos] = (vec[pos] + ca * rows[a][pos]) % ell
                    eigen_vecs.append(vec)
                if eigen_vecs:
                    refined.append(eigen_vecs)
        spaces = [
            _rref_rows(vecs, ell) if isinstance(vecs, list) else vecs
            for vecs in refined
        ]

    if not all(len(rows) == 1 for rows, _ in spaces) or len(spaces) != r:
        raise MismatchReport(
            [("eigenvector separation", r, sum(len(x[0]) for x in spaces))]
        )

    # omega vectors, normalized at the identity class
    omegas = []
    for rows, _ in spaces:
        v = rows[0]
        if v[id_class] % ell == 0:
            raise MismatchReport([("omega identity coordinate", "nonzero", 0)])
        inv = pow(v[id_class], ell - 2, ell)
        omegas.append([(x * inv) % ell for x in v])

    # degrees
    inv_sizes = [pow(s % ell, ell - 2, ell) for s in sizes]
    degrees = []
    max_d = math.isqrt(group.order)
    for om in omegas:
        s = sum(om[k] * om[kstar[k]] % ell * inv_sizes[k] for k in range(r)) % ell
        d2 = (group.order % ell) * pow(s, ell - 2, ell) % ell
        d = next((x for x in range(1, max_d + 1) if x * x % ell == d2), None)
        if d is None:
            raise MismatchReport([("degree recovery", f"square root of {d2}", None)])
        degrees.append(d)

    if sum(d * d for d in degrees) != group.order:
        raise MismatchReport(
            [("sum of squared degrees", group.order, sum(d * d for d in degrees))]
        )

    # modular character values chi(g_k) = d * omega_k / h_k
    cvals = [
        [(degrees[i] * om[k] % ell) * inv_sizes[k] % ell for k in range(r)]
        for i, om in enumerate(omegas)
    ]

    # power maps, shared across characters
    power_classes = []
    for k, g in enumerate(reps):
        e = orders[k]
        pows = [id_class]
        x = g
        for _ in range(e - 1):
            pows.append(class_of[x.key()])
            x = x * g
        power_classes.append(pows)

    w = _primitive_root_of_unity(ell, exponent)

    # exact lift through root-of-unity multiplicities
    values = []
    for i in range(len(omegas)):
        row = []
        for k in range(r):
            e = orders[k]
            z = pow(w, exponent // e, ell)
            zinv = pow(z, ell - 2, ell)
            inv_e = pow(e % ell, ell - 2, ell)
            val = Cyclotomic.zero(exponent)
            total_mult = 0
            for j in range(e):
                s = 0
                for t in range(e):
                    s += cvals[i][power_classes[k][t]] * pow(zinv, (j * t) % e, ell)
                m_j = (s % ell) * inv_e % ell
                if m_j > degrees[i]:
                    raise MismatchReport(
                        [("root-of-unity multiplicity", f"<= {degrees[i]}", m_j)]
                    )
                if m_j:
                    total_mult += m_j
                    val = val + m_j * Cyclotomic.root_power(exponent, j * (exponent // e))
            if total_mult != degrees[i]:
                raise MismatchReport(
                    [("total multiplicity", degrees[i], total_mult)]
                )
            row.append(val)
        values.append(row)

    table = CharacterTable(
        group=group,
        classes=classes,
        class_of=class_of,
        exponent=exponent,
        ell=ell,
        degrees=degrees,
        values=values,
        identity_class=id_class,
    )

    _verify_table(table)
    return table


def _verify_table(table: CharacterTable) -> None:
    failures = []
    for i, d in enumerate(table.degrees):
        v = table.values[i][table.identity_class]
        if not (v.is_rational() and v.as_fraction() == d):
            failures.append((f"degree of character {i}", d, v))
    if table.n_chars <= 32:
        for i in range(table.n_chars):
            for j in range(i, table.n_chars):
                got = table.inner(i, j)
                want = Fraction(1 if i == j else 0)
                if got != want:
                    failures.append((f"orthogonality <{i},{j}>", want, got))
    else:
        # larger tables: exact column orthogonality, which is O(r^2) products
        # instead of O(r^3): sum_i chi_i(g_k) conj(chi_i(g_l)) = delta_kl |C(g_k)|
        for k in range(table.n_classes):
            total = Cyclotomic.zero(table.exponent)
            for i in range(table.n_chars):
                total = total + table.values[i][k] * table.values[i][
                    table.identity_class
                ]
            want = Fraction(
                0 if k != table.identity_class
                else table.group.order // table.classes[k].size
            )
            if not (total.is_rational() and total.as_fraction() == want):
                failures.append((f"column orthogonality vs identity, class {k}", want, total))
            norm = Cyclotomic.zero(table.exponent)
            for i in range(table.n_chars):
                v = table.values[i][k]
                norm = norm + v * v.conjugate()
            centralizer = Fraction(table.group.order, table.classes[k].size)
            if not (norm.is_rational() and norm.as_fraction() == centralizer):
                failures.append((f"column norm, class {k}", centralizer, norm))
    if failures:
        raise MismatchReport(failures)


__all__ = [
    "CharacterTable",
    "Cyclotomic",
    "cyclotomic_polynomial",
    "dixon_table",
    "ORDER_BOUND",
    "CLASS_BOUND",
]
