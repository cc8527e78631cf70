"""GSp(4, F_q) as a finite matrix group: elements, closures, subgroups.

GSp(4) is taken with respect to the antidiagonal symplectic form

    J = [[ 0, 0, 0, 1],
         [ 0, 0, 1, 0],
         [ 0,-1, 0, 0],
         [-1, 0, 0, 0]],

so B(u, v) = u1 v4 + u2 v3 - u3 v2 - u4 v1, and g in GSp(4) means
t(g) J g = mu(g) J with mu(g) a unit (the similitude factor); det g = mu^2.

Matrices store their 16 entries as integer field-element encodings and do
arithmetic through per-field lookup tables, which keeps large closures cheap
and exact.  A numpy fast path accelerates closure over prime fields; the
generic table path is the source of truth and the two are cross-checked in
tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from . import ffield
from .errors import (
    ClosureTooLarge,
    GroupTooLarge,
    NotSimilitude,
    UnknownName,
)
from .ffield import FieldSpec, FqElem, field_for_q


# ---------------------------------------------------------------------------
# encoding-level arithmetic tables
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _tables(spec: FieldSpec):
    """(add, mul, neg, inv) lookup tables on element encodings."""
    elems = ffield.enumerate_field(spec)
    q = spec.q
    add = tuple(
        tuple((elems[i] + elems[j]).encoding() for j in range(q)) for i in range(q)
    )
    mul = tuple(
        tuple((elems[i] * elems[j]).encoding() for j in range(q)) for i in range(q)
    )
    neg = tuple((-elems[i]).encoding() for i in range(q))
    inv = tuple(
        0 if i == 0 else elems[i].inverse().encoding() for i in range(q)
    )
    return add, mul, neg, inv


def _enc(spec: FieldSpec, x) -> int:
    """Encoding of an entry given as int (scalar) or FqElem."""
    if isinstance(x, FqElem):
        if x.spec != spec:
            raise ValueError("entry from a different field")
        return x.encoding()
    return spec.scalar(x).encoding()


# ---------------------------------------------------------------------------
# 4x4 matrices over F_q
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Mat4:
    """A 4x4 matrix over a fixed F_q; entries are element encodings."""

    spec: FieldSpec
    e: tuple  # 16 ints, row-major

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows) -> "Mat4":
        flat = []
        for row in rows:
            for x in row:
                flat.append(_enc(spec, x))
        if len(flat) != 16:
            raise ValueError("need 4x4 entries")
        return cls(spec, tuple(flat))

    @classmethod
    def identity(cls, spec: FieldSpec) -> "Mat4":
        one = spec.one.encoding()
        e = [0] * 16
        for i in range(4):
            e[5 * i] = one
        return cls(spec, tuple(e))

    @classmethod
    def diag(cls, spec: FieldSpec, a, b, c, d) -> "Mat4":
        e = [0] * 16
        for i, x in enumerate((a, b, c, d)):
            e[5 * i] = _enc(spec, x)
        return cls(spec, tuple(e))

    # -- access --------------------------------------------------------------

    def entry(self, r: int, c: int) -> FqElem:
        return self.spec.from_encoding(self.e[4 * r + c])

    def rows_fq(self) -> list:
        return [[self.entry(r, c) for c in range(4)] for r in range(4)]

    def is_identity(self) -> bool:
        return self == Mat4.identity(self.spec)

    # -- arithmetic ------------------------------------------------------------

    def __mul__(self, other: "Mat4") -> "Mat4":
        if self.spec != other.spec:
            raise ValueError("mixed fields")
        add, mul, _, _ = _tables(self.spec)
        a, b = self.e, other.e
        out = []
        for r in range(0, 16, 4):
            a0, a1, a2, a3 = a[r], a[r + 1], a[r + 2], a[r + 3]
            for c in range(4):
                s = mul[a0][b[c]]
                s = add[s][mul[a1][b[4 + c]]]
                s = add[s][mul[a2][b[8 + c]]]
                s = add[s][mul[a3][b[12 + c]]]
                out.append(s)
        return Mat4(self.spec, tuple(out))

    def transpose(self) -> "Mat4":
        e = self.e
        return Mat4(
            self.spec,
            tuple(e[4 * c + r] for r in range(4) for c in range(4)),
        )

    def scale(self, x) -> "Mat4":
        _, mul, _, _ = _tables(self.spec)
        k = _enc(self.spec, x)
        return Mat4(self.spec, tuple(mul[k][v] for v in self.e))

    def det(self) -> FqElem:
        add, mul, neg, inv = _tables(self.spec)
        a = [list(self.e[r : r + 4]) for r in range(0, 16, 4)]
        d = self.spec.one.encoding()
        for col in range(4):
            piv = None
            for r in range(col, 4):
                if a[r][col] != 0:
                    piv = r
                    break
            if piv is None:
                return self.spec.zero
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                d = neg[d]
            d = mul[d][a[col][col]]
            s = inv[a[col][col]]
            for r in range(col + 1, 4):
                f = mul[a[r][col]][s]
                if f:
                    nf = neg[f]
                    for j in range(col, 4):
                        a[r][j] = add[a[r][j]][mul[nf][a[col][j]]]
        return self.spec.from_encoding(d)

    def inverse(self) -> "Mat4":
        add, mul, neg, inv = _tables(self.spec)
        a = [list(self.e[r : r + 4]) for r in range(0, 16, 4)]
        one = self.spec.one.encoding()
        b = [[one if i == j else 0 for j in range(4)] for i in range(4)]
        for col in range(4):
            piv = None
            for r in range(col, 4):
                if a[r][col] != 0:
                    piv = r
                    break
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                b[col], b[piv] = b[piv], b[col]
            s = inv[a[col][col]]
            for j in range(4):
                a[col][j] = mul[s][a[col][j]]
                b[col][j] = mul[s][b[col][j]]
            for r in range(4):
                if r != col and a[r][col]:
                    f = neg[a[r][col]]
                    for j in range(4):
                        a[r][j] = add[a[r][j]][mul[f][a[col][j]]]
                        b[r][j] = add[b[r][j]][mul[f][b[col][j]]]
        return Mat4(self.spec, tuple(b[r][c] for r in range(4) for c in range(4)))

    def __repr__(self):
        rows = [" ".join(str(self.e[4 * r + c]) for c in range(4)) for r in range(4)]
        return f"Mat4({self.spec}; " + " | ".join(rows) + ")"


# ---------------------------------------------------------------------------
# the similitude group
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def j_matrix(spec: FieldSpec) -> Mat4:
    return Mat4.from_rows(
        spec,
        [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]],
    )


def similitude(m: Mat4) -> Optional[FqElem]:
    """mu with t(m) J m = mu J, or None if m is not a similitude."""
    spec = m.spec
    a = m.transpose() * j_matrix(spec) * m
    mu = a.e[3]  # position (1,4) of J carries coefficient +1
    if mu == 0:
        return None
    if a != j_matrix(spec).scale(spec.from_encoding(mu)):
        return None
    return spec.from_encoding(mu)


@dataclass(frozen=True, slots=True)
class GSpElem:
    """An element of GSp(4, F_q) with its similitude factor."""

    mat: Mat4
    mu: FqElem

    @property
    def spec(self) -> FieldSpec:
        return self.mat.spec

    def __mul__(self, other: "GSpElem") -> "GSpElem":
        return GSpElem(self.mat * other.mat, self.mu * other.mu)

    def inverse(self) -> "GSpElem":
        # from t(g) J g = mu J:  g^{-1} = mu^{-1} J^{-1} t(g) J, J^{-1} = -J
        spec = self.spec
        j = j_matrix(spec)
        inv_mat = (j * self.mat.transpose() * j).scale(-self.mu.inverse())
        return GSpElem(inv_mat, self.mu.inverse())

    def conjugate(self, h: "GSpElem") -> "GSpElem":
        """h g h^{-1}."""
        return h * self * h.inverse()

    def key(self) -> tuple:
        return self.mat.e

    def __repr__(self):
        return f"GSp({self.mat.e}, mu={self.mu.encoding()})"


def gsp_elem(m: Mat4) -> GSpElem:
    """Validate m in GSp(4) and attach its similitude factor."""
    mu = similitude(m)
    if mu is None:
        raise NotSimilitude(f"not a similitude matrix: {m}")
    if m.det() != mu * mu:
        raise NotSimilitude("determinant != similitude^2")
    return GSpElem(m, mu)


def group_mul(a: GSpElem, b: GSpElem) -> GSpElem:
    return a * b


def group_inv(a: GSpElem) -> GSpElem:
    return a.inverse()


def gsp4_order(q: int) -> int:
    return (q - 1) * q**4 * (q**2 - 1) * (q**4 - 1)


def sp4_order(q: int) -> int:
    return q**4 * (q**2 - 1) * (q**4 - 1)


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    """A concrete subgroup: sorted element tuple plus optional generators."""

    spec: FieldSpec
    elements: tuple  # GSpElem, sorted by matrix key
    generators: tuple = ()
    name: Optional[str] = None
    _members: frozenset = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_members", frozenset(g.key() for g in self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        key = g.key() if isinstance(g, GSpElem) else tuple(g.e)
        return key in self._members

    def __iter__(self):
        return iter(self.elements)

    def is_subset_of(self, other: "Subgroup") -> bool:
        return self._members <= other._members

    def same_elements(self, other: "Subgroup") -> bool:
        return self._members == other._members

    def __repr__(self):
        label = self.name or "subgroup"
        return f"<{label} of GSp(4,{self.spec.q}), order {self.order}>"


def _sorted_elements(elems: Iterable[GSpElem]) -> tuple:
    return tuple(sorted(elems, key=lambda g: g.key()))


def make_subgroup(elems: Iterable[GSpElem], generators=(), name=None) -> Subgroup:
    elems = list(elems)
    if not elems:
        raise ValueError("empty subgroup")
    return Subgroup(
        spec=elems[0].spec,
        elements=_sorted_elements(elems),
        generators=tuple(generators),
        name=name,
    )


CLOSURE_BOUND = 10**6


def subgroup_closure(gens, bound: int = CLOSURE_BOUND, name=None) -> Subgroup:
    """Closure of GSpElem generators under multiplication (BFS from identity).

    Raises ClosureTooLarge when more than ``bound`` elements appear.  Over
    prime fields a numpy fast path is used; the generic table path handles
    extensions and is the reference implementation.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    spec = gens[0].spec
    if spec.f == 1:
        elems = _closure_numpy([g.mat for g in gens], spec, bound)
    else:
        elems = _closure_generic([g.mat for g in gens], spec, bound)
    return make_subgroup((gsp_elem(m) for m in elems), generators=gens, name=name)


def _closure_generic(gen_mats, spec, bound) -> list:
    ident = Mat4.identity(spec)
    known = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for m in frontier:
            for g in gen_mats:
                prod = m * g
                if prod not in known:
                    known.add(prod)
                    new.append(prod)
                    if len(known) > bound:
                        raise ClosureTooLarge(f"closure exceeded {bound}")
        frontier = new
    return list(known)


def _closure_numpy(gen_mats, spec, bound) -> list:
    import numpy as np

    p = spec.p
    gens = np.array(
        [np.array(m.e, dtype=np.int64).reshape(4, 4) for m in gen_mats]
    )
    ident = np.eye(4, dtype=np.int64)
    known = {ident.tobytes()}
    collected = [ident]
    frontier = ident[None, :, :]
    while frontier.shape[0]:
        prods = np.einsum("nij,gjk->ngik", frontier, gens) % p
        prods = prods.reshape(-1, 4, 4)
        fresh = []
        for m in prods:
            key = m.tobytes()
            if key not in known:
                known.add(key)
                fresh.append(m)
                if len(known) > bound:
                    raise ClosureTooLarge(f"closure exceeded {bound}")
        collected.extend(fresh)
        frontier = (
            np.stack(fresh) if fresh else np.empty((0, 4, 4), dtype=np.int64)
        )
    return [
        Mat4(spec, tuple(int(x) for x in m.reshape(16)))
        for m in collected
    ]


# ---------------------------------------------------------------------------
# conjugacy classes
# ---------------------------------------------------------------------------

CONJUGACY_BOUND = 10**5


@dataclass(frozen=True)
class ConjClass:
    rep: GSpElem
    elements: tuple  # sorted

    @property
    def size(self) -> int:
        return len(self.elements)

    def __contains__(self, g: GSpElem) -> bool:
        return g.key() in self._keys

    def __post_init__(self):
        object.__setattr__(self, "_keys", frozenset(g.key() for g in self.elements))

    def __repr__(self):
        return f"<class of size {self.size}, rep {self.rep.key()}>"


def conjugacy_classes(group: Subgroup, bound: int = CONJUGACY_BOUND) -> list:
    """All conjugacy classes, reps chosen minimal in the canonical order."""
    if group.order > bound:
        raise GroupTooLarge(f"|G| = {group.order} exceeds {bound}")
    gens = list(group.generators) or list(group.elements)
    gen_pairs = [(g, g.inverse()) for g in gens]
    seen = set()
    classes = []
    for e in group.elements:
        if e.key() in seen:
            continue
        orbit = {e.key(): e}
        frontier = [e]
        while frontier:
            new = []
            for x in frontier:
                for g, gi in gen_pairs:
                    y = g * x * gi
                    if y.key() not in orbit:
                        orbit[y.key()] = y
                        new.append(y)
            frontier = new
        seen.update(orbit)
        classes.append(ConjClass(rep=e, elements=_sorted_elements(orbit.values())))
    return classes


# ---------------------------------------------------------------------------
# root subgroups, Weyl group, Bruhat enumeration
# ---------------------------------------------------------------------------

def _root_mat(spec: FieldSpec, positions, t: FqElem) -> Mat4:
    """I + t * sum of signed elementary matrices; positions = ((r,c,sign),...)."""
    rows = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    m = Mat4.from_rows(spec, rows)
    e = list(m.e)
    for (r, c, sign) in positions:
        e[4 * r + c] = (t if sign > 0 else -t).encoding()
    return Mat4(spec, tuple(e))


# positive roots of Sp(4) in this realization, short to long:
#   a1 (short):        I + t(E12 - E34)
#   a2 (long):         I + t E23
#   a1+a2 (short):     I + t(E13 + E24)
#   2a1+a2 (long):     I + t E14
POS_ROOT_POSITIONS = (
    ((0, 1, +1), (2, 3, -1)),
    ((1, 2, +1),),
    ((0, 2, +1), (1, 3, +1)),
    ((0, 3, +1),),
)
NEG_ROOT_POSITIONS = (
    ((1, 0, +1), (3, 2, -1)),
    ((2, 1, +1),),
    ((2, 0, +1), (3, 1, +1)),
    ((3, 0, +1),),
)


def pos_root_elem(spec: FieldSpec, idx: int, t: FqElem) -> Mat4:
    return _root_mat(spec, POS_ROOT_POSITIONS[idx], t)


def neg_root_elem(spec: FieldSpec, idx: int, t: FqElem) -> Mat4:
    return _root_mat(spec, NEG_ROOT_POSITIONS[idx], t)


@lru_cache(maxsize=None)
def weyl_reps(spec: FieldSpec) -> tuple:
    """The eight Weyl-element representatives as matrices (fixed word order)."""
    s1 = Mat4.from_rows(
        spec, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    )
    s2 = Mat4.from_rows(
        spec, [[1, 0, 0, 0], [0, 0, 1, 0], [0, -1, 0, 0], [0, 0, 0, 1]]
    )
    ident = Mat4.identity(spec)
    words = [(), (0,), (1,), (0, 1), (1, 0), (0, 1, 0), (1, 0, 1), (0, 1, 0, 1)]
    gens = (s1, s2)
    out = []
    for word in words:
        m = ident
        for k in word:
            m = m * gens[k]
        out.append(m)
    return tuple(out)


def _is_lower_unipotent_conj(m: Mat4) -> bool:
    """Whether m is unipotent lower triangular (used for U_w membership)."""
    one = m.spec.one.encoding()
    for r in range(4):
        if m.e[4 * r + r] != one:
            return False
        for c in range(r + 1, 4):
            if m.e[4 * r + c] != 0:
                return False
    return True


@lru_cache(maxsize=None)
def _uw_root_indices(spec: FieldSpec) -> tuple:
    """For each Weyl rep w: indices of positive roots a with w(a) < 0."""
    out = []
    one = spec.one
    for w in weyl_reps(spec):
        w_inv = w.inverse()
        idxs = []
        for i in range(4):
            conj = w * pos_root_elem(spec, i, one) * w_inv
            if _is_lower_unipotent_conj(conj):
                idxs.append(i)
        out.append(tuple(idxs))
    return tuple(out)


def _unipotent_products(spec: FieldSpec, root_idxs) -> Iterator[Mat4]:
    """All products prod_i X_{root_idxs[i]}(t_i), coefficients in lex order."""
    elems = ffield.enumerate_field(spec)
    ident = Mat4.identity(spec)

    def rec(i: int, acc: Mat4):
        if i == len(root_idxs):
            yield acc
            return
        for t in elems:
            yield from rec(i + 1, acc * pos_root_elem(spec, root_idxs[i], t))

    yield from rec(0, ident)


def sp4_stream(spec: FieldSpec) -> Iterator[Mat4]:
    """Every element of Sp(4, F_q) exactly once, via the Bruhat decomposition
    G = union over w of U T w U_w (each factorization unique)."""
    units = ffield.units(spec)
    wreps = weyl_reps(spec)
    uw_idx = _uw_root_indices(spec)
    all_roots = (0, 1, 2, 3)
    for wi, w in enumerate(wreps):
        for a in units:
            for b in units:
                t = Mat4.diag(spec, a, b, b.inverse(), a.inverse())
                tw = t * w
                for u in _unipotent_products(spec, all_roots):
                    base = u * tw
                    for u2 in _unipotent_products(spec, uw_idx[wi]):
                        yield base * u2


def gsp4_stream(spec: FieldSpec) -> Iterator[GSpElem]:
    """Every element of GSp(4, F_q) exactly once: similitude cosets of Sp."""
    for mu in ffield.units(spec):
        d = Mat4.diag(spec, mu, mu, 1, 1)
        for s in sp4_stream(spec):
            m = d * s
            yield GSpElem(m, mu)


@lru_cache(maxsize=None)
def _primitive_unit(spec: FieldSpec) -> FqElem:
    q = spec.q
    for x in ffield.units(spec):
        order = 1
        y = x
        while not y.is_one():
            y = y * x
            order += 1
        if order == q - 1:
            return x
    raise RuntimeError("unreachable: F_q^x is cyclic")


def gsp4_generators(spec: FieldSpec) -> list:
    """A small generating set: simple +/- root groups over an F_p-basis,
    plus a similitude torus generator."""
    basis = [spec.from_encoding(spec.p**i) for i in range(spec.f)]
    mats = []
    for b in basis:
        mats.append(pos_root_elem(spec, 0, b))
        mats.append(pos_root_elem(spec, 1, b))
        mats.append(neg_root_elem(spec, 0, b))
        mats.append(neg_root_elem(spec, 1, b))
    c = _primitive_unit(spec)
    mats.append(Mat4.diag(spec, c, c, 1, 1))
    mats.append(Mat4.diag(spec, c, 1, 1, c.inverse()))
    return [gsp_elem(m) for m in mats]


def enumerate_gsp4(q: int, stream: bool = False):
    """The full group GSp(4, F_q).

    Materialized as a Subgroup for q <= 3; for q in {4, 5} only the
    streaming form is available (pass stream=True to get an iterator that
    yields every element exactly once without materializing).  Larger q is
    refused.
    """
    spec = field_for_q(q)
    if stream:
        if q > 5:
            raise GroupTooLarge(f"|GSp(4,{q})| = {gsp4_order(q)}: beyond streaming scope")
        return gsp4_stream(spec)
    if q > 3:
        raise GroupTooLarge(
            f"|GSp(4,{q})| = {gsp4_order(q)} cannot be materialized; "
            "use stream=True for q in {4, 5}"
        )
    group = subgroup_closure(gsp4_generators(spec), name=f"GSp(4,{q})")
    if group.order != gsp4_order(q):
        raise RuntimeError(
            f"closure produced {group.order} elements, expected {gsp4_order(q)}"
        )
    return group


# ---------------------------------------------------------------------------
# named subgroups
# ---------------------------------------------------------------------------

def _gl2_iter(spec: FieldSpec):
    elems = ffield.enumerate_field(spec)
    for a in elems:
        for b in elems:
            for c in elems:
                for d in elems:
                    if not (a * d - b * c).is_zero():
                        yield a, b, c, d


def _sl2_iter(spec: FieldSpec):
    for a, b, c, d in _gl2_iter(spec):
        if (a * d - b * c).is_one():
            yield a, b, c, d


def _named_elements(name: str, spec: FieldSpec):
    """Yield the matrices for each supported subgroup name."""
    E = ffield.enumerate_field(spec)
    U = ffield.units(spec)
    mk = lambda rows: Mat4.from_rows(spec, rows)

    if name == "U_S":
        for x in E:
            for y in E:
                for z in E:
                    yield mk([[1, 0, 0, 0], [0, 1, 0, 0], [x, y, 1, 0], [z, x, 0, 1]])
    elif name == "U_K":
        for x in E:
            for y in E:
                for z in E:
                    yield mk([[1, 0, 0, 0], [x, 1, 0, 0], [y, 0, 1, 0], [z, y, -x, 1]])
    elif name == "M":
        for z in U:
            for a, b, c, d in _gl2_iter(spec):
                det = a * d - b * c
                yield mk(
                    [[z, 0, 0, 0], [0, z * a, z * b, 0], [0, z * c, z * d, 0], [0, 0, 0, z * det]]
                )
    elif name == "M1":
        for a, b, c, d in _sl2_iter(spec):
            yield mk([[1, 0, 0, 0], [0, a, b, 0], [0, c, d, 0], [0, 0, 0, 1]])
    elif name == "R_klingen":
        for x in E:
            for a, b, c, d in _sl2_iter(spec):
                yield mk([[1, 0, 0, 0], [0, a, b, 0], [0, c, d, 0], [x, 0, 0, 1]])
    elif name == "S":
        for a in U:
            for b in U:
                for x in E:
                    for z in E:
                        yield mk(
                            [[a, 0, 0, 0], [0, b, 0, 0], [x, 0, a, 0], [z, b * x / a, 0, b]]
                        )
    elif name == "A":
        for a in U:
            for d in U:
                for x in E:
                    for z in E:
                        yield mk(
                            [[a, 0, 0, 0], [x, a * d, 0, 0], [0, 0, a / d, 0], [z, 0, -x / d, a]]
                        )
    elif name == "B":
        for a in U:
            for b in U:
                for c in U:
                    for x in E:
                        yield mk(
                            [[a, 0, 0, 0], [0, b, 0, 0], [0, x, c / b, 0], [0, 0, 0, c / a]]
                        )
    elif name == "C":
        for a in U:
            for b in U:
                for c in U:
                    for x in E:
                        for y in E:
                            yield mk(
                                [[a, 0, 0, 0], [0, b, 0, 0], [0, x, c / b, 0], [y, 0, 0, c / a]]
                            )
    elif name == "D":
        for a in U:
            for b in U:
                for c in U:
                    for x in E:
                        for y in E:
                            yield mk(
                                [
                                    [a, a * y, 0, 0],
                                    [0, b, 0, 0],
                                    [0, x, c / b, -c * y / b],
                                    [0, 0, 0, c / a],
                                ]
                            )
    elif name == "R_last":
        for x in E:
            for y in E:
                for z in E:
                    yield mk(
                        [[1, 0, 0, 0], [x, 1, 0, 0], [y, x, 1, 0], [z, y - x * x, -x, 1]]
                    )
    elif name == "Row1":
        for a in U:
            for b in U:
                for d in U:
                    c = a * d / b
                    for u in E:
                        for w in E:
                            yield mk(
                                [
                                    [a, u, 0, 0],
                                    [0, b, 0, 0],
                                    [0, w, c, -u * d / b],
                                    [0, 0, 0, d],
                                ]
                            )
    elif name == "Row5":
        for a in U:
            for d in U:
                for y in E:
                    for z in E:
                        yield mk(
                            [[a, 0, 0, 0], [0, a * d, 0, 0], [0, y, a / d, 0], [z, 0, 0, a]]
                        )
    elif name == "Row6":
        for a in U:
            for d in U:
                for x in E:
                    for y in E:
                        yield mk(
                            [[a, 0, 0, 0], [x, a, 0, 0], [0, 0, d, 0], [y, 0, -x * d / a, d]]
                        )
    elif name == "Row7":
        for a in U:
            for d in U:
                for x in E:
                    for y in E:
                        yield mk(
                            [[a, 0, 0, 0], [0, d, 0, 0], [x, y, a, 0], [0, x * d / a, 0, d]]
                        )
    elif name == "Row8":
        for a in U:
            for v in E:
                for b in E:
                    for c in E:
                        yield mk(
                            [
                                [a, 0, 0, 0],
                                [v, a, 0, 0],
                                [b, v, a, 0],
                                [c, b - v * v / a, -v, a],
                            ]
                        )
    elif name == "Z_ray":
        # the long-root center: every support coset group contains a
        # conjugate of this line
        for z in E:
            yield mk([[1, 0, 0, z], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    else:
        raise UnknownName(name)


_ALIASES = {"Row2": "C", "Row3": "M", "Row4": "B"}

NAMED_SUBGROUP_NAMES = (
    "U_S", "U_K", "M", "M1", "S", "A", "B", "C", "D", "R_last",
    "Row1", "Row2", "Row3", "Row4", "Row5", "Row6", "Row7", "Row8",
    "R_klingen", "Z_ray",
)


def named_subgroup(name: str, q) -> Subgroup:
    """One of the fixed-group families by name, over F_q.

    Rows 2/3/4 coincide with C/M/B and are served as aliases.  Every element
    is validated as a similitude; element counts are tested against the
    closed orders.
    """
    if name not in NAMED_SUBGROUP_NAMES:
        raise UnknownName(f"{name!r}; known: {', '.join(NAMED_SUBGROUP_NAMES)}")
    spec = q if isinstance(q, FieldSpec) else field_for_q(q)
    base = _ALIASES.get(name, name)
    elems = [gsp_elem(m) for m in _named_elements(base, spec)]
    return make_subgroup(elems, name=name)


def named_subgroup_order(name: str, q: int) -> int:
    """Closed-form order of each named subgroup."""
    base = _ALIASES.get(name, name)
    gl2 = (q * q - 1) * (q * q - q)
    orders = {
        "U_S": q**3,
        "U_K": q**3,
        "M": (q - 1) * gl2,
        "M1": q * (q * q - 1),
        "R_klingen": q * q * (q * q - 1),
        "S": q * q * (q - 1) ** 2,
        "A": q * q * (q - 1) ** 2,
        "B": q * (q - 1) ** 3,
        "C": q * q * (q - 1) ** 3,
        "D": q * q * (q - 1) ** 3,
        "R_last": q**3,
        "Row1": q * q * (q - 1) ** 3,
        "Row5": q * q * (q - 1) ** 2,
        "Row6": q * q * (q - 1) ** 2,
        "Row7": q * q * (q - 1) ** 2,
        "Row8": q**3 * (q - 1),
        "Z_ray": q,
    }
    return orders[base]


def upper_unipotent(spec: FieldSpec) -> Subgroup:
    """The full upper unipotent subgroup U (order q^4)."""
    elems = [gsp_elem(m) for m in _unipotent_products(spec, (0, 1, 2, 3))]
    if len(set(elems)) != spec.q**4:
        raise RuntimeError("unipotent parameterization not injective")
    return make_subgroup(elems, name="U")
