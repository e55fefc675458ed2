"""Exact linear algebra substrate.

Vectors, dense matrices, canonical echelon subspaces, quotient spaces and
tensor bookkeeping over an exact field: the rationals by default, or a
prime field F_p.  Everything is deterministic (leftmost-nonzero pivoting,
canonical reduced echelon bases) and exact; there is no floating point
anywhere.

Rational vectors are reduced through the fraction-free integer kernel in
`_backend`; prime-field vectors go through a small generic eliminator.
Sparse vectors are plain dicts {index: scalar} with no stored zeros.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from weakhopf._backend import insert_row, reduce_row

Q0 = Fraction(0)
Q1 = Fraction(1)


class DimensionMismatch(ValueError):
    pass


class NoSolution(Exception):
    """Raised by solve() when the system is certified inconsistent."""


# ---------------------------------------------------------------------------
# scalars

class Fp:
    """Residue modulo a prime p.  Division by zero raises, never wraps."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def __add__(self, other):
        return Fp(self.v + _fpval(other, self.p), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return Fp(self.v - _fpval(other, self.p), self.p)

    def __rsub__(self, other):
        return Fp(_fpval(other, self.p) - self.v, self.p)

    def __mul__(self, other):
        return Fp(self.v * _fpval(other, self.p), self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        w = _fpval(other, self.p) % self.p
        if w == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(self.v * pow(w, self.p - 2, self.p), self.p)

    def __rtruediv__(self, other):
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(_fpval(other, self.p) * pow(self.v, self.p - 2, self.p), self.p)

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return "Fp(%d, %d)" % (self.v, self.p)


def _fpval(x, p):
    if isinstance(x, Fp):
        return x.v
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    raise TypeError("cannot coerce %r into F_%d" % (x, p))


def scalar_zero(p=None):
    return Q0 if p is None else Fp(0, p)


def scalar_one(p=None):
    return Q1 if p is None else Fp(1, p)


def as_scalar(x, p=None):
    if p is None:
        return Fraction(x)
    if isinstance(x, Fp):
        if x.p != p:
            raise ValueError("mixed prime fields")
        return x
    return Fp(_fpval(x, p), p)


def parse_scalar(text, p=None):
    """Parse an exact scalar written as an integer or 'a/b'."""
    text = str(text).strip()
    if "/" in text:
        num, den = text.split("/")
        val = Fraction(int(num), int(den))
    else:
        val = Fraction(int(text))
    if p is None:
        return val
    if val.denominator % p == 0:
        raise ValueError("denominator of %s not invertible mod %d" % (text, p))
    return Fp(val.numerator * pow(val.denominator, p - 2, p), p)


def format_scalar(x):
    if isinstance(x, Fp):
        return str(x.v)
    return str(x)


# ---------------------------------------------------------------------------
# sparse vector helpers (dict {index: scalar}, zero-free)

def sparse(vec):
    """Dense sequence -> sparse dict."""
    return {i: c for i, c in enumerate(vec) if c != 0}


def dense(d, n, p=None):
    z = scalar_zero(p)
    out = [z] * n
    for i, c in d.items():
        out[i] = c
    return tuple(out)


def sadd_into(acc, d, c=1):
    """acc += c*d, dropping zeros."""
    if c == 0:
        return acc
    for i, x in d.items():
        v = acc.get(i, 0) + c * x
        if v == 0:
            acc.pop(i, None)
        else:
            acc[i] = v
    return acc


def sscale(d, c):
    if c == 0:
        return {}
    return {i: c * x for i, x in d.items()}


def svec(d):
    """Canonical hashable form of a sparse dict."""
    return tuple(sorted(d.items()))


def sfrom(sv):
    return dict(sv)


def tindex(i, j, dim2):
    return i * dim2 + j


def tsplit(k, dim2):
    return divmod(k, dim2)


def tensor_sparse(a, b, dim2):
    """Kronecker product of sparse vectors: index (i, j) -> i*dim2 + j."""
    out = {}
    for i, x in a.items():
        base = i * dim2
        for j, y in b.items():
            v = x * y
            if v != 0:
                out[base + j] = v
    return out


# ---------------------------------------------------------------------------
# rational echelon (integer-kernel backed)

def _int_row(vec, width):
    """Fractions -> primitive-denominator integer row of given width."""
    if isinstance(vec, dict):
        den = 1
        for c in vec.values():
            den = lcm(den, c.denominator)
        row = [0] * width
        for i, c in vec.items():
            row[i] = c.numerator * (den // c.denominator)
        return row
    den = 1
    for c in vec:
        den = lcm(den, c.denominator)
    row = [c.numerator * (den // c.denominator) for c in vec]
    row.extend([0] * (width - len(row)))
    return row


class Echelon:
    """Incremental reduced echelon basis over the rationals.

    Rows live in a pivot zone of `ncols` columns; `aux` extra columns ride
    along (augmented right-hand sides).  One hidden trailing slot tracks
    reduction scales so canonical residuals come back unscaled.
    """

    def __init__(self, ncols, aux=0):
        self.ncols = ncols
        self.aux = aux
        self.rows = []
        self.pivots = []

    @property
    def rank(self):
        return len(self.pivots)

    def _row(self, vec, scale_slot=0):
        row = _int_row(vec, self.ncols + self.aux)
        row.append(scale_slot)
        return row

    def insert(self, vec):
        """Insert a vector (sparse dict or dense Fractions). True if rank grew."""
        return insert_row(self.rows, self.pivots, self._row(vec), self.ncols) >= 0

    def insert_reduced(self, vec):
        """Insert; on dependence the returned reduced row keeps its aux zone."""
        row = self._row(vec)
        pos = insert_row(self.rows, self.pivots, row, self.ncols)
        return pos, row

    def reduce(self, vec):
        """Canonical residual of vec modulo the row space, as a sparse dict."""
        scale0 = 1
        vals = vec.values() if isinstance(vec, dict) else vec
        for c in vals:
            scale0 = lcm(scale0, c.denominator)
        row = self._row(vec, scale_slot=scale0)
        reduce_row(self.rows, self.pivots, row, self.ncols)
        s = row[-1]
        return {i: Fraction(row[i], s)
                for i in range(self.ncols + self.aux) if row[i]}

    def contains(self, vec):
        return not self.reduce(vec)

    def frac_rows(self):
        """Canonical RREF rows (leading coefficient 1) as sparse dicts."""
        out = []
        for r, p in zip(self.rows, self.pivots):
            lead = r[p]
            out.append({i: Fraction(x, lead)
                        for i, x in enumerate(r[:self.ncols + self.aux]) if x})
        return out


class EchelonExpr:
    """Echelon that expresses each dependent insert over the kept ones.

    insert() returns ('kept', k) for the k-th independent vector, or
    ('dep', coeffs) with vec == sum(coeffs[k] * kept_k).
    """

    def __init__(self, ncols):
        self.ncols = ncols
        self.rows = []
        self.pivots = []
        self.nkept = 0

    def insert(self, vec):
        width = self.ncols + self.nkept + 1
        row = _int_row(vec, self.ncols)
        den = 1
        vals = vec.values() if isinstance(vec, dict) else vec
        for c in vals:
            den = lcm(den, c.denominator)
        row.extend([0] * (self.nkept + 1))
        row[-1] = den
        for r in self.rows:
            r.append(0)
        pos = insert_row(self.rows, self.pivots, row, self.ncols)
        if pos >= 0:
            self.nkept += 1
            return ("kept", self.nkept - 1)
        # dependent: data zone zero, aux holds s*vec - sum(c_k * kept_k) = 0
        s = row[self.ncols + self.nkept]
        coeffs = {}
        for k in range(self.nkept):
            x = row[self.ncols + k]
            if x:
                coeffs[k] = Fraction(-x, s)
        for r in self.rows:
            r.pop()
        return ("dep", coeffs)


class FieldEchelon:
    """Dense reduced echelon over F_p (small systems only)."""

    def __init__(self, ncols, p, aux=0):
        self.ncols = ncols
        self.aux = aux
        self.p = p
        self.rows = []
        self.pivots = []

    @property
    def rank(self):
        return len(self.pivots)

    def _dense(self, vec):
        width = self.ncols + self.aux
        if isinstance(vec, dict):
            row = [Fp(0, self.p)] * width
            for i, c in vec.items():
                row[i] = as_scalar(c, self.p)
            return row
        row = [as_scalar(c, self.p) for c in vec]
        row.extend([Fp(0, self.p)] * (width - len(row)))
        return row

    def _reduce(self, row):
        for r, c in zip(self.rows, self.pivots):
            if row[c]:
                f = row[c]
                for j in range(len(row)):
                    row[j] = row[j] - f * r[j]
        return row

    def insert(self, vec):
        row = self._reduce(self._dense(vec))
        lead = next((j for j in range(self.ncols) if row[j]), -1)
        if lead < 0:
            return False
        inv = scalar_one(self.p) / row[lead]
        row = [inv * x for x in row]
        pos = sum(1 for c in self.pivots if c < lead)
        self.rows.insert(pos, row)
        self.pivots.insert(pos, lead)
        for i, r in enumerate(self.rows):
            if i != pos and r[lead]:
                f = r[lead]
                for j in range(len(r)):
                    r[j] = r[j] - f * row[j]
        return True

    def reduce(self, vec):
        row = self._reduce(self._dense(vec))
        return {i: c for i, c in enumerate(row) if c}

    def contains(self, vec):
        return not self.reduce(vec)

    def frac_rows(self):
        return [{i: c for i, c in enumerate(r) if c} for r in self.rows]


def make_echelon(ncols, p=None, aux=0):
    return Echelon(ncols, aux) if p is None else FieldEchelon(ncols, p, aux)


# ---------------------------------------------------------------------------
# dense matrices

@dataclass(frozen=True)
class Mat:
    rows: int
    cols: int
    entries: tuple
    p: int | None = None

    @staticmethod
    def from_rows(rows, p=None):
        rows = tuple(tuple(as_scalar(x, p) for x in r) for r in rows)
        ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch("ragged matrix")
        return Mat(len(rows), ncols, rows, p)

    @staticmethod
    def identity(n, p=None):
        one, zero = scalar_one(p), scalar_zero(p)
        return Mat(n, n, tuple(tuple(one if i == j else zero for j in range(n))
                               for i in range(n)), p)

    def apply(self, vec):
        if len(vec) != self.cols:
            raise DimensionMismatch("Mat.apply: expected %d entries" % self.cols)
        return tuple(sum((row[j] * vec[j] for j in range(self.cols)),
                         scalar_zero(self.p)) for row in self.entries)

    def mul(self, other):
        if self.cols != other.rows:
            raise DimensionMismatch("Mat.mul shape mismatch")
        t = other.transpose()
        return Mat(self.rows, other.cols,
                   tuple(tuple(sum((r[k] * c[k] for k in range(self.cols)),
                                   scalar_zero(self.p)) for c in t.entries)
                         for r in self.entries), self.p)

    def transpose(self):
        return Mat(self.cols, self.rows,
                   tuple(zip(*self.entries)) if self.entries else (), self.p)

    def rank(self):
        ech = make_echelon(self.cols, self.p)
        for r in self.entries:
            ech.insert(r)
        return ech.rank


def solve(a, b):
    """Exact solve of a x = b; zero at non-pivot coordinates (deterministic).

    Raises NoSolution when the system is inconsistent, DimensionMismatch on
    shape errors.
    """
    if len(b) != a.rows:
        raise DimensionMismatch("solve: rhs length %d != %d" % (len(b), a.rows))
    p = a.p
    ech = make_echelon(a.cols, p, aux=1)
    for row, rhs in zip(a.entries, b):
        aug = list(row) + [as_scalar(rhs, p)]
        if p is None:
            pos, red = ech.insert_reduced(aug)
            if pos < 0 and red[a.cols] != 0:
                raise NoSolution("inconsistent system")
        else:
            before = ech.rank
            ech.insert(aug)
            if ech.rank == before:
                res = ech.reduce(aug)
                if res:
                    raise NoSolution("inconsistent system")
    x = [scalar_zero(p)] * a.cols
    if p is None:
        for r, c in zip(ech.rows, ech.pivots):
            x[c] = Fraction(r[a.cols], r[c])
    else:
        for r, c in zip(ech.rows, ech.pivots):
            x[c] = r[a.cols] / r[c]
    return tuple(x)


def solve_sparse(equations, ncols, p=None):
    """Exact solve from (sparse lhs row, rhs scalar) pairs.

    Same canonical solution as solve(): zero at non-pivot coordinates.
    Raises NoSolution when inconsistent.
    """
    ech = make_echelon(ncols, p, aux=1)
    for row, rhs in equations:
        aug = dict(row)
        if rhs != 0:
            aug[ncols] = as_scalar(rhs, p)
        if p is None:
            pos, red = ech.insert_reduced(aug)
            if pos < 0 and red[ncols] != 0:
                raise NoSolution("inconsistent system")
        else:
            if not ech.insert(aug) and ech.reduce(aug):
                raise NoSolution("inconsistent system")
    x = [scalar_zero(p)] * ncols
    if p is None:
        for r, c in zip(ech.rows, ech.pivots):
            x[c] = Fraction(r[ncols], r[c])
    else:
        for r, c in zip(ech.rows, ech.pivots):
            x[c] = r[ncols] / r[c]
    return tuple(x)


def solution_space_dim(rows, ncols, p=None):
    """Dimension of the solution space of a homogeneous sparse system."""
    ech = make_echelon(ncols, p)
    for row in rows:
        ech.insert(row if isinstance(row, dict) else dict(row))
    return ncols - ech.rank


def kernel(a):
    """Exact null space of a, as a canonical echelon Subspace."""
    ech = make_echelon(a.cols, a.p)
    for r in a.entries:
        ech.insert(r)
    piv = set(ech.pivots)
    rows = ech.frac_rows()
    vecs = []
    for f in range(a.cols):
        if f in piv:
            continue
        v = {f: scalar_one(a.p)}
        for r, c in zip(rows, ech.pivots):
            x = r.get(f)
            if x:
                v[c] = -x
        vecs.append(v)
    return Subspace.from_vectors(a.cols, vecs, a.p)


# ---------------------------------------------------------------------------
# subspaces

@dataclass(frozen=True)
class Subspace:
    """Row space in canonical reduced echelon form.

    `basis` holds the RREF rows as sparse (index, coeff) tuples with leading
    coefficient 1; equality of subspaces is literal equality of the data.
    """

    ambient_dim: int
    pivots: tuple
    basis: tuple
    p: int | None = None

    @staticmethod
    def from_vectors(ambient_dim, vecs, p=None):
        ech = make_echelon(ambient_dim, p)
        for v in vecs:
            ech.insert(v)
        return Subspace(ambient_dim, tuple(ech.pivots),
                        tuple(svec(r) for r in ech.frac_rows()), p)

    @staticmethod
    def zero(ambient_dim, p=None):
        return Subspace(ambient_dim, (), (), p)

    @staticmethod
    def full(ambient_dim, p=None):
        one = scalar_one(p)
        return Subspace(ambient_dim, tuple(range(ambient_dim)),
                        tuple(((i, one),) for i in range(ambient_dim)), p)

    @property
    def dim(self):
        return len(self.pivots)

    def dense_basis(self):
        return tuple(dense(dict(r), self.ambient_dim, self.p) for r in self.basis)

    def _echelon(self):
        ech = make_echelon(self.ambient_dim, self.p)
        for r in self.basis:
            ech.insert(dict(r))
        return ech

    def reduce(self, vec):
        return self._echelon().reduce(vec)

    def contains(self, vec):
        return not self.reduce(vec)

    def contains_subspace(self, other):
        ech = self._echelon()
        return all(ech.contains(dict(r)) for r in other.basis)

    def coords(self, vec):
        """Coordinates of vec in the RREF basis, or None if not a member.

        RREF makes this a direct read-off at the pivot columns.
        """
        d = vec if isinstance(vec, dict) else sparse(vec)
        cs = [d.get(c, scalar_zero(self.p)) for c in self.pivots]
        chk = dict(d)
        for c, r in zip(cs, self.basis):
            sadd_into(chk, dict(r), -c)
        if chk:
            return None
        return tuple(cs)

    def member(self, coords):
        """Inverse of coords(): sparse ambient vector from basis coordinates."""
        out = {}
        for c, r in zip(coords, self.basis):
            sadd_into(out, dict(r), c)
        return out

    def sum_with(self, other):
        vecs = [dict(r) for r in self.basis] + [dict(r) for r in other.basis]
        return Subspace.from_vectors(self.ambient_dim, vecs, self.p)

    def intersect(self, other):
        """Subspace intersection via the kernel of the stacked coordinates."""
        rows1 = [dict(r) for r in self.basis]
        rows2 = [dict(r) for r in other.basis]
        n1, n2 = len(rows1), len(rows2)
        # columns: coefficients on basis1 then basis2; rows: ambient coords
        cols = []
        for r in rows1:
            cols.append(dense(r, self.ambient_dim, self.p))
        for r in rows2:
            cols.append(dense(sscale(r, -scalar_one(self.p)), self.ambient_dim, self.p))
        if not cols:
            return Subspace.zero(self.ambient_dim, self.p)
        m = Mat.from_rows(list(zip(*cols)), self.p)
        ker = kernel(m)
        vecs = []
        for kr in ker.basis:
            kd = dict(kr)
            v = {}
            for k in range(n1):
                sadd_into(v, rows1[k], kd.get(k, scalar_zero(self.p)))
            vecs.append(v)
        return Subspace.from_vectors(self.ambient_dim, vecs, self.p)


# ---------------------------------------------------------------------------
# quotient spaces

@dataclass(frozen=True)
class Quotient:
    """Ambient space modulo a relations subspace, with the canonical section.

    The representative basis sits at the non-pivot coordinates of the
    echelonized relations; project() reads the canonical coset
    representative off those coordinates.
    """

    ambient_dim: int
    relations: Subspace
    section_cols: tuple
    proj_cols: tuple  # per ambient coordinate: sparse quotient coords
    p: int | None = None

    @property
    def dim(self):
        return len(self.section_cols)

    def project(self, vec):
        d = vec if isinstance(vec, dict) else sparse(vec)
        out = {}
        for c, x in d.items():
            sadd_into(out, self.proj_cols[c], x)
        return out

    def section(self, coords):
        d = coords if isinstance(coords, dict) else sparse(coords)
        return {self.section_cols[i]: x for i, x in d.items()}

    def project_matrix(self):
        rows = [{} for _ in range(self.dim)]
        for c, col in enumerate(self.proj_cols):
            for i, x in col.items():
                rows[i][c] = x
        return Mat.from_rows([dense(r, self.ambient_dim, self.p) for r in rows], self.p)

    def representative_basis(self):
        one = scalar_one(self.p)
        return tuple(dense({c: one}, self.ambient_dim, self.p)
                     for c in self.section_cols)


def quotient(ambient_dim, relations):
    """Quotient of k^n by an echelonized relations subspace."""
    if relations.ambient_dim != ambient_dim:
        raise DimensionMismatch("relations live in the wrong ambient space")
    p = relations.p
    piv = set(relations.pivots)
    section = tuple(c for c in range(ambient_dim) if c not in piv)
    index = {c: i for i, c in enumerate(section)}
    proj = [None] * ambient_dim
    one = scalar_one(p)
    for c in section:
        proj[c] = {index[c]: one}
    for pc, row in zip(relations.pivots, relations.basis):
        # RREF row: e_p + sum over non-pivot columns; the class of e_p is
        # minus that tail
        proj[pc] = {index[j]: -x for j, x in row if j != pc}
    return Quotient(ambient_dim, relations, section, tuple(proj), p)


def quotient_from_projection(ambient_dim, pi_col, p=None):
    """Quotient of k^n by the kernel of an idempotent projection.

    `pi_col(c)` must return the sparse image of the c-th coordinate vector
    under a linear map whose kernel is the intended relations subspace.
    Produces exactly the canonical Quotient of `quotient()` without
    echelonizing the relations: a column c is a pivot of the relations
    precisely when its image depends on the images of later columns, so the
    canonical section is found by a right-to-left independence scan, and the
    RREF rows of the relations are read off the coset representatives.
    """
    if p is not None:
        return _quotient_from_projection_field(ambient_dim, pi_col, p)
    ech = EchelonExpr(ambient_dim)
    kept = []  # columns, in right-to-left discovery order
    exprs = [None] * ambient_dim
    for c in range(ambient_dim - 1, -1, -1):
        kind, data = ech.insert(pi_col(c))
        if kind == "kept":
            kept.append(c)
        else:
            exprs[c] = data
    section = tuple(sorted(kept))
    index = {c: i for i, c in enumerate(section)}
    remap = {k: index[c] for k, c in enumerate(kept)}
    proj = [None] * ambient_dim
    for i, c in enumerate(section):
        proj[c] = {i: Q1}
    rel_rows = []
    rel_pivots = []
    for c in range(ambient_dim):
        if exprs[c] is None:
            continue
        coords = {remap[k]: v for k, v in exprs[c].items()}
        proj[c] = coords
        row = {c: Q1}
        for i, v in coords.items():
            fcol = section[i]
            assert fcol > c, "canonical section violated"
            row[fcol] = -v
        rel_pivots.append(c)
        rel_rows.append(svec(row))
    relations = Subspace(ambient_dim, tuple(rel_pivots), tuple(rel_rows), p)
    return Quotient(ambient_dim, relations, section, tuple(proj), p)


def _quotient_from_projection_field(ambient_dim, pi_col, p):
    # prime-field twin of the rational path
    ech = FieldEchelon(ambient_dim, p)
    cols = [pi_col(c) for c in range(ambient_dim)]
    kept = []
    for c in range(ambient_dim - 1, -1, -1):
        if ech.insert(cols[c]):
            kept.append(c)
    section = tuple(sorted(kept))
    index = {c: i for i, c in enumerate(section)}
    mat = Mat.from_rows([dense(cols[c], ambient_dim, p) for c in section],
                        p).transpose()
    proj = [None] * ambient_dim
    rel_pivots = []
    rel_rows = []
    one = scalar_one(p)
    for c in range(ambient_dim):
        if c in index:
            proj[c] = {index[c]: one}
            continue
        co = solve(mat, dense(cols[c], ambient_dim, p))
        proj[c] = {k: x for k, x in enumerate(co) if x}
        row = {c: one}
        for k, x in proj[c].items():
            row[section[k]] = -x
        rel_pivots.append(c)
        rel_rows.append(svec(row))
    relations = Subspace(ambient_dim, tuple(rel_pivots), tuple(rel_rows), p)
    return Quotient(ambient_dim, relations, section, tuple(proj), p)
