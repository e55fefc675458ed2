"""Finite-dimensional unital associative algebras over an exact field.

An Algebra is a basis, a structure-constant table and a unit vector;
construction verifies associativity and the unit law on every basis tuple.
On top of that sit inclusions, conditional expectations, dual-bases
solvers, Kanzaki separability and the certification of symmetric Markov
extensions.

Linear maps between based spaces are stored as tuples of sparse rows:
``rows[i]`` is the image of the i-th basis vector as a sorted
``((index, coeff), ...)`` tuple.  Apply them with `apply_map`.

Frobenius coordinate systems are never unique: two systems for the same
inclusion differ by an invertible element d of the centralizer (the second
homomorphism is x -> E(dx), with dual bases transported by d^-1).  The
solvers here always return the canonical solution of `linalg.solve` (zero
at non-pivot coordinates), and every construction downstream is verified
identity by identity, so the choice never matters.
"""

from __future__ import annotations

from dataclasses import dataclass

from weakhopf import linalg as la
from weakhopf.checks import CheckList
from weakhopf.linalg import (Subspace, dense, sadd_into, scalar_one,
                             scalar_zero, sparse, svec, tindex)


class NotAssociative(ValueError):
    def __init__(self, i, j, k, lhs, rhs):
        self.witness = (i, j, k, lhs, rhs)
        super().__init__("(e%d e%d) e%d != e%d (e%d e%d)" % (i, j, k, i, j, k))


class BadUnit(ValueError):
    def __init__(self, i, side):
        self.witness = (i, side)
        super().__init__("unit fails on e%d (%s)" % (i, side))


class NotClosed(ValueError):
    pass


class NoDualBases(Exception):
    """The dual-bases system is infeasible: not Frobenius, or not depth 2
    when the solution was constrained to a centralizer."""

    def __init__(self, reason, within_dim=None):
        self.reason = reason
        self.within_dim = within_dim
        super().__init__(reason)


class NotKanzaki(Exception):
    """No symmetric separability element exists."""


# ---------------------------------------------------------------------------

def apply_map(rows, x):
    """Apply a sparse-rows linear map to a sparse vector."""
    out = {}
    for i, c in x.items():
        row = rows[i]
        for j, v in row:
            w = out.get(j, 0) + c * v
            if w == 0:
                out.pop(j, None)
            else:
                out[j] = w
    return out


def map_rows(images):
    """Normalize a list of images (sparse rows, dicts or dense) to svec rows."""
    out = []
    for im in images:
        if isinstance(im, dict):
            out.append(svec(im))
        elif isinstance(im, tuple) and all(
                isinstance(e, tuple) and len(e) == 2 and isinstance(e[0], int)
                for e in im):
            out.append(im)
        else:
            out.append(svec(sparse(im)))
    return tuple(out)


def compose_maps(first, second):
    """rows of (second o first)."""
    return tuple(svec(apply_map(second, dict(r))) for r in first)


def invert_rows(rows, n, p=None):
    """Inverse of a bijective sparse-rows endomorphism."""
    mat = la.Mat.from_rows([dense(dict(r), n, p) for r in rows], p)
    tr = mat.transpose()
    one, zero = scalar_one(p), scalar_zero(p)
    out = []
    for i in range(n):
        e = [zero] * n
        e[i] = one
        col = la.solve(tr, tuple(e))
        out.append(svec({j: col[j] for j in range(n) if col[j]}))
    return tuple(out)


def section_of_inclusion(incl):
    """Rows of a left inverse of the embedding, valid on its image."""
    img = embedded_image(incl)
    basis_in_small = []
    emb_mat = la.Mat.from_rows(
        [dense(dict(r), incl.big.dim, incl.big.p) for r in incl.embed],
        incl.big.p).transpose()
    for r in img.basis:
        co = la.solve(emb_mat, dense(dict(r), incl.big.dim, incl.big.p))
        basis_in_small.append({i: c for i, c in enumerate(co) if c})

    def unembed(x):
        co = img.coords(x)
        if co is None:
            raise NotClosed("element outside the embedded image")
        out = {}
        for c, b in zip(co, basis_in_small):
            sadd_into(out, b, c)
        return out

    return unembed


@dataclass(frozen=True)
class Algebra:
    dim: int
    table: tuple  # table[i][j]: sparse product e_i e_j
    unit: tuple  # dense coords
    labels: tuple | None = None
    p: int | None = None

    def mul(self, x, y):
        """Product of sparse vectors."""
        out = {}
        table = self.table
        for i, a in x.items():
            ti = table[i]
            for j, b in y.items():
                c = a * b
                if c == 0:
                    continue
                for k, v in ti[j]:
                    w = out.get(k, 0) + c * v
                    if w == 0:
                        out.pop(k, None)
                    else:
                        out[k] = w
        return out

    def mulm(self, *xs):
        acc = xs[0]
        for y in xs[1:]:
            acc = self.mul(acc, y)
        return acc

    def unit_sparse(self):
        return sparse(self.unit)

    def basis_vec(self, i):
        return {i: scalar_one(self.p)}

    def commutator(self, x, y):
        out = self.mul(x, y)
        for k, v in self.mul(y, x).items():
            w = out.get(k, 0) - v
            if w == 0:
                out.pop(k, None)
            else:
                out[k] = w
        return out

    def scalar_of(self, x):
        """If x is a multiple of the unit, return the multiplier, else None."""
        ud = self.unit_sparse()
        if not x:
            return scalar_zero(self.p)
        k, v = next(iter(x.items()))
        if ud.get(k) is None:
            return None
        c = v / ud[k]
        return c if x == la.sscale(ud, c) else None

    def lmul_rows(self, x):
        """Sparse rows of left multiplication by x."""
        return tuple(svec(self.mul(x, self.basis_vec(j))) for j in range(self.dim))

    def rmul_rows(self, x):
        return tuple(svec(self.mul(self.basis_vec(j), x)) for j in range(self.dim))


def make_algebra(structure, unit, labels=None, p=None):
    """Build an Algebra after verifying associativity and the unit law.

    `structure` is either a dim x dim nested sequence of dense product
    vectors or a table of sparse dicts.
    """
    dim = len(structure)
    table = []
    for i in range(dim):
        row = []
        for j in range(dim):
            cell = structure[i][j]
            d = cell if isinstance(cell, dict) else sparse(cell)
            row.append(svec(d))
        table.append(tuple(row))
    table = tuple(table)
    unit = tuple(la.as_scalar(c, p) for c in unit)
    alg = Algebra(dim, table, unit, tuple(labels) if labels else None, p)
    ud = alg.unit_sparse()
    for i in range(dim):
        ei = alg.basis_vec(i)
        if alg.mul(ud, ei) != ei:
            raise BadUnit(i, "left")
        if alg.mul(ei, ud) != ei:
            raise BadUnit(i, "right")
    # associativity on all basis triples, through the cached pair products
    prods = [[dict(table[i][j]) for j in range(dim)] for i in range(dim)]
    for i in range(dim):
        for j in range(dim):
            pij = prods[i][j]
            for k in range(dim):
                lhs = {}
                for l, c in pij.items():
                    sadd_into(lhs, prods[l][k], c)
                rhs = {}
                for m, c in prods[j][k].items():
                    sadd_into(rhs, prods[i][m], c)
                if lhs != rhs:
                    raise NotAssociative(i, j, k, lhs, rhs)
    return alg


def centralizer(big, sub):
    """{x in big : xs = sx for every s in the subspace}, as echelon rows."""
    rows = []
    for s in sub.basis:
        sd = dict(s)
        cols = [big.commutator(big.basis_vec(j), sd) for j in range(big.dim)]
        for k in range(big.dim):
            row = {j: cols[j][k] for j in range(big.dim) if k in cols[j]}
            if row:
                rows.append(dense(row, big.dim, big.p))
    if not rows:
        return Subspace.full(big.dim, big.p)
    return la.kernel(la.Mat.from_rows(rows, big.p))


def subalgebra(big, sub, name="subalgebra"):
    """Induced Algebra on an echelon subspace closed under the product.

    Returns (algebra, inject, express): inject maps subalgebra coords into
    the ambient, express goes back (raising NotClosed off the subspace).
    """
    n = sub.dim
    rows = [dict(r) for r in sub.basis]

    def express(x):
        co = sub.coords(x)
        if co is None:
            raise NotClosed("%s: element leaves the subspace" % name)
        return {i: c for i, c in enumerate(co) if c}

    table = []
    for i in range(n):
        trow = []
        for j in range(n):
            trow.append(express(big.mul(rows[i], rows[j])))
        table.append(trow)
    unit = dense(express(big.unit_sparse()), n, big.p)
    alg = make_algebra(table, unit, p=big.p)

    def inject(x):
        out = {}
        for i, c in x.items():
            sadd_into(out, rows[i], c)
        return out

    return alg, inject, express


# ---------------------------------------------------------------------------
# inclusions and conditional expectations

@dataclass(frozen=True)
class Inclusion:
    small: Algebra
    big: Algebra
    embed: tuple  # sparse rows, small -> big

    def emb(self, x):
        return apply_map(self.embed, x)


@dataclass(frozen=True)
class CondExpectation:
    incl: Inclusion
    rows: tuple  # sparse rows, big -> small coords

    def E(self, x):
        """E as a map landing back inside big (embedded)."""
        return self.incl.emb(apply_map(self.rows, x))

    def E_small(self, x):
        return apply_map(self.rows, x)


@dataclass(frozen=True)
class DualBases:
    xs: tuple  # sparse big elements
    ys: tuple
    lambda_inv: object  # scalar when strongly separable, else None


def make_inclusion(small, big, embed):
    embed = map_rows(embed)
    incl = Inclusion(small, big, embed)
    if incl.emb(small.unit_sparse()) != big.unit_sparse():
        raise ValueError("inclusion does not preserve the unit")
    for i in range(small.dim):
        for j in range(small.dim):
            lhs = incl.emb(small.mul(small.basis_vec(i), small.basis_vec(j)))
            rhs = big.mul(incl.emb(small.basis_vec(i)), incl.emb(small.basis_vec(j)))
            if lhs != rhs:
                raise ValueError("embedding not multiplicative at (%d, %d)" % (i, j))
    if la.Mat.from_rows([dense(dict(r), big.dim, big.p) for r in embed],
                        big.p).rank() != small.dim:
        raise ValueError("embedding not injective")
    return incl


def make_cond_expectation(incl, rows):
    rows = map_rows(rows)
    E = CondExpectation(incl, rows)
    small, big = incl.small, incl.big
    for i in range(small.dim):
        got = E.E_small(incl.emb(small.basis_vec(i)))
        if got != small.basis_vec(i):
            raise ValueError("E o embed != id at basis %d" % i)
    for a in range(small.dim):
        ea = incl.emb(small.basis_vec(a))
        for x in range(big.dim):
            ex = big.basis_vec(x)
            for b in range(small.dim):
                eb = incl.emb(small.basis_vec(b))
                lhs = E.E_small(big.mulm(ea, ex, eb))
                rhs = small.mulm(small.basis_vec(a), E.E_small(ex), small.basis_vec(b))
                if lhs != rhs:
                    raise ValueError("E not a bimodule map at (%d, %d, %d)" % (a, x, b))
    return E


def embedded_image(incl):
    return Subspace.from_vectors(
        incl.big.dim, [dict(r) for r in incl.embed], incl.big.p)


# ---------------------------------------------------------------------------
# dual bases, separability, symmetry

def find_dual_bases(E, within=None):
    """Solve E(m x_i) y_i = m = x_i E(y_i m) for a dual-bases tensor.

    The tensor lives in span(cands) (x) span(cands) where cands is the
    basis of `within` inside big, or the full basis of big.  The tensor is
    only unique modulo the balancing relations, so the solver first looks
    for a representative that also satisfies the symmetric product identity
    x_i y_i = y_i x_i in k1 (linear once the scalar is adjoined as an
    unknown), falling back to the plain system.  Raises NoDualBases when
    even that is infeasible.
    """
    big = E.incl.big
    p = big.p
    if within is None:
        cands = [big.basis_vec(i) for i in range(big.dim)]
    else:
        cands = [dict(r) for r in within.basis]
    n = len(cands)
    eqs = []
    for m in range(big.dim):
        em = big.basis_vec(m)
        lhs1 = [big.mul(E.E(big.mul(em, cands[a])), cands[b])
                for a in range(n) for b in range(n)]
        lhs2 = [big.mul(cands[a], E.E(big.mul(cands[b], em)))
                for a in range(n) for b in range(n)]
        for k in range(big.dim):
            tgt = em.get(k, scalar_zero(p))
            row1 = {ab: v[k] for ab, v in enumerate(lhs1) if k in v}
            row2 = {ab: v[k] for ab, v in enumerate(lhs2) if k in v}
            eqs.append((row1, tgt))
            eqs.append((row2, tgt))
    t = None
    if True:
        # adjoin lam at column n*n and ask for x_i y_i = lam 1 = y_i x_i
        aug = list(eqs)
        zero = scalar_zero(p)
        fwd = [dict() for _ in range(big.dim)]
        bwd = [dict() for _ in range(big.dim)]
        for a in range(n):
            for b in range(n):
                for k, v in big.mul(cands[a], cands[b]).items():
                    fwd[k][a * n + b] = fwd[k].get(a * n + b, zero) + v
                for k, v in big.mul(cands[b], cands[a]).items():
                    bwd[k][a * n + b] = bwd[k].get(a * n + b, zero) + v
        for k in range(big.dim):
            u = big.unit[k]
            r1 = dict(fwd[k])
            r2 = dict(bwd[k])
            if u != 0:
                r1[n * n] = -u
                r2[n * n] = -u
            aug.append((r1, zero))
            aug.append((r2, zero))
        try:
            sol = la.solve_sparse(aug, n * n + 1, p)
            if sol[n * n] != 0:
                t = sol[:n * n]
        except la.NoSolution:
            t = None
    if t is None:
        try:
            t = la.solve_sparse(eqs, n * n, p)
        except la.NoSolution:
            raise NoDualBases("dual-bases system infeasible",
                              within_dim=None if within is None else within.dim)
    xs, ys = [], []
    for a in range(n):
        y = {}
        for b in range(n):
            sadd_into(y, cands[b], t[a * n + b])
        if y:
            xs.append(dict(cands[a]))
            ys.append(y)
    db = DualBases(tuple(map(svec, xs)), tuple(map(svec, ys)), None)
    verify_dual_bases(E, db)  # re-verify Eq on the full basis before returning
    s = {}
    for x, y in zip(xs, ys):
        sadd_into(s, big.mul(x, y), 1)
    lam = big.scalar_of(s)
    return DualBases(db.xs, db.ys, lam)


def verify_dual_bases(E, db):
    big = E.incl.big
    xs = [dict(x) for x in db.xs]
    ys = [dict(y) for y in db.ys]
    for m in range(big.dim):
        em = big.basis_vec(m)
        acc1, acc2 = {}, {}
        for x, y in zip(xs, ys):
            sadd_into(acc1, big.mul(E.E(big.mul(em, x)), y), 1)
            sadd_into(acc2, big.mul(x, E.E(big.mul(y, em))), 1)
        if acc1 != em or acc2 != em:
            raise NoDualBases("dual bases fail re-verification at basis %d" % m)
    return True


def is_symmetric(E, U):
    """E(ux) = E(xu) on every basis pair; witness on failure."""
    big = E.incl.big
    for ui, u in enumerate(U.basis):
        ud = dict(u)
        for j in range(big.dim):
            ej = big.basis_vec(j)
            lhs = E.E_small(big.mul(ud, ej))
            rhs = E.E_small(big.mul(ej, ud))
            if lhs != rhs:
                return False, (ui, j, lhs, rhs)
    return True, None


def separability_element(A, symmetric=False, require_unique=False):
    """Solve for a separability element f in A (x) A.

    Casimir (a (x) 1) f = f (1 (x) a), mu(f) = 1, optionally flip-symmetric.
    Returns the sparse tensor on flat indices i*dim+j.  Raises NotKanzaki
    when infeasible, or when `require_unique` and the solution space is
    positive-dimensional after normalization.
    """
    n = A.dim
    p = A.p
    eqs = []
    hom_rows = []
    zero = scalar_zero(p)
    # Casimir: for each c and tensor coordinate (k, l),
    #   sum_a f_{a l} (e_c e_a)_k  -  sum_b f_{k b} (e_b e_c)_l  =  0
    lm = [[A.mul(A.basis_vec(c), A.basis_vec(a)) for a in range(n)] for c in range(n)]
    rm = [[A.mul(A.basis_vec(b), A.basis_vec(c)) for b in range(n)] for c in range(n)]
    for c in range(n):
        for k in range(n):
            for l in range(n):
                row = {}
                for a in range(n):
                    v = lm[c][a].get(k)
                    if v:
                        key = tindex(a, l, n)
                        row[key] = row.get(key, zero) + v
                for b in range(n):
                    v = rm[c][b].get(l)
                    if v:
                        key = tindex(k, b, n)
                        w = row.get(key, zero) - v
                        if w == 0:
                            row.pop(key, None)
                        else:
                            row[key] = w
                if row:
                    eqs.append((row, zero))
                    hom_rows.append(row)
    if symmetric:
        one = scalar_one(p)
        for i in range(n):
            for j in range(i + 1, n):
                row = {tindex(i, j, n): one, tindex(j, i, n): -one}
                eqs.append((row, zero))
                hom_rows.append(row)
    # normalization mu(f) = 1
    mu_rows = [dict() for _ in range(n)]
    for i in range(n):
        for j in range(n):
            prod = A.mul(A.basis_vec(i), A.basis_vec(j))
            for k, v in prod.items():
                key = tindex(i, j, n)
                mu_rows[k][key] = mu_rows[k].get(key, zero) + v
    for k in range(n):
        eqs.append((mu_rows[k], A.unit[k]))
        hom_rows.append(mu_rows[k])
    try:
        t = la.solve_sparse(eqs, n * n, p)
    except la.NoSolution:
        raise NotKanzaki("no %sseparability element" %
                         ("symmetric " if symmetric else ""))
    if require_unique:
        ker_dim = la.solution_space_dim(hom_rows, n * n, p)
        if ker_dim != 0:
            raise NotKanzaki("separability element not unique "
                             "(solution space dim %d)" % ker_dim)
    return {i: c for i, c in enumerate(t) if c}


def kanzaki_element(A):
    """The unique symmetric separability element of A, or NotKanzaki."""
    return separability_element(A, symmetric=True, require_unique=True)


def trace_dual_bases(A, trace):
    """Dual bases (a_i, b_i) of a trace functional: u = a_i t(b_i u).

    Returns None when the trace form is degenerate.
    """
    n = A.dim
    gram = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = A.mul(A.basis_vec(i), A.basis_vec(j))
            row.append(sum((v * trace[k] for k, v in prod.items()),
                           scalar_zero(A.p)))
        gram.append(row)
    g = la.Mat.from_rows(gram, A.p)
    if g.rank() != n:
        return None
    cols = []
    one = scalar_one(A.p)
    for i in range(n):
        e = [scalar_zero(A.p)] * n
        e[i] = one
        cols.append(la.solve(g, tuple(e)))
    a_s = tuple(svec(A.basis_vec(i)) for i in range(n))
    b_s = tuple(svec({j: cols[i][j] for j in range(n) if cols[i][j]})
                for i in range(n))
    return a_s, b_s


def trace_of(trace, x):
    zero = trace[0] - trace[0]
    acc = zero
    for i, c in x.items():
        acc = acc + c * trace[i]
    return acc


# ---------------------------------------------------------------------------
# Markov certification

@dataclass(frozen=True)
class MarkovCertificate:
    E: CondExpectation
    dual_bases: DualBases
    trace: tuple  # functional on small
    lambda_inv: object
    U: Subspace  # centralizer of the embedded small algebra
    symmetric: bool
    strongly_separable: bool
    symmetric_product: bool
    weakly_irreducible: bool
    kanzaki: dict | None  # symmetric separability element of U (flat tensor)
    trace_duals: tuple | None  # dual bases of T0 restricted to U
    checks: CheckList

    @property
    def incl(self):
        return self.E.incl

    def trace0(self):
        """T0 = T o E as a functional on big."""
        big = self.incl.big
        return tuple(trace_of(self.trace, self.E.E_small(big.basis_vec(j)))
                     for j in range(big.dim))


def certify_markov(incl, E, db, trace):
    """Verify every defining identity of a symmetric Markov extension.

    Flags are set only when the corresponding identity holds on a full
    basis; the CheckList records each with a witness on failure.
    """
    small, big = incl.small, incl.big
    p = big.p
    cl = CheckList("markov-certificate")
    verify_dual_bases(E, db)
    cl.add("dual_bases", "E(m x_i) y_i = m = x_i E(y_i m)", True)

    one_small = small.unit_sparse()
    cl.add("E_unital", "E(1) = 1", E.E_small(big.unit_sparse()) == one_small)

    xs = [dict(x) for x in db.xs]
    ys = [dict(y) for y in db.ys]
    xy = {}
    yx = {}
    for x, y in zip(xs, ys):
        sadd_into(xy, big.mul(x, y), 1)
        sadd_into(yx, big.mul(y, x), 1)
    lam_inv = big.scalar_of(xy)
    strongly = lam_inv is not None and lam_inv != 0
    cl.add("strongly_separable", "x_i y_i = lambda^-1 1",
           strongly, witness=str(xy))
    sym_prod = strongly and big.scalar_of(yx) == lam_inv
    cl.add("symmetric_product", "y_i x_i = lambda^-1 1 = x_i y_i",
           sym_prod, witness=str(yx))

    cl.add("trace_normalized", "T(1) = 1",
           trace_of(trace, one_small) == scalar_one(p))

    t0 = tuple(trace_of(trace, E.E_small(big.basis_vec(j)))
               for j in range(big.dim))
    is_trace = True
    wit = None
    for i in range(big.dim):
        for j in range(big.dim):
            ab = trace_of(t0, big.mul(big.basis_vec(i), big.basis_vec(j)))
            ba = trace_of(t0, big.mul(big.basis_vec(j), big.basis_vec(i)))
            if ab != ba:
                is_trace, wit = False, "(%d, %d)" % (i, j)
                break
        if not is_trace:
            break
    cl.add("T0_trace", "T0(ab) = T0(ba), T0 = T o E", is_trace, witness=wit)

    # E is (left) non-degenerate: x -> (E(x e_j))_j has full rank
    nd_rows = []
    for x in range(big.dim):
        row = []
        for j in range(big.dim):
            v = E.E_small(big.mul(big.basis_vec(x), big.basis_vec(j)))
            row.extend(dense(v, small.dim, p))
        nd_rows.append(row)
    cl.add("E_nondegenerate", "E(xM) = 0 => x = 0",
           la.Mat.from_rows(nd_rows, p).rank() == big.dim)

    U = centralizer(big, embedded_image(incl))
    sym, witness = is_symmetric(E, U)
    cl.add("symmetric", "E(ux) = E(xu) for u in C_M(N)", sym,
           witness=None if sym else str(witness[:2]))

    kanz = None
    try:
        U_alg, _, _ = subalgebra(big, U, "centralizer")
        kanz = kanzaki_element(U_alg)
        cl.add("U_kanzaki", "C_M(N) has a symmetric separability element", True)
    except (NotKanzaki, NotClosed) as exc:
        cl.add("U_kanzaki", "C_M(N) has a symmetric separability element",
               False, witness=str(exc))
        U_alg = None

    tdu = None
    if U_alg is not None:
        t0U = tuple(trace_of(t0, dict(r)) for r in U.basis)
        tdu = trace_dual_bases(U_alg, t0U)
        cl.add("T0_U_nondegenerate", "T0 restricted to C_M(N) non-degenerate",
               tdu is not None)
    else:
        cl.add("T0_U_nondegenerate", "T0 restricted to C_M(N) non-degenerate",
               False, witness="centralizer algebra unavailable")

    weakly = cl.get("U_kanzaki").passed and cl.get("T0_U_nondegenerate").passed
    return MarkovCertificate(
        E=E, dual_bases=db, trace=tuple(trace), lambda_inv=lam_inv, U=U,
        symmetric=sym, strongly_separable=strongly,
        symmetric_product=sym_prod, weakly_irreducible=weakly,
        kanzaki=kanz, trace_duals=tdu, checks=cl)


def relative_tensor_square(cert):
    """M (x)_N M as a canonical Quotient of M (x) M.

    Uses the projection a (x) b -> a E(b x_i) (x) y_i, whose kernel is
    exactly the N-balancing relations."""
    big = cert.incl.big
    n = big.dim
    xs = [dict(x) for x in cert.dual_bases.xs]
    ys = [dict(y) for y in cert.dual_bases.ys]

    def pi_col(c):
        a, b = divmod(c, n)
        out = {}
        eb = big.basis_vec(b)
        for x, y in zip(xs, ys):
            left = big.mul(big.basis_vec(a), cert.E.E(big.mul(eb, x)))
            sadd_into(out, la.tensor_sparse(left, y, n), 1)
        return out

    return la.quotient_from_projection(n * n, pi_col, big.p)


def casimir_shift_check(cert):
    """x_i u (x) y_i = x_i (x) u y_i in M (x)_N M, for every basis u of U."""
    big = cert.incl.big
    n = big.dim
    q = relative_tensor_square(cert)
    xs = [dict(x) for x in cert.dual_bases.xs]
    ys = [dict(y) for y in cert.dual_bases.ys]
    for u in cert.U.basis:
        ud = dict(u)
        lhs, rhs = {}, {}
        for x, y in zip(xs, ys):
            sadd_into(lhs, la.tensor_sparse(big.mul(x, ud), y, n), 1)
            sadd_into(rhs, la.tensor_sparse(x, big.mul(ud, y), n), 1)
        if q.project(lhs) != q.project(rhs):
            return False
    return True
