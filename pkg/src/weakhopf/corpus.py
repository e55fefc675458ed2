"""Built-in example algebras, extensions and negative controls.

These feed the test suite, the CLI round-trip checks and the README
examples.  The three certified extensions here are the standing tower
inputs: the ground field inside the diagonal plane (index 2), the ground
field inside the 2x2 matrix algebra (index 4), and the diagonal plane
inside the 2x2 matrix algebra (index 2).
"""

from fractions import Fraction

from weakhopf import algebra as ag
from weakhopf.linalg import scalar_one, scalar_zero


def field_algebra(p=None):
    one = scalar_one(p)
    return ag.make_algebra([[{0: one}]], (one,), p=p)


def diagonal_algebra(n, p=None):
    one = scalar_one(p)
    table = [[{i: one} if i == j else {} for j in range(n)] for i in range(n)]
    return ag.make_algebra(table, tuple(one for _ in range(n)), p=p,
                           labels=tuple("d%d" % i for i in range(n)))


def matrix_algebra(n, p=None):
    """M_n on the matrix-unit basis e_ab at flat index a*n + b."""
    one = scalar_one(p)
    dim = n * n
    table = [[{} for _ in range(dim)] for _ in range(dim)]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    if b == c:
                        table[a * n + b][c * n + d] = {a * n + d: one}
    unit = [scalar_zero(p)] * dim
    for a in range(n):
        unit[a * n + a] = one
    labels = tuple("e%d%d" % (a, b) for a in range(n) for b in range(n))
    return ag.make_algebra(table, unit, labels=labels, p=p)


def tensor_algebra(A, B):
    """A (x) B on the pair basis (i, j) at flat index i*dimB + j."""
    if A.p != B.p:
        raise ValueError("mixed ground fields")
    nb = B.dim
    dim = A.dim * nb
    table = [[{} for _ in range(dim)] for _ in range(dim)]
    for i in range(A.dim):
        for j in range(nb):
            for k in range(A.dim):
                for l in range(nb):
                    prod = {}
                    for x, cx in A.table[i][k]:
                        for y, cy in B.table[j][l]:
                            prod[x * nb + y] = cx * cy
                    table[i * nb + j][k * nb + l] = prod
    unit = [scalar_zero(A.p)] * dim
    for i, ci in enumerate(A.unit):
        if ci == 0:
            continue
        for j, cj in enumerate(B.unit):
            if cj != 0:
                unit[i * nb + j] = ci * cj
    return ag.make_algebra(table, unit, p=A.p)


# ---------------------------------------------------------------------------
# the three standing Markov extensions

def ext_q_q2():
    """Ground field inside the diagonal plane; E(a, b) = (a+b)/2, index 2."""
    F = Fraction
    small = field_algebra()
    big = diagonal_algebra(2)
    incl = ag.make_inclusion(small, big, [{0: F(1), 1: F(1)}])
    E = ag.make_cond_expectation(incl, [{0: F(1, 2)}, {0: F(1, 2)}])
    trace = (F(1),)
    db = ag.find_dual_bases(E)
    return ag.certify_markov(incl, E, db, trace)


def ext_q_m2():
    """Ground field inside M2; E = tr/2, index 4."""
    F = Fraction
    small = field_algebra()
    big = matrix_algebra(2)
    incl = ag.make_inclusion(small, big, [{0: F(1), 3: F(1)}])
    E = ag.make_cond_expectation(incl, [{0: F(1, 2)}, {}, {}, {0: F(1, 2)}])
    trace = (F(1),)
    db = ag.find_dual_bases(E)
    return ag.certify_markov(incl, E, db, trace)


def ext_q2_m2():
    """Diagonal plane inside M2; E = diagonal projection, index 2."""
    F = Fraction
    small = diagonal_algebra(2)
    big = matrix_algebra(2)
    incl = ag.make_inclusion(small, big, [{0: F(1)}, {3: F(1)}])
    E = ag.make_cond_expectation(incl, [{0: F(1)}, {}, {}, {1: F(1)}])
    trace = (F(1, 2), F(1, 2))
    db = ag.find_dual_bases(E)
    return ag.certify_markov(incl, E, db, trace)


def ext_trivial_m2():
    """Identity extension of M2: the trivial-centralizer degeneration.

    C_M(N) = Z(M2) = k1; over the rationals this is the only way a split
    semisimple pair gets a trivial relative commutant (the commutant of an
    irreducible matrix subalgebra is scalar only when it is everything), so
    it is the honest ordinary-Hopf degeneration input.
    """
    F = Fraction
    big = matrix_algebra(2)
    incl = ag.make_inclusion(big, big, [{i: F(1)} for i in range(4)])
    E = ag.make_cond_expectation(incl, [{i: F(1)} for i in range(4)])
    trace = (F(1, 2), F(0), F(0), F(1, 2))
    db = ag.find_dual_bases(E)
    return ag.certify_markov(incl, E, db, trace)


def group_algebra(elements, compose, unit_element, p=None):
    """Group algebra on an explicit element list with a composition map."""
    one = scalar_one(p)
    idx = {g: i for i, g in enumerate(elements)}
    table = [[{idx[compose(g, h)]: one} for h in elements] for g in elements]
    unit = [scalar_zero(p)] * len(elements)
    unit[idx[unit_element]] = one
    return ag.make_algebra(table, unit,
                           labels=tuple(str(g) for g in elements), p=p)


def ext_s3_z2():
    """Q[Z2] inside Q[S3]: a certified symmetric Markov extension of index 3
    whose tower is NOT depth 2 (the subgroup is not normal).

    Serves as the constructed counterexample: certification and the tower
    relations all pass, depth2_check fails.
    """
    from itertools import permutations
    F = Fraction
    elems = sorted(permutations((0, 1, 2)))
    idx = {g: i for i, g in enumerate(elems)}
    compose = lambda g, h: tuple(g[h[i]] for i in range(3))
    big = group_algebra(elems, compose, (0, 1, 2))
    swap = (1, 0, 2)
    small = group_algebra(("e", "s"),
                          lambda a, b: "e" if a == b else "s", "e")
    incl = ag.make_inclusion(small, big, [{idx[(0, 1, 2)]: F(1)},
                                          {idx[swap]: F(1)}])
    erows = []
    for g in elems:
        if g == (0, 1, 2):
            erows.append({0: F(1)})
        elif g == swap:
            erows.append({1: F(1)})
        else:
            erows.append({})
    E = ag.make_cond_expectation(incl, erows)
    trace = (F(1), F(0))
    db = ag.find_dual_bases(E)
    return ag.certify_markov(incl, E, db, trace)


def standing_extensions():
    return {"q_in_q2": ext_q_q2(), "q_in_m2": ext_q_m2(),
            "q2_in_m2": ext_q2_m2()}


def skewed_expectation():
    """Negative control: E'(x) = tr(d x)/tr(d), d = diag(1, 2), on Q in M2.

    A perfectly good Frobenius conditional expectation (the twisted trace
    form is non-degenerate), but tr(d u x) != tr(d x u) for u = e01,
    x = e10, so the symmetry identity fails with a witness.
    """
    F = Fraction
    small = field_algebra()
    big = matrix_algebra(2)
    incl = ag.make_inclusion(small, big, [{0: F(1), 3: F(1)}])
    E = ag.make_cond_expectation(
        incl, [{0: F(1, 3)}, {}, {}, {0: F(2, 3)}])
    return incl, E
