from fractions import Fraction as F

import pytest

from weakhopf import algebra as ag
from weakhopf import corpus
from weakhopf import linalg as la


def test_field_algebra_valid():
    assert corpus.field_algebra().dim == 1


def test_diagonal_product():
    q2 = corpus.diagonal_algebra(2)
    assert q2.mul({0: F(1)}, {1: F(1)}) == {}
    assert q2.mul({0: F(2)}, {0: F(3)}) == {0: F(6)}


def test_rejects_non_associative():
    # basis 1, a, b with a*a = b, a*b = 0, b*a = a: (aa)a = a but a(aa) = 0
    bad = [[{0: F(1)}, {1: F(1)}, {2: F(1)}],
           [{1: F(1)}, {2: F(1)}, {}],
           [{2: F(1)}, {1: F(1)}, {}]]
    with pytest.raises(ag.NotAssociative):
        ag.make_algebra(bad, (F(1), F(0), F(0)))


def test_rejects_bad_unit():
    table = [[{0: F(1)}, {}], [{}, {1: F(1)}]]
    with pytest.raises(ag.BadUnit):
        ag.make_algebra(table, (F(1), F(0)))


def test_center_of_matrix_algebra():
    m2 = corpus.matrix_algebra(2)
    cen = ag.centralizer(m2, la.Subspace.full(4))
    assert cen.dim == 1
    assert cen.contains({0: F(1), 3: F(1)})


def test_centralizer_of_scalars_is_everything():
    m2 = corpus.matrix_algebra(2)
    ones = la.Subspace.from_vectors(4, [{0: F(1), 3: F(1)}])
    assert ag.centralizer(m2, ones) == la.Subspace.full(4)


def test_centralizer_of_diagonal():
    m2 = corpus.matrix_algebra(2)
    diag = la.Subspace.from_vectors(4, [{0: F(1)}, {3: F(1)}])
    assert ag.centralizer(m2, diag) == diag


def test_dual_bases_q2():
    cert = corpus.ext_q_q2()
    assert cert.lambda_inv == 2
    # the dual-bases tensor is e1 (x) e1 + e2 (x) e2 scaled by 2
    tensor = {}
    for x, y in zip(cert.dual_bases.xs, cert.dual_bases.ys):
        for i, ci in x:
            for j, cj in y:
                tensor[(i, j)] = tensor.get((i, j), 0) + ci * cj
    assert tensor == {(0, 0): F(2), (1, 1): F(2)}


def test_dual_bases_m2_trace():
    cert = corpus.ext_q_m2()
    assert cert.lambda_inv == 4
    tensor = {}
    for x, y in zip(cert.dual_bases.xs, cert.dual_bases.ys):
        for i, ci in x:
            for j, cj in y:
                tensor[(i, j)] = tensor.get((i, j), 0) + ci * cj
    # 2 e_ab (x) e_ba summed over matrix units
    assert tensor == {(0, 0): F(2), (1, 2): F(2), (2, 1): F(2), (3, 3): F(2)}


def test_dual_bases_infeasible_within():
    cert = corpus.ext_q_m2()
    # constrain to the scalars: no dual bases fit in a 1-dim space
    ones = la.Subspace.from_vectors(4, [{0: F(1), 3: F(1)}])
    with pytest.raises(ag.NoDualBases):
        ag.find_dual_bases(cert.E, within=ones)


def test_is_symmetric_diag_projection():
    cert = corpus.ext_q2_m2()
    ok, witness = ag.is_symmetric(cert.E, cert.U)
    assert ok and witness is None


def test_skewed_expectation_not_symmetric():
    incl, E = corpus.skewed_expectation()
    U = ag.centralizer(incl.big, ag.embedded_image(incl))
    ok, witness = ag.is_symmetric(E, U)
    assert not ok
    assert witness is not None


def test_kanzaki_q2():
    f = ag.kanzaki_element(corpus.diagonal_algebra(2))
    assert f == {0: F(1), 3: F(1)}


def test_kanzaki_m2():
    f = ag.kanzaki_element(corpus.matrix_algebra(2))
    assert f == {0: F(1, 2), 6: F(1, 2), 9: F(1, 2), 15: F(1, 2)}


def test_kanzaki_rejects_m2_f2():
    with pytest.raises(ag.NotKanzaki):
        ag.kanzaki_element(corpus.matrix_algebra(2, p=2))


def test_separability_without_symmetry_still_exists_m2_f2():
    # M_p over F_p is separable, just not Kanzaki separable
    f = ag.separability_element(corpus.matrix_algebra(2, p=2))
    assert f


def test_certificates_all_flags():
    for name, cert in corpus.standing_extensions().items():
        assert cert.checks.ok, (name, cert.checks.failures())
        assert cert.symmetric and cert.strongly_separable
        assert cert.symmetric_product and cert.weakly_irreducible


def test_expected_lambdas():
    assert corpus.ext_q_q2().lambda_inv == 2
    assert corpus.ext_q_m2().lambda_inv == 4
    assert corpus.ext_q2_m2().lambda_inv == 2


def test_nondegenerate_trace_implies_symmetric():
    # the Markov traces of the standing corpus are non-degenerate on N,
    # so symmetry must come out true
    for name, cert in corpus.standing_extensions().items():
        small = cert.incl.small
        tdu = ag.trace_dual_bases(small, cert.trace)
        if tdu is not None:
            assert cert.symmetric, name


def test_casimir_shift():
    for name, cert in corpus.standing_extensions().items():
        assert ag.casimir_shift_check(cert), name


def test_relative_tensor_square_dims():
    assert ag.relative_tensor_square(corpus.ext_q_q2()).dim == 4
    assert ag.relative_tensor_square(corpus.ext_q2_m2()).dim == 8
    assert ag.relative_tensor_square(corpus.ext_q_m2()).dim == 16


def test_subalgebra_requires_closure():
    m2 = corpus.matrix_algebra(2)
    not_closed = la.Subspace.from_vectors(4, [{1: F(1)}, {2: F(1)}])
    with pytest.raises(ag.NotClosed):
        ag.subalgebra(m2, not_closed)
