from fractions import Fraction as F

from weakhopf import action as ac
from weakhopf import algebra as ag
from weakhopf import corpus
from weakhopf import groupoid as gp


def z2():
    return gp.groupoid_algebra(gp.cyclic(2))


def pair2():
    return gp.groupoid_algebra(gp.pair(2))


def scalar_module(H):
    """The ground field as an H-module algebra (Hopf case only)."""
    one = corpus.field_algebra()
    act = [[{0: H.e(H.alg.basis_vec(h))}] for h in range(H.dim)]
    return ac.make_module_algebra(H, one, act)


def test_canonical_actions_pass():
    for H in (z2(), pair2()):
        for build in (ac.trivial_action, ac.standard_action,
                      ac.adjoint_action):
            M, cl = build(H)
            assert cl.ok, (build.__name__, [c.name for c in cl.failures()])


def test_standard_action_invariants_are_scalars():
    M, _ = ac.standard_action(z2())
    inv = ac.invariants(M)
    assert inv.dim == 1
    assert inv.contains(M.A.unit_sparse())


def test_adjoint_invariants_commutative_case():
    # kZ2 is commutative: the adjoint action is trivial and fixes everything
    M, _ = ac.adjoint_action(z2())
    assert ac.invariants(M).dim == M.A.dim


def test_bridge_recovers_delta_for_standard_action():
    H = z2()
    M, _ = ac.standard_action(H)
    C, cl = ac.action_comodule_bridge(M)
    assert cl.ok
    assert C.rho == H.delta


def test_bridge_on_trivial_action():
    M, _ = ac.trivial_action(pair2())
    C, cl = ac.action_comodule_bridge(M)
    assert cl.ok, [c.name for c in cl.failures()]


def test_smash_with_scalars_is_H():
    H = z2()
    M, cl = scalar_module(H)
    assert cl.ok
    sm = ac.smash(M)
    assert sm.alg.dim == H.dim


def test_smash_no_collapse_in_hopf_case():
    # Ht = k1 for a Hopf algebra: dim(A # H) = dim A * dim H
    H = z2()
    Ma, _ = ac.adjoint_action(H)  # A = kZ2 itself
    sm = ac.smash(Ma)
    assert sm.alg.dim == Ma.A.dim * H.dim


def test_smash_collapse_over_Ht():
    M, _ = ac.trivial_action(pair2())
    sm = ac.smash(M)
    # A = Ht (dim 2), H dim 4, balancing over Ht (dim 2) leaves dim 4
    assert sm.alg.dim == 4
    assert sm.checks.ok


def test_smash_unit_law():
    M, _ = ac.trivial_action(pair2())
    sm = ac.smash(M)
    one = sm.alg.unit_sparse()
    for i in range(sm.alg.dim):
        b = sm.alg.basis_vec(i)
        assert sm.alg.mul(one, b) == b == sm.alg.mul(b, one)


def test_smash_dual_action_passes():
    H = z2()
    M, _ = scalar_module(H)
    sm = ac.smash(M)
    MD, cl = ac.smash_dual_action(M, sm)
    assert cl.ok


def test_duality_dimensions_scalar_z2():
    M, _ = scalar_module(z2())
    cl, sm1, sm2 = ac.duality_dimension_check(M)
    assert cl.ok, [(c.name, c.witness) for c in cl.failures()]
    assert sm2.alg.dim == 4  # End of a 2-dim space


def test_duality_dimensions_trivial_pair2():
    M, _ = ac.trivial_action(pair2())
    cl, _, _ = ac.duality_dimension_check(M)
    assert cl.ok, [(c.name, c.witness) for c in cl.failures()]


def test_bad_action_rejected():
    # mangle the standard action so the measuring axiom breaks
    H = z2()
    M, cl = ac.standard_action(H)
    rows = [list(map(dict, r)) for r in M.act]
    rows[1][0] = {0: F(1), 1: F(1)}
    M2 = ac.ModuleAlgebra(H, M.A, tuple(ag.map_rows(r) for r in rows))
    assert not ac.verify_module_algebra(M2).ok
