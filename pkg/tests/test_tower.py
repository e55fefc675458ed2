from fractions import Fraction as F

import pytest

from weakhopf import algebra as ag
from weakhopf import corpus
from weakhopf import linalg as la
from weakhopf import tower as tw
from weakhopf import wha


@pytest.fixture(scope="module")
def towers():
    return {name: tw.build_tower(cert, 2)
            for name, cert in corpus.standing_extensions().items()}


@pytest.fixture(scope="module")
def pipelines(towers):
    return {name: tw.derive(t) for name, t in towers.items()}


def test_basic_construction_dims():
    assert tw.basic_construction(corpus.ext_q_q2()).alg.dim == 4
    assert tw.basic_construction(corpus.ext_q_m2()).alg.dim == 16
    assert tw.basic_construction(corpus.ext_q2_m2()).alg.dim == 8


def test_basic_construction_checks(towers):
    for name, t in towers.items():
        for lvl in t.levels:
            assert lvl.checks.ok, (name, [c.name for c in
                                          lvl.checks.failures()])


def test_jones_idempotent_on_q2():
    lvl = tw.basic_construction(corpus.ext_q_q2())
    e1 = lvl.e
    assert lvl.alg.mul(e1, e1) == e1
    # E_M(e1) = lambda 1 with lambda = 1/2
    down = ag.apply_map(lvl.E_down, e1)
    assert down == {0: F(1, 2), 1: F(1, 2)}


def test_tower_dims(towers):
    dims = {name: [t.alg(k).dim for k in range(3)]
            for name, t in towers.items()}
    assert dims["q_in_q2"] == [2, 4, 8]
    assert dims["q2_in_m2"] == [4, 8, 16]
    assert dims["q_in_m2"] == [4, 16, 64]


def test_tower_depth3_doubling():
    t = tw.build_tower(corpus.ext_q_q2(), 3)
    assert [t.alg(k).dim for k in range(4)] == [2, 4, 8, 16]
    assert t.checks.ok


def test_tower_relations(towers):
    for name, t in towers.items():
        assert t.checks.ok, (name, [c.name for c in t.checks.failures()])
        for law in ("braid_1_2_1", "braid_2_1_2", "pimsner_popa_right_e1",
                    "pimsner_popa_left_e1", "pimsner_popa_right_e2",
                    "pimsner_popa_left_e2", "restricted_trace_normalized"):
            assert t.checks.get(law).passed, (name, law)


def test_lattice_dims(pipelines):
    expected = {
        "q_in_q2": (2, 2, 2, 4, 4, 8),
        "q2_in_m2": (2, 2, 2, 4, 4, 8),
        "q_in_m2": (4, 4, 4, 16, 16, 64),
    }
    for name, (ctx, lat, res, full) in pipelines.items():
        dims = tuple(s.dim for s in (lat.U, lat.V, lat.W, lat.A, lat.B,
                                     lat.C))
        assert dims == expected[name], name
        assert lat.checks.ok, name


def test_depth2_succeeds(pipelines):
    for name, (ctx, lat, res, full) in pipelines.items():
        d2 = res["depth2"]
        assert len(d2.zs) >= 1 and len(d2.us) >= 1, name


def test_depth2_fails_when_constrained_wrongly():
    cert = corpus.ext_q_m2()
    t = tw.build_tower(cert, 2)
    ctx = tw.DepthTwoContext(t)
    # force the solver into a strict subspace of A where no dual bases fit
    ones = la.Subspace.from_vectors(
        ctx.M1.dim, [ctx.M1.unit_sparse()])
    with pytest.raises(ag.NoDualBases):
        ag.find_dual_bases(ctx.lv1.cert.E, within=ones)


def test_expectation_suite(pipelines):
    for name, (ctx, lat, res, full) in pipelines.items():
        ep = res["expectations"]
        assert ep.checks.ok, (name, [c.name for c in ep.checks.failures()])


def test_E_B_of_e1_value():
    cert = corpus.ext_q_q2()
    t = tw.build_tower(cert, 2)
    ctx = tw.DepthTwoContext(t)
    d2 = tw.depth2_check(ctx)
    ep = tw.conditional_expectations(ctx, d2)
    co = ctx.C.coords(ctx.e1)
    val = ag.apply_map(ep.E_B_rows, {i: c for i, c in enumerate(co) if c})
    assert val == la.sscale(ctx.M2.unit_sparse(), F(1, 2))


def test_pairing_rank(pipelines):
    for name, (ctx, lat, res, full) in pipelines.items():
        pd = res["pairing"]
        assert pd.gram.rank() == lat.A.dim == lat.B.dim, name


def test_derived_axioms_and_counitals(pipelines):
    for name, (ctx, lat, res, full) in pipelines.items():
        dw = res["derived"]
        for c in dw.checks.items:
            assert c.passed, (name, c.name, c.witness)
        assert wha.verify_axioms(dw.B).ok, name
        assert wha.verify_axioms(dw.A).ok, name


def test_actions_and_isos(pipelines):
    for name, (ctx, lat, res, full) in pipelines.items():
        assert full.ok, (name, [c.name for c in full.failures()])
        assert res["smash_B"].alg.dim == ctx.M2.dim, name
        assert res["smash_A"].alg.dim == ctx.M1.dim, name


def test_derived_B_not_hopf_when_V_is_big(pipelines):
    for name, (ctx, lat, res, full) in pipelines.items():
        assert not wha.is_hopf(res["derived"].B), name


def test_degeneration_is_hopf():
    cert = corpus.ext_trivial_m2()
    assert cert.U.dim == 1
    t = tw.build_tower(cert, 2)
    ctx, lat, res, full = tw.derive(t)
    assert full.ok, [c.name for c in full.failures()]
    assert wha.is_hopf(res["derived"].B)


def test_non_depth2_counterexample():
    # a fully certified Markov extension whose tower is not depth 2: the
    # group pair with a non-normal subgroup of index 3
    cert = corpus.ext_s3_z2()
    assert cert.checks.ok and cert.lambda_inv == 3
    t = tw.build_tower(cert, 2)
    assert t.checks.ok
    ctx = tw.DepthTwoContext(t)
    with pytest.raises(tw.Depth2Failure):
        tw.depth2_check(ctx)
