import json

import pytest

from weakhopf import cli
from weakhopf import corpus
from weakhopf import groupoid as gp
from weakhopf import specfile as sf


@pytest.fixture()
def pair2_file(tmp_path):
    path = tmp_path / "pair2.json"
    sf.dump(sf.specfile_for(gp.pair(2), "pair2"), path)
    return str(path)


@pytest.fixture()
def markov_file(tmp_path):
    cert = corpus.ext_q_q2()
    path = tmp_path / "q_q2.json"
    sf.dump(sf.specfile_for((cert.incl, cert.E, cert.trace), "q_in_q2"), path)
    return str(path)


def test_roundtrip_groupoid(tmp_path):
    for name, G in gp.corpus().items():
        path = tmp_path / (name + ".json")
        sf.dump(sf.specfile_for(G, name), path)
        G2 = sf.build(sf.load(path))
        assert G2.objects == G.objects
        assert G2.morphisms == G.morphisms
        assert G2.compose == G.compose


def test_roundtrip_weakhopf(tmp_path):
    H = gp.groupoid_algebra(gp.pair(2))
    path = tmp_path / "wha.json"
    sf.dump(sf.specfile_for(H, "pair2-algebra"), path)
    H2 = sf.build(sf.load(path))
    assert (H2.alg.table, H2.delta, H2.eps, H2.s) == \
        (H.alg.table, H.delta, H.eps, H.s)


def test_roundtrip_markov(tmp_path):
    for name, cert in corpus.standing_extensions().items():
        path = tmp_path / (name + ".json")
        sf.dump(sf.specfile_for((cert.incl, cert.E, cert.trace), name), path)
        incl, E, trace = sf.build(sf.load(path))
        assert incl.embed == cert.incl.embed
        assert E.rows == cert.E.rows
        assert trace == cert.trace


def test_verify_wha_all_pass(pair2_file, capsys):
    assert cli.main(["verify-wha", pair2_file]) == 0
    out = capsys.readouterr().out
    assert "0 failed" in out


def test_corrupted_antipode_fails_sandwich(tmp_path, capsys):
    spec = sf.specfile_for(gp.groupoid_algebra(gp.pair(2)), "bad")
    payload = dict(spec.payload)
    # S'(g01) += g01: passes the counital antipode axioms, breaks the
    # sandwich axiom and nothing upstream of it
    srows = [list(r) for r in payload["s"]]
    srows[1][1] = "1"
    payload = dict(payload, s=srows)
    path = tmp_path / "bad.json"
    sf.dump(sf.SpecFile("weak-hopf", "bad", None, payload), path)
    rc = cli.main(["verify-wha", str(path)])
    assert rc == 1
    out = capsys.readouterr().out
    assert "FAIL antipode_sandwich" in out
    for upstream in ("coassociativity", "counit_left", "delta_multiplicative",
                     "eps_weak_multiplicative", "delta_one",
                     "antipode_target", "antipode_source"):
        assert "FAIL %s " % upstream not in out


def test_trivial_algebra_passes(tmp_path):
    spec = sf.specfile_for(corpus.field_algebra(), "k")
    path = tmp_path / "k.json"
    sf.dump(spec, path)
    assert cli.main(["verify-wha", str(path)]) == 0


def test_tower_command(markov_file, capsys):
    assert cli.main(["tower", markov_file, "--depth", "2"]) == 0
    out = capsys.readouterr().out
    assert "PASS braid_1_2_1" in out


def test_tower_derive(markov_file, capsys):
    assert cli.main(["tower", markov_file, "--derive"]) == 0
    out = capsys.readouterr().out
    assert "PASS invariants_are_N" in out
    assert "PASS haar_normalized" in out


def test_tower_appendix(markov_file, capsys):
    assert cli.main(["tower", markov_file, "--appendix-fn", "1"]) == 0
    out = capsys.readouterr().out
    assert "PASS f1_idempotent" in out


def test_tower_rejects_skewed_expectation(tmp_path, capsys):
    incl, E = corpus.skewed_expectation()
    from fractions import Fraction as F
    path = tmp_path / "skew.json"
    sf.dump(sf.specfile_for((incl, E, (F(1),)), "skewed"), path)
    rc = cli.main(["tower", str(path)])
    assert rc == 1
    out = capsys.readouterr().out
    assert "FAIL symmetric" in out


def test_groupoid_command(pair2_file):
    assert cli.main(["groupoid", pair2_file, "--dual", "--integrals"]) == 0


def test_machine_format_and_report_roundtrip(pair2_file, tmp_path, capsys):
    assert cli.main(["--format", "machine", "verify-wha", pair2_file]) == 0
    out = capsys.readouterr().out
    lines = [json.loads(l) for l in out.strip().splitlines()]
    assert lines[-1]["failed"] == 0
    rpath = tmp_path / "report.jsonl"
    rpath.write_text(out)
    assert cli.main(["report", str(rpath)]) == 0


def test_reports_deterministic(pair2_file, capsys):
    cli.main(["--format", "machine", "verify-wha", pair2_file])
    out1 = capsys.readouterr().out
    cli.main(["--format", "machine", "verify-wha", pair2_file])
    out2 = capsys.readouterr().out
    assert out1 == out2


def test_input_error_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert cli.main(["verify-wha", str(path)]) == 2
    path2 = tmp_path / "badkind.json"
    path2.write_text(json.dumps({"kind": "nonsense", "name": "x",
                                 "field": "rational", "payload": {}}))
    assert cli.main(["verify-wha", str(path2)]) == 2


def test_malformed_scalar_rejected(tmp_path):
    spec = sf.specfile_for(corpus.field_algebra(), "k")
    payload = dict(spec.payload)
    payload["unit"] = ["1/0x"]
    path = tmp_path / "badscalar.json"
    sf.dump(sf.SpecFile("algebra", "k", None, payload), path)
    assert cli.main(["verify-wha", str(path)]) == 2


def test_tower_non_depth2_fails_at_depth2_stage(tmp_path, capsys):
    cert = corpus.ext_s3_z2()
    path = tmp_path / "s3.json"
    sf.dump(sf.specfile_for((cert.incl, cert.E, cert.trace), "s3_z2"), path)
    rc = cli.main(["tower", str(path), "--derive"])
    assert rc == 1
    out = capsys.readouterr().out
    assert "FAIL depth2" in out
    # every stage before depth-2 passes
    for law in ("symmetric", "strongly_separable", "braid_1_2_1",
                "pimsner_popa_right_e2", "level_1", "level_2"):
        assert "PASS %s " % law in out
