import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from amelab import cli
from amelab.tensor_core import Ket

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = json.loads(capsys.readouterr().out)
    cli.validate_report(out)
    assert (code == 0) == (out["verdict"] == "pass")
    return code, out


@given(st.lists(st.tuples(finite, finite), min_size=4, max_size=4))
def test_state_round_trip_bit_exact(pairs):
    k = Ket(np.array([complex(a, b) for a, b in pairs]), 2)
    d = json.loads(json.dumps(cli.ket_to_dict(k)))
    back = cli.ket_from_dict(d)
    assert back.amps.tobytes() == k.amps.tobytes()


def test_malformed_state_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "local_dim": 2, "amps": [["1", "0"]]}))
    code, out = run(capsys, "check", "uniform", bad, "-r", 1)
    assert code == 2 and out["verdict"] == "error"


def test_construct_and_checks(tmp_path, capsys):
    d = ["--outdir", tmp_path]
    code, out = run(capsys, "construct", "psi_m", "--m", 4, *d)
    assert code == 0 and out["data"]["n"] == 8
    code, _ = run(capsys, "check", "uniform", tmp_path / "psi_m.json", "-r", 3)
    assert code == 0
    run(capsys, "construct", "ghz4", "--m", 3, *d)
    g = json.loads((tmp_path / "ghz4.json").read_text())
    assert len(g["amps"]) == 64 and sum(a == ["1", "0"] for a in g["amps"]) == 4
    run(capsys, "construct", "psi6", *d)
    code, out = run(capsys, "check", "uniform", tmp_path / "psi6.json", "-r", 3)
    assert code == 0
    code, out = run(capsys, "check", "uniform", tmp_path / "psi6.json", "-r", 4)
    assert code == 2 and "out of range" in out["message"]
    code, out = run(capsys, "construct", "c1", *d)
    assert code == 0 and len(out["outputs"]) == 2
    run(capsys, "construct", "c2", *d)
    c2 = [tmp_path / f"c2_{i}.json" for i in range(4)]
    code, out = run(capsys, "check", "code", *c2, "--expect-d", 2)
    assert code == 0 and out["data"]["params"] == "((4,4,2))_2"
    code, out = run(capsys, "check", "code", *c2, "--expect-d", 3)
    assert code == 1
    code, out = run(capsys, "check", "critical", c2[0])
    assert code == 0 and len(out["checks"]) == 2
    code, out = run(capsys, "check", "singleton", "--n", 4, "--K", 2, "--d", 3)
    assert code == 1
    code, out = run(capsys, "check", "singleton", tmp_path / "c1_0.json", tmp_path / "c1_1.json")
    assert code == 0 and out["data"]["equality"]
    code, out = run(capsys, "check", "table2", tmp_path / "c1_0.json")
    assert code == 0 and out["data"]["two_uniform"]
    with pytest.raises(SystemExit):
        cli.main(["construct", "nope"])


def test_ladder(tmp_path, capsys):
    d = ["--outdir", tmp_path]
    run(capsys, "construct", "psi6", *d)
    code, out = run(capsys, "ladder", "down", tmp_path / "psi6.json", "--prefix", "a", *d)
    assert code == 0 and out["data"]["params"] == "((5,2,3))_2" and len(out["outputs"]) == 2
    code, out = run(capsys, "ladder", "down", *out["outputs"], "--prefix", "b", *d)
    assert code == 0 and out["data"]["params"] == "((4,4,2))_2" and len(out["outputs"]) == 4
    code, out = run(capsys, "ladder", "up", tmp_path / "a_0.json", tmp_path / "a_1.json", *d)
    assert code == 0 and out["data"]["n"] == 6
    code, out = run(capsys, "ladder", "down", tmp_path / "b_0.json", tmp_path / "b_1.json",
                    tmp_path / "b_2.json", tmp_path / "b_3.json", *d)
    assert code == 2


def test_equiv(tmp_path, capsys):
    from amelab.constructions import c1_point
    from amelab.tensor_core import apply_local, random_su2
    rng = np.random.default_rng(4)
    k = c1_point(0.6, 0.8j)
    rot = apply_local(k, [random_su2(rng) for _ in range(5)])
    cli.write_state(tmp_path / "k.json", k)
    cli.write_state(tmp_path / "rot.json", rot)
    cli.write_state(tmp_path / "other.json", c1_point(0.8, 0.6))
    cli.write_state(tmp_path / "prod.json", Ket.basis("00000"))
    code, out = run(capsys, "equiv", tmp_path / "k.json", tmp_path / "rot.json")
    assert code == 0 and set(out["data"]["gaps"]) == {"f6", "g6_5", "f12_2"}
    code, out = run(capsys, "equiv", tmp_path / "k.json", tmp_path / "other.json")
    assert code == 1 and out["data"]["c1_orbit_equivalent"] is False
    code, out = run(capsys, "equiv", tmp_path / "k.json", tmp_path / "prod.json")
    assert code == 2 and "not AME" in out["message"]


def test_group(capsys):
    assert run(capsys, "group", "wc1", "order")[1]["data"]["order"] == 24
    assert run(capsys, "group", "weyl-d4", "order")[1]["data"]["order"] == 192
    m = run(capsys, "group", "wc1", "molien", "--max", 24)[1]["data"]["molien"]
    assert m == [1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 2, 0, 1, 0, 1, 0, 2, 0, 2, 0, 1, 0, 3]


def test_knormalize(tmp_path, capsys):
    d = ["--outdir", tmp_path]
    run(capsys, "construct", "psi6", "--perturb", 0.3, "--seed", 5, "--prefix", "pert", *d)
    code, out = run(capsys, "knormalize", tmp_path / "pert.json", *d)
    assert code == 0
    res = [c for c in out["checks"] if c["name"] == "converged"][0]["residual"]
    assert res < 1e-6
    assert out["data"]["final_norm_sq"] <= out["data"]["initial_norm_sq"]
    run(capsys, "construct", "c2", *d)
    code, out = run(capsys, "knormalize", tmp_path / "c2_0.json", *d)
    assert code == 0 and out["data"]["iterations"] == 0
    cli.write_state(tmp_path / "prod.json", Ket.basis("000000"))
    code, out = run(capsys, "knormalize", tmp_path / "prod.json", *d)
    assert code == 1 and out["data"]["nullcone"] and "nullcone" in out["message"]


def test_json_out(tmp_path, capsys):
    target = tmp_path / "rep.json"
    run(capsys, "group", "so3", "order", "--json-out", target)
    rep = json.loads(target.read_text())
    cli.validate_report(rep)
    assert rep["data"]["order"] == 12


def test_schema_rejects_inconsistent_report():
    rep = cli.Report("x")
    rep.check("a", False, 1.0, 0.1)
    d = rep.to_dict()
    d["verdict"] = "pass"
    with pytest.raises(ValueError):
        cli.validate_report(d)
