import io
import json
import subprocess
import sys

import pytest
from conftest import DATA

from quivoa.cli import SCHEMAS, build_parser, run

EX = str(DATA / "example_three_vertex.graph")
P1 = str(DATA / "pair_parallel.graph")
P2 = str(DATA / "pair_opposite.graph")


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


def test_mispace_json_and_figure(tmp_path):
    fig = tmp_path / "m.png"
    obj = call_json("mispace", EX, "--figure", str(fig))
    assert obj["N_Q"] == 7
    assert obj["dims_sorted"] == [0, 0, 0, 2, 2, 3, 3]
    assert obj["seed"] == 0 and obj["command"] == "mispace"
    assert fig.stat().st_size > 0 and obj["figure"] == str(fig)


def test_mispace_text():
    code, out, _ = call("mispace", EX)
    assert code == 0
    assert "N_Q = 7" in out and "seed = 0" in out


def test_invariants():
    obj = call_json("invariants", EX)
    assert (obj["vertex_count"], obj["edge_count"], obj["alpha"], obj["beta"], obj["k0_rank"]) == (3, 3, 2, 1, 3)


def test_reduce_and_semigroup():
    assert call_json("reduce", "v1.t1.v1.t3", "--graph", EX)["normal_form"] == "t1.t3"
    obj = call_json("semigroup", "--graph", P1, "--max-len", "1")
    assert obj["words"] == ["v1", "v2", "e1", "e2"] and obj["identity"] is None


def test_recover_shadow():
    obj = call_json("recover-shadow", EX, "--blind-seed", "4")
    assert obj["isomorphic_to_true_shadow"] is True
    assert obj["blind_seed"] == 4
    assert sorted(k for _, _, k in obj["recovered"]["multiplicity"]) == [1, 2]


def test_iso_models():
    assert call_json("iso", "--model", "gcm", P1, P2)["verdict"] is True
    obj = call_json("iso", "--model", "oa", P1, P2)
    assert obj["verdict"] is False and obj["refutation"]


def test_eval_exact():
    obj = call_json("eval", "--subset", "v1,v2", "--lambda", "t1=0.5,t3=i", EX, "2 * t1 + (0-1) i * v3 + t3.t1")
    assert obj["value"] == {"re": 1.0, "im": 0.5}
    assert obj["exact"] == "(1+1/2i)"


def test_norm_bounds(tmp_path):
    fig = tmp_path / "b.png"
    obj = call_json("norm-bounds", EX, "t1 + t2", "--trials", "4", "--figure", str(fig))
    assert (obj["lower"], obj["upper"]) == (2.0, 2.0)
    assert fig.exists()
    obj = call_json("norm-bounds", "--gcm", EX, "t3~.t3", "--trials", "4")
    assert (obj["lower"], obj["upper"]) == (1.0, 1.0)


def test_norm_bounds_independent_of_thread_count(monkeypatch):
    args = ("norm-bounds", EX, "t3.t1 - 2 * t2 + v2", "--trials", "12", "--seed", "5")
    monkeypatch.setenv("QUIVOA_THREADS", "1")
    one = call_json(*args)
    monkeypatch.setenv("QUIVOA_THREADS", "3")
    assert call_json(*args) == one
    assert one["seed"] == 5


def test_lemmas():
    obj = call_json("lemmas", "--trials", "10")
    assert obj["all_passed"] is True and len(obj["lemmas"]) == 7


def test_domain_errors_exit_1(tmp_path):
    bad = tmp_path / "bad.graph"
    bad.write_text("vertex a\nedge e a b\n")
    code, _, err = call("mispace", str(bad))
    assert code == 1 and "2:10" in err
    assert call("mispace", str(tmp_path / "missing.graph"))[0] == 1
    assert call("eval", "--subset", "v2", "--lambda", "t1=0.5", EX, "t1")[0] == 1
    assert call("reduce", "v1..t1", "--graph", EX)[0] == 1


def test_usage_errors_exit_2():
    assert call("nope")[0] == 2
    assert call("iso", "--model", "xx", P1, P2)[0] == 2
    assert call("norm-bounds", "--dims", "a,b", EX, "t1")[0] == 2


def test_help_documents_json_schema(capsys):
    parser = build_parser()
    for name in SCHEMAS:
        with pytest.raises(SystemExit):
            parser.parse_args([name, "--help"])
        assert "JSON output" in capsys.readouterr().out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "quivoa", "invariants", EX, "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["N_Q"] == 7
