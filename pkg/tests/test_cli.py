import json
import subprocess
import sys

import jsonschema
import pytest

from gentle_discrete import cli
from gentle_discrete.complexes import dumps

from helpers import worked_A

STAR = ('{"vertices":[0,1,2,3],"arrows":[{"id":"s1","src":0,"tgt":1},'
        '{"id":"s2","src":0,"tgt":2},{"id":"s3","src":0,"tgt":3}]}')


def run(tmp_path, *argv, name="out.json"):
    out = tmp_path / name
    code = cli.main(list(argv) + ["--out", str(out)])
    rep = json.loads(out.read_text()) if out.exists() else None
    if rep is not None:
        jsonschema.validate(rep, cli.load_schema())
    return code, rep


def test_hom_scan_family_flags(tmp_path):
    code, rep = run(tmp_path, "hom-scan", "--family", "lambda", "--r", "2", "--n", "3", "--m", "0",
                    "--max-letters", "6")
    assert code == 0 and rep["result"]["max_dim"] == 1 and rep["query"]["algebra"] == "Lambda(2,3,0)"
    assert len(rep["result"]["witness"]) == 2


def test_empty_profile(tmp_path):
    code, rep = run(tmp_path, "h-fiber", "--profile", '{"0": [0, 0, 0]}')
    assert code == 0 and rep["result"]["fibers"][0]["count"] == 0


def test_band_refusal(tmp_path):
    code, rep = run(tmp_path, "abelian-fiber", "--algebra", "kronecker", "--field", "Q", "--dimvec", "1,1")
    assert code == 2 and rep["status"] == "refused"
    assert rep["result"]["reason"] == "band present; fiber finiteness not guaranteed"


def test_budget_refusal(tmp_path):
    code, rep = run(tmp_path, "cone-census", "--field", "F3", "--source", "a,cb~@0",
                    "--target", "cba@0", "--budget", "2")
    assert code == 2 and rep["result"]["reason"] == "census budget exceeded"


@pytest.mark.parametrize("argv", [
    ["no-such-command"],
    ["hom-scan", "--algebra", "lambda:3,2,0"],
    ["hom-scan", "--algebra", '{"vertices":[0],"arrows":[{"id":"x","src":0,"tgt":5}]}'],
    ["hom-scan", "--family", "lambda", "--r", "1"],
    ["uniqueness", "--algebra", STAR],
    ["h-fiber", "--profile", "[1, 2]"],
    ["cone-census", "--source", "a,b@0", "--target", "e(0)@0"],
    ["abelian-fiber", "--dimvec", "1,1"],
    ["hom-scan", "--threads", "0"],
    ["hom-scan", "--field", "F4"],
    ["hom-scan", "--algebra", '{"vertices":[0,1],"arrows":{"x":[0,1]}}'],
    ["hom-scan", "--algebra", '{"vertices":[0,1],"arrows":[{"id":"x","src":0}]}'],
])
def test_usage_errors(tmp_path, argv, capsys):
    assert cli.main(argv + ["--out", str(tmp_path / "x.json")]) == 1
    assert not (tmp_path / "x.json").exists()


def test_dangling_arrow_is_named(capsys):
    cli.main(["hom-scan", "--algebra", '{"vertices":[0],"arrows":[{"id":"x","src":0,"tgt":5}]}'])
    assert "'x'" in capsys.readouterr().err


def test_non_gentle_decompose_allowed(tmp_path):
    code, rep = run(tmp_path, "decompose", "--algebra", STAR, "--string", "e(0)@0")
    assert code == 0 and rep["result"]["count"] == 1


def test_worked_cone_census(tmp_path):
    code, rep = run(tmp_path, "cone-census", "--source", "a,cb~@0", "--target", "cba@0")
    assert code == 0
    summands = [c["summands"] for c in rep["result"]["classes"] if c["nonzero_maps"]]
    assert ["a@0", "e(-1)@-1"] in summands and ["a,cb~,cba~@-1", "e(0)@-1"] in summands


def test_decompose_complex_file(tmp_path):
    f = tmp_path / "c.json"
    f.write_text(dumps(worked_A()))
    code, rep = run(tmp_path, "decompose", "--complex", str(f))
    assert code == 0 and rep["result"]["summands"][0]["string"] == "a,cb~"
    assert rep["result"]["recomposes"]


def test_enumerate_strings_dot(tmp_path):
    code, rep = run(tmp_path, "enumerate-strings", "--max-letters", "1", "--dot")
    assert code == 0 and rep["result"]["count"] == 9
    assert all(s["dot"].startswith("digraph") for s in rep["result"]["strings"])


def test_table_markdown(tmp_path, capsys):
    code, rep = run(tmp_path, "table", "--markdown")
    assert code == 0 and all(c["agrees"] for c in rep["result"]["cells"])
    assert "| row | column |" in capsys.readouterr().err


def test_determinism_across_runs_and_threads(tmp_path):
    argv = ["h-fiber", "--profile", '{"0": [1, 2, 1]}', "--profile", '{"0": [1, 1, 0]}',
            "--profile", '{"-1": [0, 1, 1], "0": [1, 1, 1]}']
    _, a = run(tmp_path, *argv, "--threads", "1", name="a.json")
    _, b = run(tmp_path, *argv, "--threads", "1", name="b.json")
    _, c = run(tmp_path, *argv, "--threads", "3", name="c.json")
    assert a["determinism_hash"] == b["determinism_hash"] == c["determinism_hash"]
    strip = lambda r: {k: v for k, v in r.items() if k != "timing"}
    assert strip(a) == strip(c)


def test_threads_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "2")
    assert cli.build_parser().parse_args(["hom-scan"]).threads == 2


def test_sampled_census_is_seeded(tmp_path):
    argv = ["cone-census", "--field", "Q", "--source", "a,cb~@0", "--target", "cba@0", "--samples", "5"]
    _, a = run(tmp_path, *argv, "--seed", "4", name="a.json")
    _, b = run(tmp_path, *argv, "--seed", "4", name="b.json")
    assert a["result"]["exhaustive"] is False and a["determinism_hash"] == b["determinism_hash"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "gentle_discrete.cli", "uniqueness", "--algebra",
                          "lambda:2,3,0", "--max-letters", "4"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["result"]["ok"]
