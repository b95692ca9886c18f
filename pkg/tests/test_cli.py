import json
import subprocess
import sys

import pytest

from cechgraph.cli import EXIT_BUDGET, EXIT_MISMATCH, EXIT_USAGE, main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_homology_json(capsys):
    code, out, _ = run(capsys, "homology", "--graph", "hypercube:3", "--r", "2")
    doc = json.loads(out)
    assert code == 0 and doc["betti"] == {"2": 7}
    assert doc["homology"][2] == {"dim": 2, "betti_z": 7, "torsion": [], "betti_z2": 7}


def test_homology_floors_scale_and_formats(capsys):
    _, a, _ = run(capsys, "homology", "--graph", "hypercube:3", "--r", "2.5", "--format", "csv")
    _, b, _ = run(capsys, "homology", "--graph", "hypercube:3", "--r", "2", "--format", "csv")
    assert a == b and a.startswith("dim,betti_z,torsion,betti_z2")
    code, text, _ = run(capsys, "homology", "--graph", "cycle:7", "--r", "2", "--format", "text")
    assert code == 0 and "H~1: betti_z=1" in text


def test_complex_command(capsys, tmp_path):
    code, out, _ = run(capsys, "complex", "--graph", "hypercube:2", "--r", "2")
    doc = json.loads(out)
    assert doc["f_vector"] == [4, 6, 4] and len(doc["maximal_faces"]) == 4
    f = tmp_path / "k.txt"
    _, text, _ = run(capsys, "complex", "--graph", "hypercube:2", "--r", "2", "--format", "text")
    f.write_text("\n".join(text.splitlines()[2:]))
    code, out, _ = run(capsys, "homology", "--complex", str(f))
    assert code == 0 and json.loads(out)["betti"] == {"2": 1}


def test_graph_file_selector(capsys, tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("p 5\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 4 0\n")
    code, out, _ = run(capsys, "homology", "--graph", f"file:{f}", "--r", "1")
    assert code == 0 and json.loads(out)["betti"] == {"1": 1}


def test_barcode_command(capsys):
    code, out, _ = run(capsys, "barcode", "--graph", "hypercube:2")
    doc = json.loads(out)
    assert code == 0 and doc["max_scale"] == 3 and doc["max_finite_length"] == 1
    assert {"dim": 2, "birth": 2, "death": 3} in doc["intervals"]
    _, csv, _ = run(capsys, "barcode", "--graph", "hypercube:2", "--format", "csv")
    assert csv.splitlines()[0] == "dim,birth,death"


def test_contiguity_command(capsys):
    code, out, _ = run(capsys, "contiguity", "--n", "2", "--r", "1", "--codomain-delta", "1")
    doc = json.loads(out)
    assert code == 0 and doc["ok"] is False
    assert sorted(doc["witness_coordinates"]) == ["10", "11"]
    _, out, _ = run(capsys, "contiguity", "--n", "3", "--r", "2")
    assert json.loads(out)["ok"] is True


def test_collapse_command(capsys, tmp_path):
    code, out, _ = run(capsys, "collapse", "--graph", "hypercube:3", "--r", "2", "--orders", "5", "--seed", "7")
    doc = json.loads(out)
    assert code == 0 and (doc["lower"], doc["upper"]) == (3, 3) and doc["seed"] == 7
    assert doc["prediction"]["label"] == "conjecture"
    f = tmp_path / "ex.txt"
    f.write_text("1 2 4\n2 3\n3 4\n")
    code, out, _ = run(capsys, "collapse", "--complex", str(f), "--d", "2")
    doc = json.loads(out)
    assert doc["verdict"] == "collapsible"
    seq = tmp_path / "seq.json"
    seq.write_text(json.dumps(doc["sequence"]))
    code, out, _ = run(capsys, "collapse", "--complex", str(f), "--d", "2", "--replay", str(seq))
    assert code == 0 and json.loads(out)["replay"]["ok"]
    code, out, _ = run(capsys, "collapse", "--complex", str(f), "--d", "1", "--replay", str(seq))
    assert code == EXIT_MISMATCH and json.loads(out)["replay"]["failed_step"] is not None
    _, out, _ = run(capsys, "collapse", "--complex", str(f), "--d", "1")
    assert json.loads(out)["verdict"] == "impossible"


def test_verify_table(capsys):
    code, out, err = run(capsys, "verify-table", "--max-n", "3", "--format", "text")
    assert code == 0
    lines = out.splitlines()
    assert lines and all(line.startswith("PASS") for line in lines)
    assert "verifying" in err


def test_verify_table_lists_skipped(capsys):
    code, out, _ = run(capsys, "verify-table", "--max-n", "3", "--budget-faces", "50")
    doc = json.loads(out)
    assert code == 0 and doc["skipped"]
    assert all(c["status"] in ("PASS", "SKIP") for c in doc["cells"])


def test_verify_table_parallel_matches_serial(capsys):
    _, a, _ = run(capsys, "verify-table", "--max-n", "2")
    _, b, _ = run(capsys, "verify-table", "--max-n", "2", "--jobs", "2")
    strip = lambda s: [{k: v for k, v in c.items() if k != "seconds"} for c in json.loads(s)["cells"]]
    assert strip(a) == strip(b)


def test_registry_command(capsys):
    code, out, _ = run(capsys, "registry")
    doc = json.loads(out)
    assert code == 0 and any(e["n"] == 3 and e["r"] == 3 and e["betti"] == {"4": 3} for e in doc["table"])
    assert all(p["label"] == "conjecture" for p in doc["predictions"])


def test_output_is_deterministic(capsys):
    args = ("collapse", "--graph", "hypercube:3", "--r", "3", "--orders", "4", "--seed", "2")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


@pytest.mark.parametrize("args", [
    ("homology", "--graph", "bogus", "--r", "1"),
    ("homology", "--graph", "hypercube:x", "--r", "1"),
    ("homology", "--graph", "torus:3", "--r", "1"),
    ("homology", "--r", "1"),
    ("homology", "--graph", "hypercube:3"),
    ("homology", "--graph", "hypercube:3", "--r", "-1"),
    ("collapse", "--complex", "/nonexistent/file"),
])
def test_usage_errors(capsys, args):
    assert run(capsys, *args)[0] == EXIT_USAGE


def test_argparse_errors_exit_64():
    with pytest.raises(SystemExit) as e:
        main(["nonsense"])
    assert e.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        main(["homology", "--coeff", "q"])
    assert e.value.code == EXIT_USAGE


def test_budget_exit_code(capsys):
    assert run(capsys, "homology", "--graph", "cycle:2", "--r", "1")[0] == EXIT_BUDGET
    code, _, err = run(capsys, "homology", "--graph", "hypercube:4", "--r", "6", "--budget-faces", "1000")
    assert code == EXIT_BUDGET and "size limit" in err


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "cechgraph", "homology", "--graph", "hypercube:2", "--r", "1"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["betti"] == {"1": 1}


def test_collapse_witness_output_replays(tmp_path, capsys):
    K = tmp_path / "K.txt"
    K.write_text("1 2 4\n2 3\n3 4\n")
    assert main(["collapse", "--complex", str(K), "--d", "2"]) == 0
    seq = tmp_path / "seq.json"
    seq.write_text(capsys.readouterr().out)
    assert main(["collapse", "--complex", str(K), "--d", "2", "--replay", str(seq)]) == 0
    assert json.loads(capsys.readouterr().out)["replay"]["ok"] is True
    seq.write_text("[1, 2]")
    assert main(["collapse", "--complex", str(K), "--d", "2", "--replay", str(seq)]) == EXIT_USAGE
