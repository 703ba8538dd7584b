from __future__ import annotations

import json
import subprocess
import sys

import pytest

from holocoh.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_betti_text(capsys):
    code, out, _ = run(capsys, "betti", "--rho", "3", "--max-degree", "4")
    assert code == 0
    assert "[1, 3, 5, 7, 10]" in out and "(match)" in out


def test_betti_json_for_cyclic_and_product(capsys):
    code, out, _ = run(capsys, "betti", "--group", "cyclic", "--order", "8", "--max-degree", "5", "--format", "json")
    assert code == 0 and json.loads(out)["betti"] == [1] * 6
    code, out, _ = run(capsys, "betti", "--group", "product", "--factors", "2,4", "--max-degree", "3", "--format", "json")
    assert json.loads(out)["betti"] == [1, 2, 3, 4]


@pytest.mark.parametrize(
    "argv",
    [
        ["betti", "--group", "gx"],
        ["betti", "--group", "cyclic", "--order", "6"],
        ["betti", "--rho", "3", "--max-degree", "11"],
        ["hilbert", "no_such_presentation"],
        ["restrict", "--rho", "3", "--subgroup", "Q"],
        ["cache", "list"],
    ],
)
def test_usage_and_resource_errors_exit_two(capsys, argv, monkeypatch):
    monkeypatch.delenv("HOLOCOH_CACHE_DIR", raising=False)
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("holocoh:")


def test_verify_passing_target(capsys):
    code, out, _ = run(capsys, "verify", "prop_2_1_4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "pass"
    assert data["reports"][0]["target"] == "prop_2_1_4"


def test_verify_failing_target_names_checks(capsys):
    code, out, err = run(capsys, "verify", "--target", "theorem_1_5", "--rho", "3")
    assert code == 1
    assert "[FAIL] theorem_1_5" in out
    assert "restrict.A.w3" in err and "no candidate tuple passes" in err


def test_hilbert_with_basis(capsys):
    code, out, _ = run(capsys, "hilbert", "prop_2_1_4", "--max-degree", "4", "--basis", "4", "--format", "json")
    data = json.loads(out)
    assert data["dimensions"] == [1, 2, 2, 2, 3]
    assert sorted(data["basis"]) == ["c4", "cx^2", "wx*w3"]


def test_hilbert_from_file(capsys, tmp_path):
    path = tmp_path / "r.pres"
    path.write_text("gen a 1\ngen b 2\nrel a^2\n")
    code, out, _ = run(capsys, "hilbert", str(path), "--max-degree", "3")
    assert code == 0 and "[1, 1, 1, 1]" in out


def test_restrict_to_a(capsys):
    code, out, _ = run(capsys, "restrict", "--rho", "3", "--format", "json")
    data = json.loads(out)
    rows = {r["class"]: r["images"] for r in data["rows"]}
    assert rows["wz"] == [{"candidate": "", "image": "wz"}]
    assert {i["image"] for i in rows["w3"]} == {"w^2*wz + w*wz^2"}


def test_cache_warm_list_clear(capsys, tmp_path):
    d = str(tmp_path)
    code, out, _ = run(capsys, "cache", "warm", "--group", "gz", "--rho", "3", "--max-degree", "3", "--cache-dir", d)
    assert code == 0 and "ranks" in out
    code, out, _ = run(capsys, "cache", "list", "--cache-dir", d, "--format", "json")
    entries = json.loads(out)["entries"]
    assert [e["group"] for e in entries] == ["gz-3"] and entries[0]["current"]
    code, out, _ = run(capsys, "cache", "clear", "--cache-dir", d)
    assert "removed 1" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "holocoh", "hilbert", "ring_Gz", "--max-degree", "3"], capture_output=True, text=True)
    assert proc.returncode == 0 and "[1, 2, 3, 4]" in proc.stdout
