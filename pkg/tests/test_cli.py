import json
import subprocess
import sys
from pathlib import Path

import pytest

from lochness import cli
from lochness import flag_system as F
from lochness import periodic_map as P

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_certify_euler(capsys):
    code, out, _ = run(capsys, "certify", "euler")
    assert code == cli.EXIT_PASS
    assert "none" in out


def test_fixes_all(capsys):
    code, out, _ = run(capsys, "mon", "fixes-all", "--tiling", "3.6.3.6", "--word", "((10)^2 12)^4")
    assert code == 0 and out.strip() == "true"
    code, out, _ = run(capsys, "mon", "fixes-all", "--tiling", "3.6.3.6", "--word", "0")
    assert code == 1 and out.strip() == "false"


def test_ends_probe_line(capsys):
    code, out, _ = run(capsys, "ends", "probe", "--graph", "line", "--r", "3", "--R", "10")
    assert code == 0 and "components=2" in out


def test_ends_certify_exit_codes(capsys):
    assert run(capsys, "ends", "certify", "--graph", "hex")[0] == 0
    assert run(capsys, "ends", "certify", "--graph", "line", "--schedule", "1:4,2:6")[0] == 1


def test_usage_errors(capsys):
    assert run(capsys, "mon", "eval", "--tiling", "3.6.3.6", "--word", "0a1")[0] == cli.EXIT_USAGE
    assert run(capsys, "mon", "eval", "--tiling", "5.5.5", "--word", "0")[0] == cli.EXIT_USAGE
    assert run(capsys, "ends", "probe", "--graph", "line", "--r", "5", "--R", "3")[0] == cli.EXIT_USAGE
    assert run(capsys, "ends", "certify", "--graph", "grid", "--schedule", "4:2")[0] == cli.EXIT_USAGE
    assert run(capsys, "cover", "patch", "--tiling", "3.6.3.6", "--radii", "6,4")[0] == cli.EXIT_USAGE
    assert run(capsys, "frobnicate")[0] == cli.EXIT_USAGE
    code, _, err = run(capsys, "ends", "probe", "--graph", "nope", "--r", "1", "--R", "2")
    assert code == cli.EXIT_USAGE and "unknown graph" in err


def test_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv(cli.CAP_ENV, "50")
    assert run(capsys, "cover", "patch", "--tiling", "3.6.3.6", "--radius", "8")[0] == cli.EXIT_CAP
    assert run(capsys, "ends", "probe", "--graph", "grid", "--r", "2", "--R", "20")[0] == cli.EXIT_CAP
    monkeypatch.delenv(cli.CAP_ENV)
    assert run(capsys, "cover", "patch", "--tiling", "3.6.3.6", "--radius", "8")[0] == cli.EXIT_PASS
    assert run(capsys, "cover", "finite", "--map", "prism", "--cap", "10")[0] == cli.EXIT_CAP


def test_translation_power_exhausted(capsys):
    code, _, _ = run(capsys, "mon", "translation-power", "--tiling", "3.6.3.6", "--word", "01",
                     "--bound", "1")
    assert code == cli.EXIT_FAIL


def test_cover_patch_csv_golden(capsys):
    code, out, _ = run(capsys, "cover", "patch", "--tiling", "3.6.3.6",
                       "--radii", "4,6,8,10,12", "--csv", "-")
    assert code == 0
    assert out == (GOLDEN / "cover_patch_363636.csv").read_text()


def test_ends_csv_golden(capsys, tmp_path):
    path = tmp_path / "grid.csv"
    assert run(capsys, "ends", "certify", "--graph", "grid", "--csv", str(path))[0] == 0
    assert path.read_text() == (GOLDEN / "ends_grid.csv").read_text()


@pytest.mark.parametrize("argv", [["cover", "patch", "--help"], ["ends", "certify", "--help"],
                                  ["certify", "loch-ness", "--help"]])
def test_help_documents_csv_schemas(capsys, argv):
    assert cli.main(argv) == cli.EXIT_PASS
    out = capsys.readouterr().out
    assert "r,elements,chi,boundary,genus" in out
    assert "r,R,components,ball_size" in out


def test_build_roundtrip(capsys, tmp_path):
    out = tmp_path / "kagome.json"
    assert run(capsys, "build", "--tiling", "3.6.3.6", "--out", str(out))[0] == 0
    pm = P.from_dict(json.loads(out.read_text()))
    assert pm.padj == P.build_tiling("3.6.3.6").padj
    code, text, _ = run(capsys, "validate", "--tiling-file", str(out))
    assert code == 0 and "aut_orbits=2" in text

    cube = tmp_path / "cube.json"
    assert run(capsys, "build", "--map", "cube", "--out", str(cube))[0] == 0
    assert F.from_dict(json.loads(cube.read_text())).adj == F.cube().adj
    code, text, _ = run(capsys, "validate", "--map", str(cube))
    assert code == 0 and "chi=2" in text


def test_validate_rejects_broken_map(capsys, tmp_path):
    data = F.to_dict(F.cube())
    data["adj0"][0], data["adj0"][1] = data["adj0"][1], data["adj0"][0]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(data))
    assert run(capsys, "validate", "--map", str(path))[0] == cli.EXIT_FAIL


def test_cover_finite(capsys, tmp_path):
    dot = tmp_path / "cube.dot"
    code, out, _ = run(capsys, "cover", "finite", "--map", "cube", "--dot", str(dot))
    assert code == 0
    assert "flags=48" in out and "isomorphic_to_base=true" in out and "chi=2" in out
    assert dot.read_text().startswith("graph")


def test_witness_and_eval(capsys):
    code, out, _ = run(capsys, "mon", "witness", "--tiling", "4.4.4.4")
    assert code == 0 and "commute=true independent=true" in out
    code, out, _ = run(capsys, "mon", "eval", "--tiling", "3.6.3.6", "--word", "")
    assert code == 0 and "identity=true" in out


def test_loch_ness_square(capsys):
    code, out, _ = run(capsys, "certify", "loch-ness", "--tiling", "4.4.4.4")
    assert code == cli.EXIT_FAIL and "hypotheses not met" in out


def test_output_is_deterministic(capsys):
    first = run(capsys, "ends", "probe", "--graph", "hex", "--r", "2", "--R", "5", "--dot", "-")
    second = run(capsys, "ends", "probe", "--graph", "hex", "--r", "2", "--R", "5", "--dot", "-")
    assert first == second


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "lochness.cli", "certify", "euler"],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
