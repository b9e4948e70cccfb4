import json
import shutil
import subprocess
import sys

import pytest

from rigidcochains.cli import main
from rigidcochains.tower import PRESETS, preset


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def corrupted_preset(name="cyclic6"):
    T = preset(name)
    z = T.zeta[0].copy()
    down = T.below(0)
    z[0] = next(w for w in range(len(down)) if down[w] != 0)
    return dict(PRESETS[name], zeta_override={"0": z.tolist()})


def test_verify_aw_passes_and_records_seed(capsys):
    code, out, _ = run(capsys, "verify", "aw", "--trials", "5", "--seed", "9")
    assert code == 0
    assert out.startswith("# command=verify section=aw seed=9")
    records = [l for l in out.splitlines() if not l.startswith("#")]
    assert records and all(l.startswith("PASS ") and "seed=9" in l for l in records)


def test_same_seed_same_bytes(capsys):
    a = run(capsys, "verify", "awes", "--preset", "symmetric3", "--trials", "3", "--seed", "4")
    b = run(capsys, "verify", "awes", "--preset", "symmetric3", "--trials", "3", "--seed", "4")
    assert a == b and a[0] == 0


def test_zero_trials_is_vacuous_with_warning(capsys):
    code, out, err = run(capsys, "verify", "aw", "--trials", "0")
    assert code == 0
    assert "warning:" in err and "vacuous" in err
    assert "VACUOUS aw-differential-commutes[Z/4 over Z/2]" in out


def test_corrupted_tower_names_first_failure(tmp_path, capsys):
    path = write(tmp_path, "bad.json", corrupted_preset())
    for section in ("awes", "tn"):
        code, out, err = run(capsys, "verify", section, "--tower", path, "--trials", "2")
        assert code == 1
        assert "FAILED: zeta-section-over-places[k=0]" in err
        assert "FAIL zeta-section-over-places[k=0]" in out


def test_tower_file_round_trip(tmp_path, capsys):
    path = write(tmp_path, "t.json", dict(PRESETS["dihedral8"], name="d8"))
    code, out, _ = run(capsys, "verify", "awes", "--tower", path, "--trials", "2",
                       "--format", "summary")
    assert code == 0 and "awes d8:" in out


@pytest.mark.parametrize("argv", [
    ["verify", "awes", "--preset", "octahedral"],
    ["verify", "awes", "--preset", "cyclic4", "--tower", "x.json"],
    ["verify", "aw", "--trials", "-1"],
    ["verify", "aw", "--config", "/nonexistent/config.json"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_unknown_keys_rejected(tmp_path, capsys):
    cfg = write(tmp_path, "cfg.json", {"seed": 1, "trails": 5})
    code, _, err = run(capsys, "verify", "aw", "--config", cfg)
    assert code == 2 and "trails" in err
    tower = write(tmp_path, "t.json", dict(PRESETS["cyclic4"], colour="red"))
    code, _, err = run(capsys, "verify", "awes", "--tower", tower)
    assert code == 2 and "colour" in err


def test_config_file_values_and_flag_override(tmp_path, capsys):
    cfg = write(tmp_path, "cfg.json", {"seed": 3, "trials": 2, "preset": "cyclic4",
                                       "format": "summary"})
    code, out, _ = run(capsys, "verify", "awes", "--config", cfg, "--seed", "8")
    assert code == 0 and "seed=8" in out and "awes cyclic4:" in out


def test_bad_arguments_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "everything"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_example_sl2_sections(capsys):
    code, out, _ = run(capsys, "example-sl2", "--format", "summary")
    assert code == 0
    for section in ("order relations", "unit groups", "character table",
                    "multiplicity table", "twist class"):
        assert f"{section}:" in out
    assert "# total: 46/46 checks passed" in out


def test_table_output_and_file(tmp_path, capsys):
    out_path = tmp_path / "table.txt"
    code, out, _ = run(capsys, "table", "--kmax", "20", "--out", str(out_path))
    assert code == 0 and out_path.read_text() == out
    assert len(out.splitlines()) == 22
    assert run(capsys, "table", "--kmax", "20")[1] == out
    code, out, _ = run(capsys, "table", "--kmax", "0")
    assert out.splitlines()[1].split() == ["0", "0"]


@pytest.mark.skipif(shutil.which("rigidcochains") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["rigidcochains", "table", "--kmax", "3"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("k+\\k-")
    res = subprocess.run([sys.executable, "-m", "rigidcochains.cli", "verify", "awes",
                          "--preset", "nope"], capture_output=True, text=True)
    assert res.returncode == 2
