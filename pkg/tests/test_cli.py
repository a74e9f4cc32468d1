from pathlib import Path

import pytest

from chanest import cli
from chanest.harness import read_csv


def test_run_with_config_file_and_overrides(tmp_path, capsys):
    cfg = tmp_path / "sweep.yaml"
    cfg.write_text(
        "m: 4\nn: 4\nl: 1\nk_db: 7.0\nsnr_db: [0.0, 5.0]\n"
        "trials: 4\ngrid_bits: 3\nestimators: [mips]\nseed: 9\n"
    )
    out = tmp_path / "rows.csv"
    code = cli.main(
        ["run", "--config", str(cfg), "--trials", "2", "--out", str(out)]
    )
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 2
    assert all(r["trials"] == 2 for r in rows)  # override wins over file
    assert all(r["seed"] == 9 for r in rows)
    printed = capsys.readouterr().out
    assert "mips" in printed
    assert str(out) in printed


def test_run_without_config_file_uses_flags_only(tmp_path):
    out = tmp_path / "rows.csv"
    code = cli.main(
        [
            "run", "--m", "4", "--n", "4", "--l", "0", "--snr", "0",
            "--trials", "2", "--grid-bits", "3", "--estimators", "mips",
            "--fixed-theta0", "0.2", "--fixed-g0", "0.8,-0.1",
            "--out", str(out),
        ]
    )
    assert code == 0
    assert len(read_csv(out)) == 1


def test_unknown_config_keys_are_an_error(tmp_path):
    cfg = tmp_path / "sweep.yaml"
    cfg.write_text("m: 4\nbogus_key: 1\n")
    with pytest.raises(SystemExit):
        cli.main(["run", "--config", str(cfg)])


def test_bad_estimator_name_is_an_error():
    with pytest.raises(SystemExit):
        cli.main(["run", "--estimators", "nonsense", "--trials", "1"])


def test_fixed_gain_requires_a_pair():
    with pytest.raises(SystemExit):
        cli.main(["run", "--fixed-g0", "0.5"])


def test_selftest_passes_and_prints_check_lines(capsys):
    code = cli.main(["selftest"])
    out = capsys.readouterr().out
    assert code == 0
    assert "✓" in out
    assert "✗" not in out
    assert "all checks passed" in out
