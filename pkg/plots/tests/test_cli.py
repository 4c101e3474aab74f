"""Exercise the hyperdec-plots command line."""

import pytest

from hyperdec_plots.cli import main

from conftest import make_row


def rows_one_group():
    return [make_row(p=p, logical_failures=i)
            for i, p in enumerate((0.001, 0.01, 0.05))]


def test_threshold_writes_both_formats(write_sweep, tmp_path, capsys):
    path = write_sweep(rows_one_group())
    out = tmp_path / "fig.png"
    rc = main(["threshold", str(path), "--out", str(out)])
    assert rc == 0
    captured = capsys.readouterr()
    assert "1 curve(s)" in captured.out
    assert out.exists()
    assert out.with_suffix(".svg").exists()


def test_threshold_missing_file(tmp_path, capsys):
    rc = main(["threshold", str(tmp_path / "absent.csv"),
               "--out", str(tmp_path / "fig.png")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_threshold_no_data_rows(write_sweep, tmp_path, capsys):
    path = write_sweep([])
    rc = main(["threshold", str(path), "--out", str(tmp_path / "fig.png")])
    assert rc == 2
    assert "no data rows" in capsys.readouterr().err


def test_threshold_schema_diagnostic_names_field(write_sweep, tmp_path,
                                                capsys):
    path = write_sweep(rows_one_group())
    rc = main(["threshold", str(path), "--out", str(tmp_path / "fig.png"),
               "--group-by", "bogus"])
    assert rc == 2
    assert "bogus" in capsys.readouterr().err


def test_threshold_axis_flags(write_sweep, tmp_path):
    path = write_sweep(rows_one_group())
    rc = main(["threshold", str(path), "--out", str(tmp_path / "fig.png"),
               "--no-log-x", "--no-log-y", "--y", "timeouts"])
    assert rc == 0


def test_decay_fixture(write_weights, tmp_path, capsys):
    path = write_weights([32, 16, 8, 4])
    out = tmp_path / "decay.png"
    rc = main(["decay", str(path), "--out", str(out)])
    assert rc == 0
    assert out.exists() and out.with_suffix(".svg").exists()


def test_components_fixture(write_sweep, tmp_path):
    path = write_sweep(rows_one_group())
    rc = main(["components", str(path), "--out", str(tmp_path / "c.png")])
    assert rc == 0


def test_missing_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
