import shutil
from pathlib import Path

import pytest
from click.testing import CliRunner

from qfpfig.cli import main

DATA = Path(__file__).parent / "data"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def workdir(tmp_path):
    for name in (
        "cat_result.json",
        "cat_result_wavefunction.csv",
        "cat_result_fock.csv",
        "vacuum_result.json",
        "vacuum_result_wavefunction.csv",
        "vacuum_result_fock.csv",
        "bundle.json",
    ):
        shutil.copy(DATA / name, tmp_path / name)
    return tmp_path


class TestPlotState:
    def test_default_paths_png(self, runner, workdir):
        res = runner.invoke(main, ["plot-state", str(workdir / "cat_result.json")])
        assert res.exit_code == 0, res.output
        out = workdir / "cat_result_state.png"
        assert out.is_file() and out.stat().st_size > 0

    def test_svg_output(self, runner, workdir):
        res = runner.invoke(
            main, ["plot-state", str(workdir / "vacuum_result.json"), "--format", "svg"]
        )
        assert res.exit_code == 0, res.output
        assert (workdir / "vacuum_result_state.svg").read_text().startswith("<?xml")

    def test_target_overlay(self, runner, workdir):
        res = runner.invoke(
            main,
            [
                "plot-state",
                str(workdir / "cat_result.json"),
                "--target",
                str(workdir / "vacuum_result_wavefunction.csv"),
                "--out",
                str(workdir / "overlay.png"),
            ],
        )
        assert res.exit_code == 0, res.output
        assert (workdir / "overlay.png").is_file()

    def test_missing_csv_exits_2_and_names_path(self, runner, workdir):
        (workdir / "cat_result_wavefunction.csv").unlink()
        res = runner.invoke(main, ["plot-state", str(workdir / "cat_result.json")])
        assert res.exit_code == 2
        assert "cat_result_wavefunction.csv" in res.output

    def test_missing_result_exits_2(self, runner):
        res = runner.invoke(main, ["plot-state", "/no/such.json"])
        assert res.exit_code == 2


class TestPlotSweep:
    def test_bundle_to_png(self, runner, workdir):
        res = runner.invoke(main, ["plot-sweep", str(workdir / "bundle.json")])
        assert res.exit_code == 0, res.output
        assert "3 points" in res.output
        assert (workdir / "bundle_sweep.png").stat().st_size > 0

    def test_empty_bundle_exits_2(self, runner, tmp_path):
        empty = tmp_path / "empty.json"
        empty.write_text('{"schema_version": 1, "records": []}')
        res = runner.invoke(main, ["plot-sweep", str(empty)])
        assert res.exit_code == 2

    def test_not_a_bundle_exits_2(self, runner, workdir):
        res = runner.invoke(main, ["plot-sweep", str(workdir / "cat_result.json")])
        assert res.exit_code == 2
