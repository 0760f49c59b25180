import numpy as np
import pytest
from pathlib import Path

from qfpfig import (
    InputError,
    load_bundle,
    load_fock_csv,
    load_state,
    load_wavefunction_csv,
    state_figure,
    sweep_figure,
)

DATA = Path(__file__).parent / "data"


class TestLoaders:
    def test_state_record(self):
        rec = load_state(str(DATA / "cat_result.json"))
        assert rec.alpha == 1.0
        assert 0 < rec.probability < 1
        assert np.sum(np.abs(rec.coefficients) ** 2) == pytest.approx(1.0, abs=1e-9)

    def test_vacuum_record(self):
        rec = load_state(str(DATA / "vacuum_result.json"))
        assert rec.coefficients[0] == 1.0
        assert np.all(rec.coefficients[1:] == 0)

    def test_missing_file_names_path(self):
        with pytest.raises(InputError, match="no/such/file.json"):
            load_state("no/such/file.json")

    def test_missing_csv_names_path(self):
        with pytest.raises(InputError, match="absent.csv"):
            load_wavefunction_csv("absent.csv")

    def test_wrong_columns_rejected(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        with pytest.raises(InputError, match="columns"):
            load_fock_csv(str(bad))

    def test_newer_schema_rejected(self, tmp_path):
        doc = tmp_path / "future.json"
        doc.write_text('{"schema_version": 99}')
        with pytest.raises(InputError, match="schema_version"):
            load_state(str(doc))

    def test_bundle(self):
        records = load_bundle(str(DATA / "bundle.json"))
        assert len(records) == 3
        assert sorted(r.alpha for r in records) == [0.5, 1.0, 1.5]

    def test_reads_are_reproducible(self):
        a = load_wavefunction_csv(str(DATA / "cat_result_wavefunction.csv"))
        b = load_wavefunction_csv(str(DATA / "cat_result_wavefunction.csv"))
        assert np.array_equal(a.q, b.q)
        assert np.array_equal(a.abs2, b.abs2)


class TestStateFigure:
    def test_vacuum_two_panels(self):
        rec = load_state(str(DATA / "vacuum_result.json"))
        wf = load_wavefunction_csv(str(DATA / "vacuum_result_wavefunction.csv"))
        fock = load_fock_csv(str(DATA / "vacuum_result_fock.csv"))
        fig = state_figure(rec, wf, fock)
        assert len(fig.axes) == 2
        # single Gaussian curve...
        (line,) = fig.axes[0].get_lines()
        assert np.array_equal(line.get_ydata(), wf.abs2)
        assert np.argmax(line.get_ydata()) == pytest.approx(len(wf.q) // 2, abs=1)
        # ...and all probability on the n = 0 bar
        heights = [p.get_height() for p in fig.axes[1].patches]
        assert heights[0] == pytest.approx(1.0)
        assert max(heights[1:]) == 0.0

    def test_cat_series_match_csv_exactly(self):
        rec = load_state(str(DATA / "cat_result.json"))
        wf = load_wavefunction_csv(str(DATA / "cat_result_wavefunction.csv"))
        fock = load_fock_csv(str(DATA / "cat_result_fock.csv"))
        fig = state_figure(rec, wf, fock, target=wf)
        target_line, state_line = fig.axes[0].get_lines()
        assert np.array_equal(state_line.get_xdata(), wf.q)
        assert np.array_equal(state_line.get_ydata(), wf.abs2)
        assert np.array_equal(target_line.get_ydata(), wf.abs2)
        heights = np.array([p.get_height() for p in fig.axes[1].patches])
        assert np.array_equal(heights, fock.prob)

    def test_cat_is_even_dominated(self):
        fock = load_fock_csv(str(DATA / "cat_result_fock.csv"))
        assert np.sum(fock.prob[0::2]) > 0.99


class TestSweepFigure:
    def test_three_point_layout(self):
        records = load_bundle(str(DATA / "bundle.json"))
        fig = sweep_figure(records)
        assert len(fig.axes) == 2
        (line_f,) = fig.axes[0].get_lines()
        (line_p,) = fig.axes[1].get_lines()
        assert list(line_f.get_xdata()) == [0.5, 1.0, 1.5]
        by_alpha = {r.alpha: r for r in records}
        assert list(line_f.get_ydata()) == [by_alpha[a].fidelity for a in (0.5, 1.0, 1.5)]
        assert list(line_p.get_ydata()) == [by_alpha[a].probability for a in (0.5, 1.0, 1.5)]

    def test_single_point(self):
        records = load_bundle(str(DATA / "bundle.json"))[:1]
        fig = sweep_figure(records)
        (line,) = fig.axes[0].get_lines()
        assert len(line.get_xdata()) == 1

    def test_empty_bundle_raises(self):
        with pytest.raises(ValueError, match="no records"):
            sweep_figure([])
