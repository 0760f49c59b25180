"""Command-line entry points: plot-state and plot-sweep."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .figures import save_figure, state_figure, sweep_figure
from .io import (
    InputError,
    load_bundle,
    load_fock_csv,
    load_state,
    load_wavefunction_csv,
)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _out_path(explicit: str | None, source: str, suffix: str, fmt: str) -> str:
    if explicit is not None:
        return explicit
    return str(Path(source).with_suffix("")) + f"_{suffix}.{fmt}"


@click.group()
def main() -> None:
    """Render figures from design-result JSON and its wavefunction/Fock CSVs."""


@main.command("plot-state")
@click.argument("result_path", type=click.Path())
@click.option("--wavefunction", "wf_path", type=click.Path(), default=None,
              help="Wavefunction CSV (default: <result>_wavefunction.csv).")
@click.option("--fock", "fock_path", type=click.Path(), default=None,
              help="Fock-probability CSV (default: <result>_fock.csv).")
@click.option("--target", "target_path", type=click.Path(), default=None,
              help="Optional target wavefunction CSV to overlay.")
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["png", "svg"]), default="png")
@click.option("--which", type=click.Choice(["cost", "fidelity"]), default="cost")
def plot_state(result_path, wf_path, fock_path, target_path, out_path, fmt, which):
    """Two-panel state figure: |psi(q)|^2 and Fock-probability bars."""
    stem = str(Path(result_path).with_suffix(""))
    try:
        record = load_state(result_path, f"best_by_{which}")
        wavefunction = load_wavefunction_csv(wf_path or f"{stem}_wavefunction.csv")
        fock = load_fock_csv(fock_path or f"{stem}_fock.csv")
        target = load_wavefunction_csv(target_path) if target_path else None
    except InputError as exc:
        _fail(str(exc))
    fig = state_figure(record, wavefunction, fock, target=target)
    out = _out_path(out_path, result_path, "state", fmt)
    save_figure(fig, out)
    click.echo(f"wrote {out}")


@main.command("plot-sweep")
@click.argument("bundle_path", type=click.Path())
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["png", "svg"]), default="png")
def plot_sweep(bundle_path, out_path, fmt):
    """Stacked fidelity / success-probability panels versus alpha."""
    try:
        records = load_bundle(bundle_path)
    except InputError as exc:
        _fail(str(exc))
    if not records:
        _fail(f"{bundle_path} contains no plottable records")
    fig = sweep_figure(records)
    out = _out_path(out_path, bundle_path, "sweep", fmt)
    save_figure(fig, out)
    click.echo(f"wrote {out} ({len(records)} points)")


if __name__ == "__main__":
    main()
