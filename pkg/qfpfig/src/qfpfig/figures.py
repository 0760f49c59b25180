"""Figure assembly: quadrature/Fock state panels and F/P-vs-alpha sweeps."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .io import FockSeries, StateRecord, SweepRecord, WavefunctionSeries


def state_figure(
    record: StateRecord,
    wavefunction: WavefunctionSeries,
    fock: FockSeries,
    target: WavefunctionSeries | None = None,
):
    """Two-panel figure: |psi(q)|^2 on the left, Fock probabilities on the right.

    Every plotted series is taken verbatim from the loaded files; the optional
    ``target`` series is drawn dashed behind the state.
    """
    fig, (ax_q, ax_n) = plt.subplots(1, 2, figsize=(9, 3.6))
    if target is not None:
        ax_q.plot(target.q, target.abs2, "k--", lw=1.2, label="target")
    ax_q.plot(wavefunction.q, wavefunction.abs2, color="C0", lw=1.8, label="heralded")
    ax_q.set_xlabel("q")
    ax_q.set_ylabel(r"$|\psi(q)|^2$")
    ax_q.legend(frameon=False)

    ax_n.bar(fock.n, fock.prob, color="C0", width=0.8)
    ax_n.set_xlabel("n")
    ax_n.set_ylabel(r"$|c_n|^2$")
    ax_n.set_xticks(fock.n[:: max(1, len(fock.n) // 10)])

    bits = []
    if record.alpha is not None:
        bits.append(rf"$\alpha = {record.alpha:g}$")
    if record.fidelity is not None:
        bits.append(f"F = {record.fidelity:.4f}")
    bits.append(f"P = {record.probability:.4f}")
    fig.suptitle(", ".join(bits))
    fig.tight_layout()
    return fig


def sweep_figure(records: list[SweepRecord]):
    """Stacked panels: fidelity (top) and success probability (bottom) vs alpha.

    One marker series per (number of squeezed bins, component count).
    """
    if not records:
        raise ValueError("sweep bundle contains no records to plot")
    fig, (ax_f, ax_p) = plt.subplots(2, 1, figsize=(5.2, 6.0), sharex=True)
    groups: dict[tuple[int, int], list[SweepRecord]] = {}
    for rec in records:
        groups.setdefault((rec.n_squeezed, rec.n_components), []).append(rec)
    for i, ((n_squeezed, n_components), recs) in enumerate(sorted(groups.items())):
        recs = sorted(recs, key=lambda r: r.alpha)
        alphas = [r.alpha for r in recs]
        label = rf"$N_s = {n_squeezed}$, $Q = {n_components}$"
        ax_f.plot(alphas, [r.fidelity for r in recs], marker="o", color=f"C{i}", label=label)
        ax_p.plot(alphas, [r.probability for r in recs], marker="o", color=f"C{i}", label=label)
    ax_f.set_ylabel("fidelity")
    ax_f.legend(frameon=False)
    ax_p.set_ylabel("success probability")
    ax_p.set_yscale("log")
    ax_p.set_xlabel(r"$\alpha$")
    fig.tight_layout()
    return fig


def save_figure(fig, out_path: str) -> None:
    fig.savefig(out_path)
    plt.close(fig)
