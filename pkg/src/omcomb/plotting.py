"""Report figures rendered next to the delimited outputs."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .spectrum import CombMetrics, CombSpectrum  # noqa: E402

DB_FLOOR = -200.0


def save_spectrum_figure(comb: CombSpectrum, metrics: CombMetrics, path) -> None:
    """Stem plot of the output comb, amplitudes in dB relative to the
    largest line, with the presence threshold drawn."""
    amp = np.abs(comb.amp_out)
    ref = amp.max()
    orders = comb.ks / comb.n
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(amp / ref)
    db = np.maximum(db, DB_FLOOR)

    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.vlines(orders, DB_FLOOR, db, color="tab:blue", lw=1.0)
    ax.plot(orders, db, ".", color="tab:blue", ms=3)
    thr_db = 20.0 * math.log10(metrics.threshold_rel * metrics.reference / ref)
    ax.axhline(thr_db, color="tab:red", ls="--", lw=0.8,
               label=f"presence threshold ({metrics.threshold_rel:g} rel.)")
    present = np.isin(comb.ks, metrics.present_ks)
    ax.plot(orders[present], db[present], "o", color="tab:orange", ms=4,
            mfc="none", label=f"{present.sum()} lines present")
    ax.set_xlabel(r"sideband order $\omega / \omega_b$")
    ax.set_ylabel("amplitude (dB rel. largest line)")
    ax.set_ylim(DB_FLOOR, 5.0)
    ax.legend(loc="upper right", fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_sweep_figure(rows: list[dict], axis: str, path) -> None:
    """Cutoff orders and repetition frequency against the swept value."""
    ok = [r for r in rows if not r.get("error")]
    if not ok:
        return
    x = [r["value"] for r in ok]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.5, 5.5), sharex=True)
    ax1.plot(x, [r["cutoff_pos"] for r in ok], "o-", label="cutoff_pos")
    ax1.plot(x, [r["cutoff_neg"] for r in ok], "s-", label="cutoff_neg")
    ax1.set_ylabel(r"cutoff order ($\omega_b$)")
    ax1.legend(fontsize=8)
    ax1.grid(alpha=0.3)
    ax2.plot(x, [r["f_rep_over_omega_b"] for r in ok], "d-", color="tab:green")
    ax2.set_ylabel(r"$f_\mathrm{rep} / \omega_b$")
    ax2.set_xlabel(axis)
    ax2.grid(alpha=0.3)
    if len(x) > 1 and min(x) > 0 and max(x) / max(min(x), 1e-300) > 50:
        ax2.set_xscale("log")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
