"""Optional SVG charts (needs matplotlib). CSV files remain the canonical output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .metrics import I, QI, QR, QS, R, S, TESTED  # noqa: E402


def _save(fig, path):
    # fixed hash salt keeps the SVG byte-identical across runs
    matplotlib.rcParams["svg.hashsalt"] = "sitqr"
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def run_chart(outcome, path):
    t = outcome.trajectory
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(t[:, S] + t[:, QS], label="S + Q_S")
    ax.plot(t[:, I] + t[:, QI], label="I + Q_I")
    ax.plot(t[:, R], label="R")
    ax.plot(t[:, QS] + t[:, QI] + t[:, QR], label="quarantined")
    ax.plot(t[:, TESTED], label="tested")
    ax.axhline(outcome.i_p, ls="--", color="k", lw=0.8)
    ax.set_xlabel("day")
    ax.set_ylabel("nodes")
    ax.legend()
    _save(fig, path)


def _errorbar(ax, x, stats, label):
    mean = [s[0] for s in stats]
    lo = [s[0] - s[1] for s in stats]
    hi = [s[2] - s[0] for s in stats]
    ax.errorbar(x, mean, yerr=[lo, hi], capsize=3, marker="o", label=label)


def sweep_chart(groups: dict, path):
    fig, (a1, a2, a3) = plt.subplots(1, 3, figsize=(14, 4))
    for label, pts in groups.items():
        x = [p.settings.lambda1 for p in pts]
        _errorbar(a1, x, [p.ip for p in pts], label)
        _errorbar(a2, x, [p.dq for p in pts], label)
        a3.plot(x, [p.mean_f for p in pts], marker="o", label=label)
    a1.set_ylabel("peak infection")
    a2.set_ylabel("total quarantine days")
    a3.set_ylabel("mean utility")
    a3.set_yscale("log")
    for ax in (a1, a2, a3):
        ax.set_xlabel("lambda1")
        ax.legend()
    fig.tight_layout()
    _save(fig, path)


def delay_chart(res, path):
    fig, ax = plt.subplots(figsize=(7, 4))
    x = [p.settings.delay for p in res.points]
    _errorbar(ax, x, [p.ip for p in res.points], "peak infection")
    ax2 = ax.twinx()
    dq = [p.dq for p in res.points]
    ax2.plot(x, [d[0] for d in dq], "s--", color="tab:blue", label="quarantine days")
    ref = res.extra["reference"]
    ax.axhspan(ref.ip[1], ref.ip[2], color="tab:red", alpha=0.15)
    ax.set_xlabel("test-1 result delay (days)")
    ax.set_ylabel("peak infection")
    ax2.set_ylabel("total quarantine days")
    fig.tight_layout()
    _save(fig, path)
