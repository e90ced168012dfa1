"""Figures rendered next to the CSV outputs (PNG, non-interactive backend)."""

from __future__ import annotations

import math
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 100,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "legend.fontsize": 8,
    "savefig.bbox": "tight",
}


def _save(fig, path: str, stamp: str) -> str:
    # no Software/date chunks, so the bytes depend only on the data
    fig.savefig(path, format="png", metadata={"Software": None, "Description": stamp})
    plt.close(fig)
    return path


def counting_figure(rows: Sequence[dict], window: tuple[float, float], slope: float,
                    path: str, stamp: str = "", d: int = 2) -> str:
    with plt.rc_context(STYLE):
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))
        L = np.array([r["L"] for r in rows])
        N = np.array([r["N"] for r in rows], dtype=float)
        keep = N > 0
        ax1.loglog(L[keep], N[keep], "o", ms=3, label="N(L)")
        lo, hi = window
        sel = keep & (L >= lo) & (L <= hi)
        if sel.any():
            ref = N[sel][-1] * (L[sel] / L[sel][-1]) ** slope
            ax1.loglog(L[sel], ref, "-", lw=1, label=f"fit slope {slope:.3f}")
        ax1.set_xlabel("L")
        ax1.set_ylabel("count")
        ax1.legend()
        ratio = np.array([r["ratio"] for r in rows], dtype=float)
        ax2.plot(L, ratio, ".-", lw=1, label="total length / (L N)")
        ax2.axhline(d / (d + 1), color="k", lw=0.8, ls="--", label=f"{d}/{d + 1}")
        c_est = np.array([r["C_estimate"] for r in rows], dtype=float)
        ax2.plot(L, c_est, ".-", lw=1, label="C estimate")
        ax2.axhline(6 / math.pi ** 2, color="gray", lw=0.8, ls=":", label="6/π²")
        ax2.set_xlabel("L")
        ax2.set_ylim(0, 1.05)
        ax2.legend()
        return _save(fig, path, stamp)


def histogram_figure(hist, path: str, stamp: str = "", title: str = "") -> str:
    with plt.rc_context(STYLE):
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.8))
        pos = hist.bins.sum(axis=2).T
        x0, x1, y0, y1 = hist.binning.bbox
        im = ax1.imshow(pos, origin="lower", extent=(x0, x1, y0, y1), cmap="viridis",
                        aspect="equal")
        t = np.linspace(0, 2 * math.pi, 200)
        ax1.plot(np.cos(t), np.sin(t), color="w", lw=0.6)
        ax1.set_xlabel("Klein x")
        ax1.set_ylabel("Klein y")
        fig.colorbar(im, ax=ax1, shrink=0.8, label="mass")
        th = hist.bins.sum(axis=(0, 1))
        width = 2 * math.pi / len(th)
        ax2.bar((np.arange(len(th)) + 0.5) * width, th, width=width * 0.9)
        ax2.set_xlabel("θ")
        ax2.set_ylabel("mass")
        if title:
            fig.suptitle(title)
        return _save(fig, path, stamp)


def tv_figure(Ls: Sequence[float], tvs: Sequence[float], path: str, stamp: str = "",
              threshold: float | None = None) -> str:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(Ls, tvs, "o-")
        if threshold is not None:
            ax.axhline(threshold, color="k", ls="--", lw=0.8)
        ax.set_xlabel("L")
        ax.set_ylabel("total variation distance")
        return _save(fig, path, stamp)


def compare_figure(report, path: str, stamp: str = "") -> str:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ls = [r.length_S for r in report.rows]
        ratio = [r.ratio for r in report.rows]
        ax.plot(ls, ratio, ".", ms=3)
        ax.axhline(1.0, color="k", lw=0.8)
        ax.set_xlabel(f"length on {report.labels[0]}")
        ax.set_ylabel(f"length ratio {report.labels[1]} / {report.labels[0]}")
        ax.set_title(f"[{report.ratio_inf:.4f}, {report.ratio_sup:.4f}]  {report.verdict}")
        return _save(fig, path, stamp)
