"""Report figures: the fitted two-segment mean and the statistic profile.

Rendering targets files only (Agg backend), so it works headless.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .detection import AnalysisReport


def render_report_figures(report: AnalysisReport, out_dir, stem: str = "report") -> list:
    """Write <stem>_fit.png and <stem>_profile.png into out_dir.

    Returns the list of created paths.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    series = report.series
    n = series.n
    t = np.arange(1, n + 1)
    labels = np.array([series.label_of(int(i)) for i in t])
    change_label = report.changepoint_label

    fit_path = out_dir / f"{stem}_fit.png"
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(labels, series.as_array(), "o", ms=3, color="#666666",
            label="observations")
    ax.plot(labels, report.fit.mean_at(t), "-", color="#c0392b",
            label="fitted two-segment mean")
    ax.axvline(change_label, color="#2c3e50", ls="--", lw=1,
               label=f"slope change at {change_label}")
    ax.set_xlabel("label")
    ax.set_ylabel("value")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(fit_path, dpi=120)
    plt.close(fig)

    profile_path = out_dir / f"{stem}_profile.png"
    fig, ax = plt.subplots(figsize=(8, 4.5))
    cand_labels = np.array([series.label_of(int(k))
                            for k in report.profile.candidates])
    ax.plot(cand_labels, np.abs(report.profile.statistics), "-",
            color="#2c3e50", label="|statistic|")
    for lvl in (90.0, 95.0, 99.0):
        if lvl in report.critical_values:
            ax.axhline(report.critical_values[lvl], ls=":", lw=1,
                       color="#c0392b")
            ax.annotate(f"{lvl:g}%", xy=(cand_labels[0],
                        report.critical_values[lvl]), fontsize=7,
                        va="bottom", color="#c0392b")
    ax.axvline(change_label, color="#888888", ls="--", lw=1)
    ax.set_xlabel("candidate label")
    ax.set_ylabel("|studentized slope change|")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(profile_path, dpi=120)
    plt.close(fig)
    return [fit_path, profile_path]
