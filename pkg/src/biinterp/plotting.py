"""Figures written next to a report file."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_COLOURS = {"pass": "#3a7d44", "fail": "#b3261e", "skipped": "#9e9e9e"}


def figure_paths(report_path) -> dict[str, Path]:
    p = Path(report_path)
    stem = p.with_suffix("")
    return {"summary": Path(f"{stem}.summary.png"), "width": Path(f"{stem}.width.png")}


def write_figures(reports, report_path) -> list[Path]:
    """Checked counts per suite, plus the width histogram when sl3-width ran."""
    paths = figure_paths(report_path)
    written = []
    fig, ax = plt.subplots(figsize=(8, 0.4 * max(len(reports), 3) + 1))
    names = [r.suite for r in reports]
    counts = [max(r.checked, 1) for r in reports]
    ax.barh(names, counts, color=[_COLOURS[r.status] for r in reports])
    ax.set_xscale("log")
    ax.invert_yaxis()
    ax.set_xlabel("items checked (log scale)")
    ax.set_title("suite outcomes: green pass, red fail, grey skipped")
    fig.tight_layout()
    fig.savefig(paths["summary"], dpi=100, metadata={"Software": None})
    plt.close(fig)
    written.append(paths["summary"])

    width_report = next((r for r in reports if r.suite == "sl3-width" and r.details.get("widths")), None)
    if width_report is not None:
        widths = width_report.details["widths"]
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.hist(widths, bins=range(0, max(widths) + 2), color="#3f51b5")
        ax.set_xlabel("elementary factors")
        ax.set_ylabel("elements")
        ax.set_title(f"width of SL3 decompositions (max {max(widths)}, bound {width_report.details['bound']})")
        fig.tight_layout()
        fig.savefig(paths["width"], dpi=100, metadata={"Software": None})
        plt.close(fig)
        written.append(paths["width"])
    return written
