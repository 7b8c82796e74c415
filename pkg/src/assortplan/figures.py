"""Rendering of benchmark reports to CSV and figure files."""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Any

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

CSV_COLUMNS = [
    "trial", "seed", "exact_revenue", "exact_iterations",
    "constrained_revenue", "constrained_role", "beta_structural",
    "certified", "oracle_p0", "oracle_p2", "part_sponsored",
    "part_organic", "exact_gap", "beta_inst", "bound_factor",
    "approx_ratio",
]


def write_trials_csv(report: dict[str, Any], path: str | Path) -> None:
    """One row per trial; oracle columns stay empty when uncertified."""
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, extrasaction="ignore")
        writer.writeheader()
        for row in report["rows"]:
            writer.writerow({k: row.get(k, "") for k in CSV_COLUMNS})


def save_ratio_histogram(report: dict[str, Any], path: str | Path) -> None:
    """Distribution of achieved-over-optimal revenue on certified trials,
    with the worst certified guarantee marked."""
    certified = [r for r in report["rows"] if r["certified"]]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if certified:
        ratios = [r["approx_ratio"] for r in certified]
        bound = min(r["bound_factor"] for r in certified)
        ax.hist(ratios, bins=20, range=(0.0, 1.0), color="#4878a8", edgecolor="white")
        ax.axvline(bound, color="#b03030", linestyle="--",
                   label=f"worst certified bound {bound:.3f}")
        ax.legend(loc="upper left")
    else:
        ax.text(0.5, 0.5, "no certified trials", ha="center", va="center",
                transform=ax.transAxes)
    ax.set_xlabel("constrained revenue / optimal revenue")
    ax.set_ylabel("trials")
    ax.set_title("Approximation ratio distribution")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_revenue_scatter(report: dict[str, Any], path: str | Path) -> None:
    """Solver revenue against oracle revenue on certified trials."""
    certified = [r for r in report["rows"] if r["certified"]]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if certified:
        top = max(max(r["oracle_p0"] for r in certified),
                  max(r["oracle_p2"] for r in certified)) * 1.05 + 1e-9
        ax.plot([0, top], [0, top], color="#999999", linewidth=0.8, zorder=1)
        ax.scatter([r["oracle_p0"] for r in certified],
                   [r["exact_revenue"] for r in certified],
                   s=18, color="#2a7d2a", label="exact vs unconstrained optimum", zorder=2)
        ax.scatter([r["oracle_p2"] for r in certified],
                   [r["constrained_revenue"] for r in certified],
                   s=18, color="#4878a8", marker="x",
                   label="pipeline vs constrained optimum", zorder=3)
        ax.set_xlim(0, top)
        ax.set_ylim(0, top)
        ax.legend(loc="upper left")
    else:
        ax.text(0.5, 0.5, "no certified trials", ha="center", va="center",
                transform=ax.transAxes)
    ax.set_xlabel("oracle revenue")
    ax.set_ylabel("solver revenue")
    ax.set_title("Solver vs oracle revenue")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report_files(report: dict[str, Any], out_dir: str | Path) -> list[Path]:
    """Render the delimited trial table and the figures next to it."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / "trials.csv", out / "ratio_histogram.png", out / "revenue_scatter.png"]
    write_trials_csv(report, paths[0])
    save_ratio_histogram(report, paths[1])
    save_revenue_scatter(report, paths[2])
    return paths
