"""Report rendering: CSV tables plus matplotlib figures written side by side.

Three reports: the SL_2 rank table over the verification grid, the threshold
curves, and the Lagrangian counts against the product oracle.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .matgroup import enumerate_group, group_order_oracle
from .modring import modulus
from .prank import expected_sl2_rank, p_rank
from .symplectic import SymplecticSpace, enumerate_lagrangians, lagrangian_count_oracle
from .verdict import galois_rank_bound, threshold

RANK_GRID = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (5, 2), (2, 3), (3, 3), (2, 4)]
LAGRANGIAN_GRID = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)]
THRESHOLD_PRIMES = (2, 3, 5, 7)

FIG_SIZE = (6.4, 4.0)
FIG_DPI = 150


def _save(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=FIG_DPI)
    plt.close(fig)


def write_rank_report(outdir: Path, *, quick: bool = False) -> list[Path]:
    """rank_table.csv and rank_table.png: computed SL_2 ranks vs expected values."""
    grid = [
        (p, e)
        for p, e in RANK_GRID
        if not quick or group_order_oracle("SL", 2, p, e) <= 5000
    ]
    rows = []
    for p, e in grid:
        rank, _ = p_rank(enumerate_group("SL", 2, modulus(p, e)))
        expected = expected_sl2_rank(p, e)
        rows.append((p, e, 2, rank, expected, rank == expected))

    csv_path = outdir / "rank_table.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["p", "e", "n", "computed_rank", "bound", "match"])
        writer.writerows(rows)

    labels = [f"p={p}\ne={e}" for p, e, *_ in rows]
    computed = [row[3] for row in rows]
    expected = [row[4] for row in rows]
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    xs = range(len(rows))
    ax.bar(xs, computed, color="#4878b0", label="computed rank")
    ax.plot(xs, expected, "o", color="#d65f5f", label="expected value")
    ax.set_xticks(list(xs), labels)
    ax.set_ylabel("p-rank of SL_2(Z/p^e)")
    ax.set_title("Exhaustive rank search vs expected rank table")
    ax.legend()
    fig_path = outdir / "rank_table.png"
    _save(fig, fig_path)
    return [csv_path, fig_path]


def write_threshold_report(outdir: Path, *, g_max: int = 6) -> list[Path]:
    """threshold_table.csv and thresholds.png: threshold and rank bounds by genus."""
    rows = []
    for p in THRESHOLD_PRIMES:
        for g in range(1, g_max + 1):
            rows.append((p, g, threshold(p, g), galois_rank_bound(p, None, g)))

    csv_path = outdir / "threshold_table.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["p", "g", "threshold", "galois_rank_bound"])
        writer.writerows(rows)

    fig, ax = plt.subplots(figsize=FIG_SIZE)
    for p in THRESHOLD_PRIMES:
        gs = [g for q, g, *_ in rows if q == p]
        ts = [t for q, _, t, _ in rows if q == p]
        ax.plot(gs, ts, marker="o", label=f"p = {p}" if p > 2 else "p = 2")
    ax.set_xlabel("torsor dimension g")
    ax.set_ylabel("least r forcing a contradiction")
    ax.set_title("Symbol-count thresholds by dimension")
    ax.legend()
    fig_path = outdir / "thresholds.png"
    _save(fig, fig_path)
    return [csv_path, fig_path]


def write_lagrangian_report(outdir: Path) -> list[Path]:
    """lagrangian_counts.csv and lagrangian_counts.png: enumeration vs oracle."""
    rows = []
    for p, r in LAGRANGIAN_GRID:
        enumerated = len(enumerate_lagrangians(SymplecticSpace(p, r)))
        oracle = lagrangian_count_oracle(p, r)
        rows.append((p, r, enumerated, oracle, enumerated == oracle))

    csv_path = outdir / "lagrangian_counts.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["p", "r", "enumerated", "oracle", "match"])
        writer.writerows(rows)

    labels = [f"p={p}\nr={r}" for p, r, *_ in rows]
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    xs = range(len(rows))
    ax.bar(xs, [row[2] for row in rows], color="#6acc65", label="enumerated")
    ax.plot(xs, [row[3] for row in rows], "k_", markersize=18, label="product oracle")
    ax.set_yscale("log")
    ax.set_xticks(list(xs), labels)
    ax.set_ylabel("Lagrangian subspaces")
    ax.set_title("Lagrangian enumeration vs closed-form count")
    ax.legend()
    fig_path = outdir / "lagrangian_counts.png"
    _save(fig, fig_path)
    return [csv_path, fig_path]


def write_all_reports(outdir: str | Path, *, quick: bool = False) -> list[Path]:
    """Render every report into outdir; returns the files written."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    files += write_rank_report(out, quick=quick)
    files += write_threshold_report(out)
    files += write_lagrangian_report(out)
    return files
