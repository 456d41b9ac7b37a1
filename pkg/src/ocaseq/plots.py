"""Figure rendering for search reports and cycle decompositions.

Figures go straight to files (Agg backend), so these helpers work in
headless runs; matplotlib is imported lazily to keep the import cost
out of the non-plotting paths.
"""

from __future__ import annotations

from .dynsys import CycleDecomposition
from .enumeration import SearchReport


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _bar_chart(ax, lengths, counts) -> None:
    xs = range(len(lengths))
    ax.bar(xs, counts, color="#33669a", width=0.8)
    step = max(1, len(lengths) // 32)
    ax.set_xticks(list(xs)[::step])
    ax.set_xticklabels([str(v) for v in lengths][::step],
                       rotation=90 if len(lengths) > 12 else 0, fontsize=8)
    ax.margins(x=0.01)


def save_max_cycle_histogram(report: SearchReport, path: str) -> None:
    """Bar chart of maximum cycle length against number of OCA pairs."""
    plt = _pyplot()
    lengths = [length for length, _ in report.max_cycle_histogram]
    counts = [count for _, count in report.max_cycle_histogram]
    fig, ax = plt.subplots(figsize=(9, 4.2))
    _bar_chart(ax, lengths, counts)
    ax.set_xlabel("maximum cycle length")
    ax.set_ylabel("OCA pairs")
    ax.set_title(f"Maximum cycle lengths, diameter {report.diameter} "
                 f"({report.oca_pairs} OCA pairs)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_cycle_length_chart(decomposition: CycleDecomposition, path: str,
                            title: str = "Cycle decomposition") -> None:
    """Bar chart of cycle length against multiplicity for one rule pair."""
    plt = _pyplot()
    lengths = [length for length, _ in decomposition.cycles]
    counts = [count for _, count in decomposition.cycles]
    fig, ax = plt.subplots(figsize=(7, 4))
    _bar_chart(ax, lengths, counts)
    ax.set_xlabel("cycle length")
    ax.set_ylabel("cycles")
    ax.set_title(f"{title} ({decomposition.total_states} states)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
