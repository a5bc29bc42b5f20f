"""Figures for benchmark reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_bench(rows, path, title="Timing by automaton size"):
    """Plot wall time against state count, one line per operation.

    ``rows`` are dicts with at least ``op``, ``n`` and ``wall_ns``. Repeated
    (op, n) rows are averaged. The figure is written to ``path``.
    """
    series: dict[str, dict[int, list[int]]] = {}
    for row in rows:
        series.setdefault(row["op"], {}).setdefault(int(row["n"]), []).append(int(row["wall_ns"]))
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for op in sorted(series):
        pts = sorted(series[op].items())
        xs = [n for n, _ in pts]
        ys = [sum(v) / len(v) / 1e6 for _, v in pts]
        ax.plot(xs, ys, marker="o", label=op)
    ax.set_xlabel("states")
    ax.set_ylabel("wall time (ms)")
    ax.set_yscale("log")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
