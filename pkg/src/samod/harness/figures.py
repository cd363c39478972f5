"""CSV table and bar chart of per-theorem outcome counts."""

from __future__ import annotations

import csv

from .suites import SuiteResult

FIELDS = ("theorem", "pass", "vacuous", "violation", "non_vacuous")


def rows(result: SuiteResult) -> list[tuple]:
    return [(tid, t.passed, t.vacuous, t.violations, t.non_vacuous)
            for tid, t in ((tid, result.tallies[tid]) for tid in result.suite)]


def write_csv(result: SuiteResult, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(FIELDS)
        w.writerows(rows(result))


def write_bar_chart(result: SuiteResult, path: str) -> None:
    """Stacked bars of pass / vacuous / violation counts per theorem."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    data = rows(result)
    ids = [r[0] for r in data]
    x = np.arange(len(ids))
    fig, ax = plt.subplots(figsize=(max(8.0, 0.22 * len(ids)), 4.5))
    bottom = np.zeros(len(ids))
    for col, label, color in ((1, "pass", "#4c9f70"), (2, "vacuous", "#c9c9c9"),
                              (3, "violation", "#d1495b")):
        vals = np.array([r[col] for r in data], dtype=float)
        ax.bar(x, vals, bottom=bottom, label=label, color=color, width=0.8)
        bottom += vals
    ax.set_xticks(x)
    ax.set_xticklabels(ids, rotation=90, fontsize=7)
    ax.set_ylabel("instances")
    ax.set_title(f"Outcomes over {result.instances} instances", pad=24)
    ax.legend(loc="lower right", bbox_to_anchor=(1.0, 1.0), ncol=3, fontsize=8, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
