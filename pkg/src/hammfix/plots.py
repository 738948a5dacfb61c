"""Figure rendering for phase-scan reports."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .fixpoints import THRESHOLD_RATIO, ScanRow  # noqa: E402

__all__ = ["render_phase_figure"]


def render_phase_figure(rows: Sequence[ScanRow], path: str) -> str:
    """Render a solution-count figure for a scan and save it to ``path``.

    One-dimensional scans (single b value) get a count-versus-a step plot
    with the threshold marked; two-dimensional scans get a colored grid.
    """
    if not rows:
        raise ValueError("no scan rows to plot")
    b_values = sorted({row.b for row in rows})
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    if len(b_values) == 1:
        b = b_values[0]
        ordered = sorted(rows, key=lambda r: r.a)
        ax.step([r.a for r in ordered], [r.count for r in ordered], where="mid", lw=1.8)
        ax.axvline(THRESHOLD_RATIO * b, color="crimson", ls="--", lw=1.2,
                   label=f"threshold a = {THRESHOLD_RATIO * b:.4f}")
        ax.set_xlabel("a")
        ax.set_ylabel("positive fixed points")
        ax.set_yticks([1, 2, 3])
        ax.legend(loc="upper left")
        ax.set_title(f"solution count along b = {b:g}")
    else:
        sc = ax.scatter(
            [r.a for r in rows],
            [r.b for r in rows],
            c=[r.count for r in rows],
            cmap="viridis",
            vmin=1,
            vmax=3,
            s=28,
            marker="s",
        )
        a_lo = min(r.a for r in rows)
        a_hi = max(r.a for r in rows)
        ax.plot(
            [a_lo, a_hi],
            [a_lo / THRESHOLD_RATIO, a_hi / THRESHOLD_RATIO],
            color="crimson",
            ls="--",
            lw=1.2,
            label="threshold curve",
        )
        fig.colorbar(sc, ax=ax, ticks=[1, 2, 3], label="positive fixed points")
        ax.set_xlabel("a")
        ax.set_ylabel("b")
        ax.legend(loc="upper left")
        ax.set_title("solution-count phase diagram")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
