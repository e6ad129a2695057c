"""Optional SVG output. matplotlib is imported lazily so the simulator core
never needs a graphics stack."""

import logging
import os
from collections.abc import Sequence

from cli.montecarlo import SweepResult


def plot_curves(
    path: str,
    curves: Sequence[SweepResult],
    fingerprint: str,
    seed: int,
    title: str = "",
) -> str | None:
    """Log-log P_L vs p with the uncoded line P_L = p.

    Returns the path written, or None when matplotlib is unavailable.
    """
    try:
        import matplotlib
        from matplotlib.figure import Figure
    except ImportError:
        logging.warning("matplotlib not installed; skipping plot %s", path)
        return None

    fig = Figure(figsize=(6.0, 4.5))
    ax = fig.add_subplot()
    p_all: list[float] = []
    for curve in curves:
        pts = [pt for pt in curve.points if pt.p_physical > 0]
        if not pts:
            continue
        xs = [pt.p_physical for pt in pts]
        ys = [pt.p_l_hat for pt in pts]
        err = [
            [pt.p_l_hat - pt.ci_low for pt in pts],
            [pt.ci_high - pt.p_l_hat for pt in pts],
        ]
        ax.errorbar(xs, ys, yerr=err, marker="o", ms=3, capsize=2, label=curve.label)
        p_all.extend(xs)
    if p_all:
        lo, hi = min(p_all), max(p_all)
        ax.plot([lo, hi], [lo, hi], "k--", lw=1, label="uncoded $P_L = p$")
    ax.set_xscale("log")
    ax.set_yscale("log", nonpositive="mask")
    ax.set_xlabel("physical error probability $p$")
    ax.set_ylabel("logical error rate $P_L$")
    if title:
        ax.set_title(title)
    ax.legend(fontsize="small")
    fig.tight_layout()

    tmp = path + ".tmp"
    with matplotlib.rc_context({"svg.hashsalt": fingerprint}):
        fig.savefig(
            tmp,
            format="svg",
            metadata={
                "Date": None,
                "Description": f"fingerprint={fingerprint} seed={seed}",
            },
        )
    os.replace(tmp, path)
    logging.info("Wrote %s", path)
    return path
