"""File-based figure rendering for the CLI report paths.

Everything here draws to a file with the Agg backend and returns the path;
no interactive windows, no global style state beyond the backend choice.
The solver modules never import this.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .curve import SCurve, LevelSegment
from .frontier import ValueCurve

__all__ = ["render_curve", "render_s_curve", "render_level_sets"]


def render_curve(curve: ValueCurve, path: str, title: str = "") -> str:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(curve.lambdas, curve.values, marker=".", linewidth=1.2)
    ax.set_xlabel("information budget (nats)")
    ax.set_ylabel("expected utility")
    ax.set_title(title or f"{curve.branch} frontier")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_s_curve(s: SCurve, path: str, title: str = "") -> str:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    loss_x = [-p.lam for p in s.losses.points]
    ax.plot(loss_x, s.losses.values, marker=".", linewidth=1.2, label="losses")
    ax.plot(s.gains.lambdas, s.gains.values, marker=".", linewidth=1.2, label="gains")
    # The two zero-budget values are distinct in general; mark both.
    ax.plot([0.0], [s.loss_origin], marker="o", color="C0")
    ax.plot([0.0], [s.gain_origin], marker="o", color="C1")
    ax.axvline(0.0, color="grey", linewidth=0.6, alpha=0.6)
    ax.set_xlabel("signed information budget (nats)")
    ax.set_ylabel("expected utility")
    ax.set_title(title or "value of information, both branches")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _to_xy(p) -> tuple:
    return (p[1] + 0.5 * p[2], math.sqrt(3.0) / 2.0 * p[2])


def render_level_sets(segments, path: str, title: str = "",
                      reference_segments=None) -> str:
    """Draw level segments inside the 2-simplex.

    reference_segments, when given, are drawn dotted underneath, which is
    how a transformed family is compared against the plain one.
    """
    fig, ax = plt.subplots(figsize=(5.0, 4.6))
    corners = [(0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3.0) / 2.0), (0.0, 0.0)]
    ax.plot([c[0] for c in corners], [c[1] for c in corners], color="black", linewidth=1.0)

    def draw(seg: LevelSegment, style: str, color: str) -> None:
        if len(seg.endpoints) != 2:
            return
        (x1, y1), (x2, y2) = _to_xy(seg.endpoints[0]), _to_xy(seg.endpoints[1])
        ax.plot([x1, x2], [y1, y2], style, color=color, linewidth=1.1)

    if reference_segments:
        for seg in reference_segments:
            draw(seg, ":", "grey")
    for seg in segments:
        draw(seg, "-", "C0")
    ax.set_aspect("equal")
    ax.set_axis_off()
    ax.set_title(title or "expected-utility level sets")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
