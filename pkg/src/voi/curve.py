"""S-shaped value curves and expected-utility level sets.

assemble_s_curve lays the two frontier branches out the way the figures
draw them: losses keyed by negative budget on the left, gains by positive
budget on the right.  The branches generally do not meet at zero, so both
origin values are kept and nothing is interpolated across the axis.
curvature_report certifies the shape claims (concave rising gains, convex
falling losses) numerically.  simplex_level_sets emits the straight-line
level sets of a three-outcome payoff on the 2-simplex, before or after a
monotone rescaling of the payoffs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decisions import DecisionProblem
from .frontier import ValueCurve
from .shannon import trace_curve

__all__ = [
    "SCurve",
    "CurvatureReport",
    "LevelSegment",
    "assemble_s_curve",
    "curvature_report",
    "simplex_level_sets",
    "segment_direction",
]

# Points this close to the terminal value count as the saturated tail,
# where increments legitimately vanish.
_PLATEAU_TOL = 1e-9
_CONCAVITY_TOL = 1e-7
_MONOTONE_SLACK = 1e-12
_GEOM_TOL = 1e-12


@dataclass(frozen=True)
class SCurve:
    """Both frontier branches of one problem over a common budget grid."""

    gains: ValueCurve
    losses: ValueCurve

    def __post_init__(self) -> None:
        if self.gains.branch != "upper" or self.losses.branch != "lower":
            raise ValueError("SCurve: gains must be an upper curve and losses a lower curve")
        if self.gains.points[0].lam != 0.0 or self.losses.points[0].lam != 0.0:
            raise ValueError("SCurve: both branches must start at a zero budget")

    @property
    def gain_origin(self) -> float:
        return self.gains.points[0].value

    @property
    def loss_origin(self) -> float:
        return self.losses.points[0].value

    def signed_points(self):
        """All points on the signed-budget axis: losses at -lam in rising
        order, then gains at +lam.  Both zero-budget rows appear."""
        out = [(-p.lam, p) for p in reversed(self.losses.points)]
        out.extend((p.lam, p) for p in self.gains.points)
        return out


def assemble_s_curve(problem: DecisionProblem, lambdas, max_iterations=None) -> SCurve:
    """Trace both branches over the grid, forcing a zero-budget origin point."""
    grid = np.asarray(lambdas, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("assemble_s_curve: expected a non-empty 1-d budget grid")
    if grid[0] != 0.0:
        grid = np.concatenate([[0.0], grid])
    kwargs = {} if max_iterations is None else {"max_iterations": max_iterations}
    return SCurve(gains=trace_curve(problem, "upper", grid, **kwargs),
                  losses=trace_curve(problem, "lower", grid, **kwargs))


@dataclass(frozen=True)
class CurvatureReport:
    branch: str
    monotone_ok: bool
    curvature_ok: bool
    max_violation: float


def _branch_report(branch: str, lambdas: np.ndarray, values: np.ndarray) -> CurvatureReport:
    if values.size < 3:
        raise ValueError("curvature_report: need at least 3 points per branch")
    v = values if branch == "upper" else -values

    terminal = v[-1]
    saturated = v >= terminal - _PLATEAU_TOL
    increments = np.diff(v)
    monotone_ok = True
    worst = -np.inf
    for i, d in enumerate(increments):
        if saturated[i]:
            ok = d >= -_MONOTONE_SLACK
            defect = -d
        else:
            ok = d > 0.0
            defect = -d
        monotone_ok = monotone_ok and bool(ok)
        worst = max(worst, defect if not ok else -np.inf)

    chord = v[:-2] + (v[2:] - v[:-2]) * ((lambdas[1:-1] - lambdas[:-2])
                                         / (lambdas[2:] - lambdas[:-2]))
    defects = chord - v[1:-1]
    curvature_ok = bool(np.all(defects <= _CONCAVITY_TOL))
    worst = max(worst, float(defects.max()))
    return CurvatureReport(branch, monotone_ok, curvature_ok, float(worst))


def curvature_report(curve) -> CurvatureReport:
    """Certify monotonicity and curvature of a traced branch.

    Gains must rise strictly until they saturate and pass the midpoint
    concavity test within 1e-7; losses the mirror image.  For an SCurve
    both branches are tested and the worse outcome is reported under the
    branch name "s".  max_violation is the worst signed defect: positive
    means a test failed by that much, negative is the surviving margin.
    """
    if isinstance(curve, SCurve):
        g = _branch_report("upper", np.array(curve.gains.lambdas), np.array(curve.gains.values))
        l = _branch_report("lower", np.array(curve.losses.lambdas), np.array(curve.losses.values))
        return CurvatureReport("s", g.monotone_ok and l.monotone_ok,
                               g.curvature_ok and l.curvature_ok,
                               max(g.max_violation, l.max_violation))
    if isinstance(curve, ValueCurve):
        return _branch_report(curve.branch, np.array(curve.lambdas), np.array(curve.values))
    raise TypeError("curvature_report: expected an SCurve or ValueCurve")


@dataclass(frozen=True)
class LevelSegment:
    """The slice of the 2-simplex where a three-outcome payoff equals value.

    endpoints holds 0 points (level misses the simplex), 1 (touches a
    vertex), or 2 (a proper segment), each in barycentric coordinates.
    """

    value: float
    endpoints: tuple


def simplex_level_sets(payoffs, values, risk_transform=None):
    """Level segments of a linear payoff on the 2-simplex.

    When a monotone transform is supplied it is applied to the payoffs
    first; the segments stay straight and mutually parallel, only the
    common slope changes, which is the point the transformed family
    demonstrates.  Target values are interpreted on the transformed scale.
    """
    u = [float(x) for x in payoffs]
    if len(u) != 3:
        raise ValueError("simplex_level_sets: exactly three payoffs required")
    if risk_transform is not None:
        u = [float(risk_transform(x)) for x in u]
    if not all(np.isfinite(u)):
        raise ValueError("simplex_level_sets: payoffs must be finite (after any transform)")
    if max(u) - min(u) <= _GEOM_TOL:
        raise ValueError("simplex_level_sets: payoffs are all equal; level sets are degenerate")

    segments = []
    for v in values:
        v = float(v)
        points = []
        for i, j in ((0, 1), (0, 2), (1, 2)):
            if abs(u[i] - u[j]) <= _GEOM_TOL:
                if abs(u[i] - v) <= _GEOM_TOL:
                    points.append(_edge_point(i, j, 1.0))
                    points.append(_edge_point(i, j, 0.0))
                continue
            t = (v - u[j]) / (u[i] - u[j])
            if -_GEOM_TOL <= t <= 1.0 + _GEOM_TOL:
                points.append(_edge_point(i, j, min(max(t, 0.0), 1.0)))
        deduped = []
        for p in sorted(points):
            if not any(max(abs(p[k] - q[k]) for k in range(3)) <= _GEOM_TOL for q in deduped):
                deduped.append(p)
        segments.append(LevelSegment(v, tuple(deduped)))
    return segments


def _edge_point(i: int, j: int, t: float) -> tuple:
    p = [0.0, 0.0, 0.0]
    p[i] = t + 0.0  # keep a clamped -0.0 from leaking into output
    p[j] = (1.0 - t) + 0.0
    return tuple(p)


def segment_direction(segment: LevelSegment) -> np.ndarray:
    """Unit direction of a proper segment, sign-fixed so the first
    coordinate above noise is positive; lets callers compare slopes."""
    if len(segment.endpoints) != 2:
        raise ValueError("segment_direction: segment has no extent")
    d = np.array(segment.endpoints[1], dtype=float) - np.array(segment.endpoints[0], dtype=float)
    norm = float(np.linalg.norm(d))
    if norm <= _GEOM_TOL:
        raise ValueError("segment_direction: endpoints coincide")
    d /= norm
    for x in d:
        if abs(x) > _GEOM_TOL:
            if x < 0:
                d = -d
            break
    return d
