"""Evaluation quantities: coverage, interference time, group distance, hull area."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InputError


def coverage_percentage(final, initial) -> float:
    final = np.asarray(final, dtype=float)
    initial = np.asarray(initial, dtype=float)
    if final.shape != initial.shape:
        raise InputError(f"coverage maps differ in shape: {final.shape} vs {initial.shape}")
    total = float(initial.sum())
    if total == 0:
        return 100.0
    return 100.0 * float(np.minimum(final, initial).sum()) / total


def mean_group_distance(positions, centers, group_a: Sequence[int], group_b: Sequence[int]) -> float:
    """Mean over ticks and cross pairs of the distance between cell centers.

    ``positions`` is a (ticks, agents) array of cell ids; groups hold agent
    column indices.
    """
    group_a, group_b = list(group_a), list(group_b)
    if not group_a or not group_b:
        raise InputError("distance groups must be nonempty")
    if set(group_a) & set(group_b):
        raise InputError("distance groups must be disjoint")
    pos = np.asarray(positions)
    pa = centers[pos[:, group_a]]  # (ticks, |A|, 2)
    pb = centers[pos[:, group_b]]
    d = np.sqrt(((pa[:, :, None, :] - pb[:, None, :, :]) ** 2).sum(axis=3))
    return float(d.mean())


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list[tuple[Fraction, Fraction]]:
    """Hull vertices counter-clockwise, collinear points dropped.

    Coordinates are converted to exact fractions so orientation signs are
    never wrong.
    """
    pts = sorted({(Fraction(float(x)), Fraction(float(y))) for x, y in points})
    if len(pts) < 3:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def hull_area(points) -> float:
    """Area of the convex hull; 0 for fewer than three non-collinear points."""
    hull = convex_hull(points)
    if len(hull) < 3:
        return 0.0
    twice = sum(a[0] * b[1] - b[0] * a[1] for a, b in zip(hull, hull[1:] + hull[:1]))
    return float(abs(twice) / 2)


def mean_hull_area(positions, centers, group: Sequence[int]) -> float:
    """Hull area of a group's positions, averaged over every tick."""
    pos = np.asarray(positions)[:, list(group)]
    cache = {}
    total = 0.0
    for row in pos:
        key = tuple(sorted(set(row.tolist())))
        if key not in cache:
            cache[key] = hull_area(centers[list(key)])
        total += cache[key]
    return total / len(pos) if len(pos) else 0.0


def interference_summary(per_dog: dict[str, float]) -> tuple[float, bool]:
    """Mean interference seconds per dog, and whether the team had no dogs."""
    if not per_dog:
        warnings.warn("no dogs in the team; mean interference time set to 0", stacklevel=2)
        return 0.0, True
    return float(np.mean(list(per_dog.values()))), False


@dataclass
class MetricReport:
    coverage_pct: float
    mean_interference_s: float
    interference_s: dict[str, float]
    mean_pair_distance_m: dict[str, float] = field(default_factory=dict)
    hull_area_m2: float | None = None
    no_dogs: bool = False

    def row(self) -> dict:
        out = {"coverage_pct": self.coverage_pct, "interference_s": self.mean_interference_s}
        for name, v in self.mean_pair_distance_m.items():
            out[f"distance_m[{name}]"] = v
        if self.hull_area_m2 is not None:
            out["hull_area_m2"] = self.hull_area_m2
        return out


def group_name(group_a: Sequence[str], group_b: Sequence[str]) -> str:
    return "+".join(group_a) + "|" + "+".join(group_b)


def report_run(result, scenario, distance_groups=(), hull_group=None) -> MetricReport:
    """Metrics of one simulation run.

    ``distance_groups`` lists (groupA, groupB) pairs of agent ids; ``hull_group``
    names the agents whose operational area is measured.
    """
    ids = scenario.agent_ids
    centers = scenario.grid.centers
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        mean_i, no_dogs = interference_summary(result.interference_s)
    dist = {}
    for ga, gb in distance_groups:
        dist[group_name(ga, gb)] = mean_group_distance(
            result.positions, centers, [ids.index(a) for a in ga], [ids.index(b) for b in gb])
    hull = None
    if hull_group:
        hull = mean_hull_area(result.positions, centers, [ids.index(a) for a in hull_group])
    return MetricReport(result.coverage_pct, mean_i, dict(result.interference_s), dist, hull, no_dogs)


def aggregate(rows: Sequence[dict]) -> dict:
    """Mean and population standard deviation of every numeric column."""
    if not rows:
        raise InputError("nothing to aggregate")
    out = {}
    for key in rows[0]:
        vals = np.array([r[key] for r in rows], dtype=float)
        out[key] = {"mean": float(vals.mean()), "std": float(vals.std()),
                    "min": float(vals.min()), "max": float(vals.max())}
    return out
