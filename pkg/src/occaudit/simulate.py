"""Leaky-pipeline dynamics: gap-vs-imbalance regression and iterated
composition of an occupation's gender share with uncertainty bands."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DataError, NumericError


@dataclass
class GapRegression:
    slope: float
    intercept: float
    rss: float
    n_points: int

    def gap_at(self, pi: float) -> float:
        return self.slope * pi + self.intercept


@dataclass
class TraceStep:
    t: int
    central: float
    band_lo: float
    band_hi: float


@dataclass
class SimulationTrace:
    pi0: float
    steps: list[TraceStep]

    def to_rows(self):
        return [(s.t, s.central, s.band_lo, s.band_hi) for s in self.steps]


def fit_gap_regression(points: Sequence[tuple[float, float]]) -> GapRegression:
    """Ordinary least squares of gap on imbalance."""
    if len(points) < 2:
        raise DataError("need at least 2 (pi, gap) points")
    x = np.array([p for p, _ in points], dtype=float)
    y = np.array([g for _, g in points], dtype=float)
    xc = x - x.mean()
    sxx = float(np.sum(xc * xc))
    if sxx == 0.0:
        raise NumericError("degenerate design: all imbalance values equal")
    slope = float(np.sum(xc * (y - y.mean())) / sxx)
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (slope * x + intercept)
    return GapRegression(slope=slope, intercept=intercept, rss=float(resid @ resid), n_points=len(points))


def step(pi_t: float, tpr_g: float, gap_t: float) -> float:
    """Next-period share of gender g when the candidate pool is the true positives.

    The complementary gender's TPR is tpr_g - gap_t; the result equals the
    true-positive composition with that pair.
    """
    tpr_other = tpr_g - gap_t
    if not (0.0 < tpr_other <= 1.0) or not (0.0 < tpr_g <= 1.0):
        raise NumericError(
            f"infeasible TPR pair: tpr_g={tpr_g}, tpr_other={tpr_other}"
        )
    return pi_t * tpr_g / (pi_t * tpr_g + (1.0 - pi_t) * tpr_other)


def default_tpr_grid(n: int = 21, lo: float = 0.5, hi: float = 1.0) -> np.ndarray:
    return np.linspace(lo, hi, n)


def run(
    pi0: float,
    horizon: int,
    regression: GapRegression,
    tpr_grid: Sequence[float] | None = None,
) -> SimulationTrace:
    """Iterate the composition map for ``horizon`` steps.

    At each step the gap comes from the fitted regression; every feasible
    TPR value in the grid yields a candidate next share. The central
    trajectory follows the median feasible grid value; the band is the
    [min, max] envelope of the candidates, clamped to [0, 1].
    """
    if horizon < 1:
        raise DataError("horizon must be >= 1")
    grid = np.asarray(tpr_grid if tpr_grid is not None else default_tpr_grid(), dtype=float)
    if grid.size == 0:
        raise DataError("TPR grid is empty")
    steps = [TraceStep(t=0, central=pi0, band_lo=pi0, band_hi=pi0)]
    pi = pi0
    for t in range(1, horizon + 1):
        gap = regression.gap_at(pi)
        feasible = grid[(grid > max(0.0, gap)) & (grid <= min(1.0, 1.0 + gap))]
        if feasible.size == 0:
            raise NumericError(f"no feasible TPR grid value for gap {gap} at step {t}")
        candidates = np.clip([step(pi, g, gap) for g in feasible], 0.0, 1.0)
        central_tpr = float(feasible[(feasible.size - 1) // 2])
        pi = float(np.clip(step(pi, central_tpr, gap), 0.0, 1.0))
        steps.append(
            TraceStep(t=t, central=pi, band_lo=float(np.min(candidates)),
                      band_hi=float(np.max(candidates)))
        )
    return SimulationTrace(pi0=pi0, steps=steps)


def traces_to_csv(traces: Sequence[SimulationTrace], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["subplot", "pi0", "t", "central", "band_lo", "band_hi"])
        for i, trace in enumerate(traces):
            for s in trace.steps:
                w.writerow([i, repr(trace.pi0), s.t, repr(s.central),
                            repr(s.band_lo), repr(s.band_hi)])
