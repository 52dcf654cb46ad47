"""Trajectory geometry: gyration radius, pair trajectories, fractal dimension.

The gyration radius of a path up to time t is the root mean square of the
origin distances of its first t visited points,
``R_g(t) = [ (1/t) * sum_{k<=t} r_k^2 ]^(1/2)``, measured about the origin.
Plotting the ensemble mean of R_g against the ensemble mean of the total
length l on a log-log scale gives a line of slope 1/d_f, from which the
fractal dimension d_f is fitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .walks import WalkPath2D

__all__ = [
    "ScalingCurve",
    "ScalarFit",
    "gyration_radius",
    "pair_stock_trajectory",
    "pair_trajectories",
    "rg_vs_length_curve",
    "fit_fractal_dimension",
    "default_t_grid",
]


@dataclass(frozen=True)
class ScalingCurve:
    """Mean (l(t), R_g(t)) pairs over an ensemble, indexed by time."""

    t: np.ndarray
    ell: np.ndarray
    rg: np.ndarray
    n_samples: int

    def __post_init__(self) -> None:
        t = np.asarray(self.t, dtype=int)
        ell = np.asarray(self.ell, dtype=float)
        rg = np.asarray(self.rg, dtype=float)
        for name, arr in (("t", t), ("ell", ell), ("rg", rg)):
            object.__setattr__(self, name, arr)
        if not (len(t) == len(ell) == len(rg)):
            raise ValueError("curve columns must have equal length")
        if np.any(np.diff(ell) <= 0):
            raise ValueError("mean total length must be strictly increasing")
        if np.any(rg < 0):
            raise ValueError("gyration radius cannot be negative")


@dataclass(frozen=True)
class ScalarFit:
    """A fitted scalar with its standard error and abscissa range."""

    value: float
    stderr: float
    range: tuple[float, float]

    def __post_init__(self) -> None:
        if self.stderr < 0:
            raise ValueError("stderr must be nonnegative")


def default_t_grid(n_steps: int, n_points: int = 50) -> np.ndarray:
    """Logarithmically spaced times in [1, n_steps], deduplicated."""
    grid = np.unique(
        np.round(np.geomspace(1, n_steps, n_points)).astype(int)
    )
    return grid


def gyration_radius(path: WalkPath2D, t: int) -> float:
    """R_g(t) for a single path; ensemble averaging is the caller's job."""
    if not 1 <= t <= path.n_steps:
        raise ValueError(f"t={t} outside [1, {path.n_steps}]")
    pos = path.positions[1 : t + 1]
    return float(np.sqrt(np.mean(pos[:, 0] ** 2 + pos[:, 1] ** 2)))


def pair_stock_trajectory(
    series_a: np.ndarray, series_b: np.ndarray
) -> WalkPath2D:
    """2D trajectory of two price series, shifted to start at the origin."""
    a = np.asarray(series_a, dtype=float)
    b = np.asarray(series_b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("series must be 1D and of equal length")
    if len(a) < 2:
        raise ValueError("need at least two observations")
    positions = np.column_stack((a - a[0], b - b[0]))
    steps = np.diff(positions, axis=0)
    step_lengths = np.hypot(steps[:, 0], steps[:, 1])
    return WalkPath2D(positions=positions, step_lengths=step_lengths, config=None)


def pair_trajectories(
    values: np.ndarray, max_pairs: int | None = None, seed: int = 0
) -> Iterator[WalkPath2D]:
    """Trajectories for pairs of columns of a price matrix.

    All N(N-1)/2 pairs by default; ``max_pairs`` draws a reproducible
    subsample for large panels.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[1]
    pairs = list(combinations(range(n), 2))
    if max_pairs is not None and max_pairs < len(pairs):
        rng = np.random.default_rng(seed)
        keep = rng.choice(len(pairs), size=max_pairs, replace=False)
        pairs = [pairs[k] for k in sorted(keep)]
    for i, j in pairs:
        yield pair_stock_trajectory(values[:, i], values[:, j])


def rg_vs_length_curve(
    paths: Iterable[WalkPath2D], t_grid: Sequence[int] | np.ndarray
) -> ScalingCurve:
    """Ensemble means of (l(t), R_g(t)) on ``t_grid``.

    Streams over ``paths`` so pair-trajectory generators of arbitrary
    size can be aggregated without materializing them.
    """
    grid = np.asarray(t_grid, dtype=int)
    if grid.size == 0:
        raise ValueError("empty t grid")
    if np.any(grid < 1):
        raise ValueError("t grid values must be >= 1")
    idx = grid - 1
    sum_ell = np.zeros(grid.size)
    sum_rg = np.zeros(grid.size)
    count = 0
    for path in paths:
        if grid[-1] > path.n_steps:
            raise ValueError(
                f"t={grid[-1]} beyond a path of {path.n_steps} steps"
            )
        pos = path.positions[1:]
        r2 = pos[:, 0] ** 2 + pos[:, 1] ** 2
        rg_all = np.sqrt(np.cumsum(r2) / np.arange(1, len(r2) + 1))
        ell_all = np.cumsum(path.step_lengths)
        sum_ell += ell_all[idx]
        sum_rg += rg_all[idx]
        count += 1
    if count == 0:
        raise ValueError("empty path collection")
    return ScalingCurve(
        t=grid, ell=sum_ell / count, rg=sum_rg / count, n_samples=count
    )


def fit_fractal_dimension(
    curve: ScalingCurve, skip_fraction: float = 0.10
) -> ScalarFit:
    """Fractal dimension from the R_g ~ l^(1/d_f) scaling law.

    Least-squares slope m of log R_g vs log l after discarding the first
    ``skip_fraction`` of the time range as transient; returns d_f = 1/m
    with the propagated standard error.
    """
    t_min = curve.t[-1] * skip_fraction
    mask = curve.t >= max(t_min, 1)
    ell = curve.ell[mask]
    rg = curve.rg[mask]
    if len(ell) < 10 or ell[-1] / ell[0] < 10.0:
        raise ValueError(
            "insufficient span: need >= 10 points over >= 1 decade of l"
        )
    x = np.log(ell)
    y = np.log(rg)
    (slope, intercept), cov = np.polyfit(x, y, 1, cov=True)
    slope_err = float(np.sqrt(cov[0, 0]))
    d_f = 1.0 / slope
    # stderr of 1/m to first order: sigma_m / m^2
    return ScalarFit(
        value=float(d_f),
        stderr=slope_err / slope**2,
        range=(float(ell[0]), float(ell[-1])),
    )
