"""2D Levy flights with power-law step lengths.

Steps are isotropic with Pareto-distributed lengths,
``P(s > x) = (x / s_min)^-alpha`` for ``x >= s_min``, sampled by inverse
transform ``s = s_min * U^(-1/alpha)``. A walk's trajectory is a fractal
with dimension equal to the tail index ``alpha``.

Two scalar price processes are derived from one walk: the distance from
the origin ``r(t)`` and the cumulative path length ``l(t)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .panels import PricePanel, synthetic_dates
from .rng import child_seed, make_rng

__all__ = [
    "WalkConfig",
    "WalkPath2D",
    "SeriesKind",
    "sample_step",
    "sample_steps",
    "generate_walk",
    "generate_gaussian_walk",
    "derive_series",
    "generate_ensemble",
]

# Relative floor applied to derived series so logarithms stay finite.
EPSILON_PRICE_FACTOR = 1e-12


class SeriesKind(enum.Enum):
    """Which scalar series a 2D walk is reduced to."""

    DISTANCE_FROM_ORIGIN = "r"
    CUMULATIVE_LENGTH = "l"


@dataclass(frozen=True)
class WalkConfig:
    """Parameters of one 2D Levy flight."""

    alpha: float
    s_min: float = 1.0
    n_steps: int = 7740
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 2:
            raise ValueError(f"alpha must be in (0, 2), got {self.alpha}")
        if self.s_min <= 0:
            raise ValueError(f"s_min must be positive, got {self.s_min}")
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")


@dataclass(frozen=True)
class WalkPath2D:
    """One 2D trajectory: ``n_steps + 1`` positions starting at the origin.

    ``config`` is None for paths not generated by the Levy sampler
    (empirical pair-stock trajectories, diffusive controls); those relax
    the step-length floor to zero.
    """

    positions: np.ndarray = field(repr=False)
    step_lengths: np.ndarray = field(repr=False)
    config: WalkConfig | None = None

    def __post_init__(self) -> None:
        positions = np.asarray(self.positions, dtype=float)
        step_lengths = np.asarray(self.step_lengths, dtype=float)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "step_lengths", step_lengths)
        if positions.ndim != 2 or positions.shape[1] != 2:
            raise ValueError("positions must be an (n_steps + 1, 2) array")
        if step_lengths.shape != (positions.shape[0] - 1,):
            raise ValueError("need exactly one step length per increment")
        if positions[0, 0] != 0.0 or positions[0, 1] != 0.0:
            raise ValueError("path must start at the origin")

    @property
    def n_steps(self) -> int:
        return len(self.step_lengths)

    def validate(self, rtol: float = 1e-9) -> None:
        """Check the step-length/position consistency invariants."""
        dists = np.hypot(*np.diff(self.positions, axis=0).T)
        if not np.allclose(dists, self.step_lengths, rtol=rtol, atol=0.0):
            raise ValueError("step lengths disagree with position increments")
        if self.config is not None:
            floor = self.config.s_min * (1.0 - 1e-12)
            if np.any(self.step_lengths < floor):
                raise ValueError("step below the configured minimum length")
        elif np.any(self.step_lengths < 0):
            raise ValueError("negative step length")


def sample_steps(
    rng: np.random.Generator, n: int, alpha: float, s_min: float
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``n`` isotropic Pareto steps; returns (displacements, lengths).

    Consumes exactly two uniform blocks from ``rng`` (lengths first, then
    angles), so the draw is reproducible for a given generator state.
    """
    # U in (0, 1]: flip the half-open [0, 1) interval from random().
    u = 1.0 - rng.random(n)
    s = s_min * u ** (-1.0 / alpha)
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    disp = np.empty((n, 2))
    disp[:, 0] = s * np.cos(theta)
    disp[:, 1] = s * np.sin(theta)
    return disp, s


def sample_step(
    rng: np.random.Generator, alpha: float, s_min: float
) -> tuple[float, float]:
    """Draw one step; the displacement length is Pareto(alpha) above s_min."""
    disp, _ = sample_steps(rng, 1, alpha, s_min)
    return float(disp[0, 0]), float(disp[0, 1])


def _path_from_displacements(
    disp: np.ndarray, config: WalkConfig | None
) -> WalkPath2D:
    n = disp.shape[0]
    positions = np.empty((n + 1, 2))
    positions[0] = 0.0
    np.cumsum(disp, axis=0, out=positions[1:])
    # Recompute lengths from the stored increments so the consistency
    # invariant holds exactly for the persisted values.
    step_lengths = np.hypot(disp[:, 0], disp[:, 1])
    return WalkPath2D(positions=positions, step_lengths=step_lengths, config=config)


def generate_walk(config: WalkConfig) -> WalkPath2D:
    """Generate one Levy flight; identical config gives an identical path."""
    rng = make_rng(config.seed)
    disp, _ = sample_steps(rng, config.n_steps, config.alpha, config.s_min)
    return _path_from_displacements(disp, config)


def generate_gaussian_walk(
    n_steps: int, seed: int, step_scale: float = 1.0
) -> WalkPath2D:
    """Diffusive control: steps with i.i.d. Gaussian components.

    Its trajectory has fractal dimension 2, against which the Levy
    walks' anomalous dimension is distinguished.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    rng = make_rng(seed)
    disp = step_scale * rng.standard_normal((n_steps, 2))
    return _path_from_displacements(disp, None)


def derive_series(path: WalkPath2D, kind: SeriesKind) -> np.ndarray:
    """Reduce a walk to its price series for t = 1..n_steps.

    DISTANCE_FROM_ORIGIN gives r(t) = |position(t)|; CUMULATIVE_LENGTH
    gives l(t), the running sum of step lengths. Values are floored at
    1e-12 * s_min so downstream logarithms are always finite.
    """
    if kind is SeriesKind.DISTANCE_FROM_ORIGIN:
        series = np.hypot(path.positions[1:, 0], path.positions[1:, 1])
    elif kind is SeriesKind.CUMULATIVE_LENGTH:
        series = np.cumsum(path.step_lengths)
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown series kind {kind!r}")
    s_min = path.config.s_min if path.config is not None else 1.0
    return np.maximum(series, EPSILON_PRICE_FACTOR * s_min)


def _walker_series(
    config: WalkConfig, walker: int, kind: SeriesKind
) -> np.ndarray:
    sub = WalkConfig(
        alpha=config.alpha,
        s_min=config.s_min,
        n_steps=config.n_steps,
        seed=child_seed(config.seed, "walker", walker),
    )
    return derive_series(generate_walk(sub), kind)


def generate_ensemble(
    config: WalkConfig,
    n_walkers: int,
    kind: SeriesKind,
    workers: int = 1,
) -> PricePanel:
    """Panel of ``n_walkers`` independent walks, one column per walker.

    Walker ``i`` draws from a child seed mixed from ``(config.seed, i)``,
    so the panel is a pure function of the arguments: the same config
    produces bit-identical panels for any ``workers`` count.
    """
    if n_walkers < 1:
        raise ValueError("n_walkers must be >= 1")
    values = np.empty((config.n_steps, n_walkers))
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            columns = pool.map(
                lambda i: _walker_series(config, i, kind), range(n_walkers)
            )
            for i, col in enumerate(columns):
                values[:, i] = col
    else:
        for i in range(n_walkers):
            values[:, i] = _walker_series(config, i, kind)
    labels = tuple(f"W{i:04d}" for i in range(n_walkers))
    return PricePanel(
        labels=labels, times=synthetic_dates(config.n_steps), values=values
    )


def walk_paths(
    config: WalkConfig, n_walkers: int
) -> Sequence[WalkPath2D]:
    """The per-walker paths behind :func:`generate_ensemble` (same seeds)."""
    paths = []
    for i in range(n_walkers):
        sub = WalkConfig(
            alpha=config.alpha,
            s_min=config.s_min,
            n_steps=config.n_steps,
            seed=child_seed(config.seed, "walker", i),
        )
        paths.append(generate_walk(sub))
    return paths
