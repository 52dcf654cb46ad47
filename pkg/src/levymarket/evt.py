"""Extreme-value statistics of the largest Wishart eigenvalues.

The generalized extreme-value (GEV) shape xi classifies the maxima:
xi > 0 is the Frechet class (power-law parents), xi = 0 Gumbel
(exponential-class parents), xi < 0 Weibull (bounded parents). For the
uncorrelated control, the rescaled largest eigenvalue follows the GOE
Tracy-Widom law, which is represented here by a seeded Monte Carlo
reference rather than literature tables.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.stats

from .returns import ReturnPanel, epoch_matrices
from .rng import child_seed
from .spectra import Spectrum, spectrum_of_epoch

__all__ = [
    "EvtFit",
    "LambdaMaxPoint",
    "LambdaMaxCurve",
    "TwReference",
    "max_eigenvalue_samples",
    "gev_fit",
    "frechet_cdf",
    "gumbel_cdf",
    "tracy_widom_goe_reference",
    "rescale_to_tw",
    "mean_lambda_max_curve",
    "rescale_curve",
]

# |shape| at or below this is classified as Gumbel.
GUMBEL_SHAPE_TOL = 0.05

# Default ceiling on n_matrices * matrix_size for the Monte Carlo reference.
TW_BUDGET_CELLS = 50_000_000

COLLAPSE_EXPONENT = 0.44


@dataclass(frozen=True)
class EvtFit:
    """Maximum-likelihood GEV fit with its family classification."""

    shape: float
    location: float
    scale: float
    loglik: float
    shape_stderr: float
    n_samples: int

    def __post_init__(self) -> None:
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    @property
    def family(self) -> str:
        if abs(self.shape) <= GUMBEL_SHAPE_TOL:
            return "gumbel"
        return "frechet" if self.shape > 0 else "weibull"

    @property
    def shape_ci95(self) -> tuple[float, float]:
        half = 1.96 * self.shape_stderr
        return (self.shape - half, self.shape + half)


@dataclass(frozen=True)
class LambdaMaxPoint:
    T: int
    Q: float
    mean: float
    stderr: float
    n_epochs: int

    @property
    def flagged(self) -> bool:
        """Too few epochs for the point to enter comparisons."""
        return self.n_epochs < 10


@dataclass(frozen=True)
class LambdaMaxCurve:
    """Mean largest eigenvalue per epoch-size ratio Q."""

    points: tuple[LambdaMaxPoint, ...]
    source: str

    def __post_init__(self) -> None:
        qs = [p.Q for p in self.points]
        if len(set(qs)) != len(qs):
            raise ValueError("duplicate Q values in curve")
        if any(q <= 0 for q in qs):
            raise ValueError("Q values must be positive")

    def point_at(self, T: int) -> LambdaMaxPoint:
        for p in self.points:
            if p.T == T:
                return p
        raise KeyError(f"no curve point at T={T}")


def max_eigenvalue_samples(spectra: Sequence[Spectrum]) -> np.ndarray:
    """Top eigenvalue of each spectrum; epochs must share one (T, N)."""
    if not spectra:
        raise ValueError("no spectra given")
    shapes = {(s.T, s.N) for s in spectra}
    if len(shapes) != 1:
        raise ValueError(f"mixed epoch shapes: {sorted(shapes)}")
    return np.array([s.eigenvalues[0] for s in spectra])


def _gev_negloglik(params: np.ndarray, x: np.ndarray) -> float:
    shape, loc, scale = params
    if scale <= 0:
        return np.inf
    return float(
        scipy.stats.genextreme.nnlf((-shape, loc, scale), x)
    )


def _hessian_stderr(params: np.ndarray, x: np.ndarray) -> float:
    """Shape standard error from a finite-difference observed information."""
    n = len(params)
    steps = 1e-4 * np.maximum(np.abs(params), 0.1)
    hess = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            pp = params.copy(); pp[i] += steps[i]; pp[j] += steps[j]
            pm = params.copy(); pm[i] += steps[i]; pm[j] -= steps[j]
            mp = params.copy(); mp[i] -= steps[i]; mp[j] += steps[j]
            mm = params.copy(); mm[i] -= steps[i]; mm[j] -= steps[j]
            val = (
                _gev_negloglik(pp, x)
                - _gev_negloglik(pm, x)
                - _gev_negloglik(mp, x)
                + _gev_negloglik(mm, x)
            ) / (4.0 * steps[i] * steps[j])
            hess[i, j] = hess[j, i] = val
    try:
        cov = np.linalg.inv(hess)
    except np.linalg.LinAlgError:
        cov = np.linalg.pinv(hess)
    var = cov[0, 0]
    return float(math.sqrt(var)) if var > 0 else float("nan")


def gev_fit(maxima) -> EvtFit:
    """Fit the GEV family to block maxima by maximum likelihood."""
    x = np.asarray(maxima, dtype=float).ravel()
    if len(x) < 100:
        raise ValueError("need at least 100 maxima")
    if np.ptp(x) == 0:
        raise ValueError("degenerate (constant) maxima")
    c, loc, scale = scipy.stats.genextreme.fit(x)
    shape = -float(c)
    params = np.array([shape, float(loc), float(scale)])
    loglik = -_gev_negloglik(params, x)
    if not np.isfinite(loglik):
        raise RuntimeError("GEV fit did not converge to a finite likelihood")
    return EvtFit(
        shape=shape,
        location=float(loc),
        scale=float(scale),
        loglik=loglik,
        shape_stderr=_hessian_stderr(params, x),
        n_samples=len(x),
    )


def frechet_cdf(x, shape: float, location: float = 0.0, scale: float = 1.0):
    """Frechet CDF exp(-((x - m)/s)^-a) for x > m, zero below."""
    if scale <= 0 or shape <= 0:
        raise ValueError("shape and scale must be positive")
    x = np.asarray(x, dtype=float)
    z = (x - location) / scale
    out = np.where(z > 0, np.exp(-np.maximum(z, 1e-300) ** -shape), 0.0)
    return out if out.ndim else float(out)


def gumbel_cdf(x, location: float = 0.0, scale: float = 1.0):
    """Gumbel CDF exp(-exp(-(x - m)/s))."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    x = np.asarray(x, dtype=float)
    out = np.exp(-np.exp(-(x - location) / scale))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class TwReference:
    """Empirical CDF of the rescaled GOE largest eigenvalue."""

    samples: np.ndarray = field(repr=False)
    n_matrices: int = 0
    matrix_size: int = 0
    seed: int = 0
    method: str = "tridiagonal"

    def mean(self) -> float:
        return float(np.mean(self.samples))

    def cdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.searchsorted(self.samples, x, side="right") / len(
            self.samples
        )

    def ks_statistic(self, other) -> float:
        """Two-sample KS distance between the reference and ``other``."""
        return float(
            scipy.stats.ks_2samp(self.samples, np.asarray(other)).statistic
        )


def _goe_max_dense(rng: np.random.Generator, n: int) -> float:
    a = rng.standard_normal((n, n))
    h = (a + a.T) / math.sqrt(2.0)
    return float(np.linalg.eigvalsh(h)[-1])


def _goe_max_tridiagonal(rng: np.random.Generator, n: int) -> float:
    # Tridiagonal reduction of the GOE: same joint eigenvalue law, O(n^2).
    diag = rng.standard_normal(n) * math.sqrt(2.0)
    off = np.sqrt(rng.chisquare(np.arange(n - 1, 0, -1)))
    w = scipy.linalg.eigvalsh_tridiagonal(
        diag, off, select="i", select_range=(n - 1, n - 1)
    )
    return float(w[0])


def tracy_widom_goe_reference(
    n_matrices: int,
    matrix_size: int,
    seed: int,
    method: str = "tridiagonal",
    cache_dir: str | os.PathLike | None = None,
    max_cells: int = TW_BUDGET_CELLS,
) -> TwReference:
    """Monte Carlo reference for the GOE largest-eigenvalue law.

    Each sample is (lambda_max - 2 sqrt(n)) * n^(1/6) for one GOE draw of
    size n = matrix_size. ``method`` selects the sampler: "dense" draws
    literal GOE matrices; "tridiagonal" draws their tridiagonal
    equivalent (identical in law) and is the fast default. Results are
    bit-reproducible from the seed and cached to disk keyed by
    (method, n_matrices, matrix_size, seed).
    """
    if n_matrices < 1000:
        raise ValueError("need at least 1000 matrices")
    if matrix_size < 200:
        raise ValueError("matrix_size must be >= 200")
    if method not in ("dense", "tridiagonal"):
        raise ValueError(f"unknown method {method!r}")
    if n_matrices * matrix_size > max_cells:
        raise ValueError(
            f"insufficient resources: {n_matrices} x {matrix_size} exceeds "
            f"the budget of {max_cells} cells"
        )
    cache_path = None
    if cache_dir is None:
        cache_dir = os.environ.get("LEVYMARKET_CACHE_DIR")
    if cache_dir is not None:
        cache_path = Path(cache_dir) / (
            f"tw1_goe_{method}_m{n_matrices}_n{matrix_size}_s{seed}.csv"
        )
        if cache_path.exists():
            samples = _read_tw_cache(cache_path)
            return TwReference(
                samples=samples,
                n_matrices=n_matrices,
                matrix_size=matrix_size,
                seed=seed,
                method=method,
            )
    draw = _goe_max_dense if method == "dense" else _goe_max_tridiagonal
    center = 2.0 * math.sqrt(matrix_size)
    scale = matrix_size ** (1.0 / 6.0)
    samples = np.empty(n_matrices)
    for m in range(n_matrices):
        rng = np.random.default_rng(child_seed(seed, "goe", m))
        samples[m] = (draw(rng, matrix_size) - center) * scale
    samples.sort()
    ref = TwReference(
        samples=samples,
        n_matrices=n_matrices,
        matrix_size=matrix_size,
        seed=seed,
        method=method,
    )
    if cache_path is not None:
        _write_tw_cache(cache_path, ref)
    return ref


def _write_tw_cache(path: Path, ref: TwReference) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [
        "# tw1_goe_reference",
        f"# method={ref.method}",
        f"# n_matrices={ref.n_matrices}",
        f"# matrix_size={ref.matrix_size}",
        f"# seed={ref.seed}",
    ]
    lines.extend(f"{x:.17g}" for x in ref.samples)
    path.write_text("\n".join(lines) + "\n")


def _read_tw_cache(path: Path) -> np.ndarray:
    values = [
        float(line)
        for line in path.read_text().splitlines()
        if line and not line.startswith("#")
    ]
    return np.asarray(values)


def rescale_to_tw(maxima, T: int, N: int) -> np.ndarray:
    """Center and scale Wishart maxima onto the Tracy-Widom coordinates.

    Uses the white-Wishart edge constants for X^T X / T with T
    observations of N variables: mu = (sqrt(T-1) + sqrt(N))^2 / T and
    sigma = ((sqrt(T-1) + sqrt(N)) / T) (1/sqrt(T-1) + 1/sqrt(N))^(1/3).
    """
    if T < 2:
        raise ValueError("T must be >= 2")
    x = np.asarray(maxima, dtype=float)
    root = math.sqrt(T - 1) + math.sqrt(N)
    mu = root**2 / T
    sigma = (root / T) * (1.0 / math.sqrt(T - 1) + 1.0 / math.sqrt(N)) ** (
        1.0 / 3.0
    )
    return (x - mu) / sigma


def mean_lambda_max_curve(
    panels: Sequence[ReturnPanel],
    T_grid: Sequence[int],
    overlap: bool = False,
    source: str = "",
) -> LambdaMaxCurve:
    """Mean largest eigenvalue per epoch size across one or more panels.

    Epochs are pooled over all panels at each T; points backed by fewer
    than 10 epochs are flagged and should be excluded from comparisons.
    """
    if not panels:
        raise ValueError("no panels given")
    if not T_grid:
        raise ValueError("empty Q grid")
    points = []
    for T in T_grid:
        maxima = []
        n_assets = panels[0].n_assets
        for panel in panels:
            for epoch in epoch_matrices(panel, T, overlap=overlap):
                maxima.append(spectrum_of_epoch(epoch).eigenvalues[0])
        maxima = np.asarray(maxima)
        n = len(maxima)
        stderr = float(np.std(maxima, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        points.append(
            LambdaMaxPoint(
                T=T,
                Q=T / n_assets,
                mean=float(np.mean(maxima)),
                stderr=stderr,
                n_epochs=n,
            )
        )
    return LambdaMaxCurve(points=tuple(points), source=source)


def rescale_curve(
    curve: LambdaMaxCurve, exponent: float = COLLAPSE_EXPONENT
) -> LambdaMaxCurve:
    """Multiply each mean (and its error) by Q^exponent."""
    points = tuple(
        LambdaMaxPoint(
            T=p.T,
            Q=p.Q,
            mean=p.mean * p.Q**exponent,
            stderr=p.stderr * p.Q**exponent,
            n_epochs=p.n_epochs,
        )
        for p in curve.points
    )
    return LambdaMaxCurve(
        points=points, source=f"{curve.source}*Q^{exponent:g}"
    )
