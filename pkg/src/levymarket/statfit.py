"""Tail-exponent, spectral-exponent, and heavy-tail distribution fits.

Exponent conventions: a power-law density P(x) ~ x^-(1+a) has survival
function (x/x_min)^-a; ``TailFit.exponent`` is that survival exponent a.
The Hill estimator at a fixed tail fraction is the primary estimator and
the KS-minimizing scan over cutoffs the cross-check; report both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.optimize
import scipy.stats

__all__ = [
    "TailFit",
    "PsdEstimate",
    "TDistFit",
    "TailComparison",
    "Histogram",
    "hill_tail_exponent",
    "powerlaw_fit_ks",
    "periodogram",
    "fit_spectral_exponent",
    "total_power",
    "student_t_fit",
    "tail_model_comparison",
    "log_binned_histogram",
    "histogram_log_slope",
]

# Upper bound of the t degrees-of-freedom search; beyond it the fit is
# indistinguishable from a normal at realistic sample sizes.
NU_MAX = 50.0
NU_MIN = 0.5


@dataclass(frozen=True)
class TailFit:
    """A fitted survival-function tail exponent."""

    exponent: float
    x_min: float
    n_tail: int
    stderr: float
    ks: float

    def __post_init__(self) -> None:
        if self.exponent <= 0:
            raise ValueError("tail exponent must be positive")
        if not 0.0 <= self.ks <= 1.0:
            raise ValueError("KS distance must lie in [0, 1]")


@dataclass(frozen=True)
class PsdEstimate:
    """Mean periodogram over a set of series, with an optional slope fit."""

    freqs: np.ndarray = field(repr=False)
    power: np.ndarray = field(repr=False)
    n_samples: int = 0
    n_series: int = 1
    beta: float | None = None
    beta_stderr: float | None = None
    band: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        freqs = np.asarray(self.freqs, dtype=float)
        power = np.asarray(self.power, dtype=float)
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "power", power)
        if freqs.shape != power.shape or freqs.ndim != 1:
            raise ValueError("freqs and power must be 1D of equal length")
        if np.any(freqs <= 0) or np.any(np.diff(freqs) <= 0):
            raise ValueError("freqs must be positive and increasing")
        if np.any(power < 0):
            raise ValueError("power must be nonnegative")


@dataclass(frozen=True)
class TDistFit:
    """Maximum-likelihood three-parameter Student-t fit."""

    nu0: float
    location: float
    scale: float
    loglik: float

    def __post_init__(self) -> None:
        if self.nu0 <= 0 or self.scale <= 0:
            raise ValueError("nu0 and scale must be positive")

    @property
    def at_upper_bound(self) -> bool:
        """True when the fit ran into the search ceiling (report as >= NU_MAX)."""
        return self.nu0 >= NU_MAX * (1.0 - 1e-6)


@dataclass(frozen=True)
class TailComparison:
    """Power-law vs exponential tail above a shared cutoff.

    ``loglik_ratio`` is loglik(power law) - loglik(exponential):
    positive favors the power law.
    """

    x_min: float
    n_tail: int
    power_law: TailFit
    exp_rate: float
    loglik_power_law: float
    loglik_exponential: float
    loglik_ratio: float

    @property
    def per_sample_ratio(self) -> float:
        return self.loglik_ratio / self.n_tail


@dataclass(frozen=True)
class Histogram:
    """Log-binned histogram with width-normalized densities."""

    edges: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    densities: np.ndarray = field(repr=False)
    total: int = 0

    def __post_init__(self) -> None:
        edges = np.asarray(self.edges, dtype=float)
        counts = np.asarray(self.counts, dtype=int)
        densities = np.asarray(self.densities, dtype=float)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "densities", densities)
        if len(edges) != len(counts) + 1:
            raise ValueError("need one more edge than bins")
        if counts.sum() != self.total:
            raise ValueError("counts must sum to the total")

    @property
    def centers(self) -> np.ndarray:
        return np.sqrt(self.edges[:-1] * self.edges[1:])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)


def _as_positive_1d(samples, name: str = "samples") -> np.ndarray:
    x = np.asarray(samples, dtype=float).ravel()
    if np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise ValueError(f"{name} must be finite and strictly positive")
    return x


def _pareto_ks(tail_sorted: np.ndarray, x_min: float, exponent: float) -> float:
    """KS distance between tail samples and the fitted Pareto CDF."""
    k = len(tail_sorted)
    cdf = 1.0 - (tail_sorted / x_min) ** (-exponent)
    grid = np.arange(k + 1) / k
    return float(
        max(np.max(grid[1:] - cdf), np.max(cdf - grid[:-1]))
    )


def hill_tail_exponent(
    samples, tail_fraction: float = 0.1, x_min: float | None = None
) -> TailFit:
    """Hill estimator of the survival exponent over the largest samples.

    With ``x_min`` unset, the cutoff is the empirical (1 - tail_fraction)
    quantile and the estimate uses the samples above it. An explicit
    ``x_min`` overrides the quantile rule (useful for hand checks and for
    fitting at a shared cutoff); the tail-size floor is then the caller's
    responsibility.
    """
    x = _as_positive_1d(samples)
    if x_min is None:
        if not 0.0 < tail_fraction <= 0.5:
            raise ValueError("tail_fraction must be in (0, 0.5]")
        if len(x) < 100:
            raise ValueError("need at least 100 samples")
        order = np.sort(x)[::-1]
        k = int(len(x) * tail_fraction)
        if k < 10:
            raise ValueError("too few tail samples")
        x_min = float(order[k])
        tail = order[:k]
    else:
        if x_min <= 0:
            raise ValueError("x_min must be positive")
        tail = x[x > x_min]
        if len(tail) == 0:
            raise ValueError("no samples above x_min")
    k = len(tail)
    log_excess = np.sum(np.log(tail / x_min))
    if log_excess <= 0:
        raise ValueError("zero log-spacing in tail (degenerate samples)")
    exponent = k / log_excess
    return TailFit(
        exponent=float(exponent),
        x_min=float(x_min),
        n_tail=k,
        stderr=float(exponent / math.sqrt(k)),
        ks=_pareto_ks(np.sort(tail), x_min, exponent),
    )


def powerlaw_fit_ks(
    samples,
    quantile_grid: np.ndarray | None = None,
    min_tail: int = 50,
) -> TailFit:
    """Power-law fit with the cutoff chosen by KS minimization.

    Scans candidate cutoffs over sample quantiles, fits the maximum
    likelihood exponent above each, and keeps the candidate whose tail
    agrees best with the fitted Pareto in KS distance.
    """
    x = _as_positive_1d(samples)
    if len(x) < 500:
        raise ValueError("need at least 500 samples")
    if quantile_grid is None:
        quantile_grid = np.linspace(0.50, 0.99, 50)
    x_sorted = np.sort(x)
    best: TailFit | None = None
    for q in quantile_grid:
        x_min = float(np.quantile(x_sorted, q))
        if x_min <= 0:
            continue
        tail = x_sorted[x_sorted > x_min]
        k = len(tail)
        if k < min_tail:
            continue
        log_excess = np.sum(np.log(tail / x_min))
        if log_excess <= 0:
            continue
        exponent = k / log_excess
        ks = _pareto_ks(tail, x_min, exponent)
        if best is None or ks < best.ks:
            best = TailFit(
                exponent=float(exponent),
                x_min=x_min,
                n_tail=k,
                stderr=float(exponent / math.sqrt(k)),
                ks=ks,
            )
    if best is None:
        raise ValueError(f"no cutoff candidate left >= {min_tail} tail points")
    return best


def periodogram(data) -> PsdEstimate:
    """Mean periodogram of one series or of a T x N panel of series.

    Each series is mean-removed; power is |DFT coefficient|^2 / length at
    the positive frequencies k / length (cycles per day for daily rows),
    averaged across series.
    """
    values = np.asarray(data, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    if values.ndim != 2:
        raise ValueError("expected a 1D series or a 2D panel")
    length = values.shape[0]
    if length < 64:
        raise ValueError("series too short for a periodogram (< 64)")
    centered = values - values.mean(axis=0, keepdims=True)
    coeffs = np.fft.rfft(centered, axis=0)
    power = (np.abs(coeffs[1:]) ** 2 / length).mean(axis=1)
    freqs = np.arange(1, coeffs.shape[0]) / length
    return PsdEstimate(
        freqs=freqs,
        power=power,
        n_samples=length,
        n_series=values.shape[1],
    )


def total_power(psd: PsdEstimate) -> float:
    """Sum the one-sided bins back to the series variance (Parseval)."""
    length = psd.n_samples
    if length % 2 == 0:
        # Final bin is the Nyquist frequency and appears once in the DFT.
        s = 2.0 * np.sum(psd.power[:-1]) + psd.power[-1]
    else:
        s = 2.0 * np.sum(psd.power)
    return float(s / length)


def default_psd_band(psd: PsdEstimate, decades: float = 2.0) -> tuple[float, float]:
    """The lowest ``decades`` of positive frequencies (DC excluded)."""
    lo = float(psd.freqs[0])
    return lo, float(min(lo * 10.0**decades, psd.freqs[-1]))


def fit_spectral_exponent(
    psd: PsdEstimate, band: tuple[float, float] | None = None
) -> PsdEstimate:
    """Least-squares slope of log power vs log frequency over ``band``.

    Returns a copy of the estimate carrying beta = -slope and the band.
    """
    if band is None:
        band = default_psd_band(psd)
    lo, hi = band
    mask = (psd.freqs >= lo) & (psd.freqs <= hi)
    if np.count_nonzero(mask) < 10:
        raise ValueError("band too narrow: fewer than 10 frequency bins")
    power = psd.power[mask]
    if np.any(power <= 0):
        raise ValueError("zero power inside the fit band")
    x = np.log(psd.freqs[mask])
    y = np.log(power)
    (slope, _), cov = np.polyfit(x, y, 1, cov=True)
    return replace(
        psd,
        beta=float(-slope),
        beta_stderr=float(np.sqrt(cov[0, 0])),
        band=(float(lo), float(hi)),
    )


def _t_loglik(x: np.ndarray, nu: float, loc: float, scale: float) -> float:
    return float(np.sum(scipy.stats.t.logpdf(x, df=nu, loc=loc, scale=scale)))


def _t_profile_fit(x: np.ndarray, nu: float) -> tuple[float, float]:
    """EM for the location/scale MLE of a Student-t with fixed nu."""
    loc = float(np.median(x))
    scale2 = float(np.mean((x - loc) ** 2)) or 1.0
    # Median absolute deviation is a heavier-tail-safe starting scale.
    mad = float(np.median(np.abs(x - loc)))
    if mad > 0:
        scale2 = mad * mad
    for _ in range(200):
        z2 = (x - loc) ** 2 / scale2
        w = (nu + 1.0) / (nu + z2)
        new_loc = float(np.sum(w * x) / np.sum(w))
        new_scale2 = float(np.mean(w * (x - new_loc) ** 2))
        if new_scale2 <= 0:
            break
        done = (
            abs(new_loc - loc) <= 1e-10 * (1.0 + abs(loc))
            and abs(new_scale2 - scale2) <= 1e-10 * scale2
        )
        loc, scale2 = new_loc, new_scale2
        if done:
            break
    return loc, math.sqrt(scale2)


def student_t_fit(samples) -> TDistFit:
    """Three-parameter Student-t MLE via a 1D profile search on nu.

    The profile over nu in [0.5, 50] uses an inner EM fit of location and
    scale at each candidate. A fit at the upper bound means the data are
    indistinguishable from Gaussian; report it as "nu >= 50".
    """
    x = np.asarray(samples, dtype=float).ravel()
    if len(x) < 1000:
        raise ValueError("need at least 1000 samples")
    if not np.all(np.isfinite(x)):
        raise ValueError("samples must be finite")

    def negloglik_at(log_nu: float) -> float:
        nu = math.exp(log_nu)
        loc, scale = _t_profile_fit(x, nu)
        return -_t_loglik(x, nu, loc, scale)

    res = scipy.optimize.minimize_scalar(
        negloglik_at,
        bounds=(math.log(NU_MIN), math.log(NU_MAX)),
        method="bounded",
        options={"xatol": 1e-4},
    )
    if not res.success:
        raise RuntimeError(f"t-fit profile search failed: {res.message}")
    nu = math.exp(res.x)
    # The bounded minimizer never quite reaches the bracket ends; snap to
    # the bound when the profile is still improving there.
    for bound in (NU_MIN, NU_MAX):
        if abs(math.log(nu) - math.log(bound)) < 5e-3:
            if negloglik_at(math.log(bound)) <= res.fun + 1e-9:
                nu = bound
    loc, scale = _t_profile_fit(x, nu)
    return TDistFit(
        nu0=float(nu),
        location=loc,
        scale=scale,
        loglik=_t_loglik(x, nu, loc, scale),
    )


def tail_model_comparison(samples) -> TailComparison:
    """Compare power-law and exponential tails above a shared cutoff.

    The cutoff comes from the KS-scan power-law fit; both models are then
    fitted by maximum likelihood to the exceedances and their total
    log-likelihoods differenced (positive favors the power law).
    """
    x = _as_positive_1d(samples)
    if len(x) < 1000:
        raise ValueError("need at least 1000 samples")
    pl = powerlaw_fit_ks(x)
    tail = x[x > pl.x_min]
    k = len(tail)
    excess_mean = float(np.mean(tail - pl.x_min))
    if excess_mean <= 0:
        raise ValueError("degenerate tail: no spread above the cutoff")
    rate = 1.0 / excess_mean
    loglik_exp = k * math.log(rate) - k
    loglik_pl = k * math.log(pl.exponent / pl.x_min) - (
        1.0 + pl.exponent
    ) * float(np.sum(np.log(tail / pl.x_min)))
    return TailComparison(
        x_min=pl.x_min,
        n_tail=k,
        power_law=pl,
        exp_rate=rate,
        loglik_power_law=loglik_pl,
        loglik_exponential=loglik_exp,
        loglik_ratio=loglik_pl - loglik_exp,
    )


def log_binned_histogram(samples, bins_per_decade: int = 10) -> Histogram:
    """Histogram on logarithmically spaced bins spanning the data range.

    Densities are counts / (total * bin width), so they integrate to one.
    """
    x = _as_positive_1d(samples)
    if bins_per_decade < 2:
        raise ValueError("bins_per_decade must be >= 2")
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        edges = np.array([lo * (1.0 - 1e-9), hi * (1.0 + 1e-9)])
    else:
        n_bins = max(1, int(math.ceil(math.log10(hi / lo) * bins_per_decade)))
        edges = np.geomspace(lo, hi, n_bins + 1)
        edges[0], edges[-1] = lo, hi  # guard rounding at the extremes
    counts, _ = np.histogram(x, bins=edges)
    widths = np.diff(edges)
    densities = counts / (len(x) * widths)
    return Histogram(
        edges=edges, counts=counts, densities=densities, total=len(x)
    )


def histogram_log_slope(
    hist: Histogram, lo: float, hi: float
) -> tuple[float, float]:
    """Log-log slope of the density over bins centered in [lo, hi].

    Returns (slope, stderr); empty bins are skipped. For a density
    P(x) ~ x^-(1+a) the slope is -(1 + a).
    """
    centers = hist.centers
    mask = (centers >= lo) & (centers <= hi) & (hist.counts > 0)
    if np.count_nonzero(mask) < 3:
        raise ValueError("fewer than 3 occupied bins in the requested range")
    x = np.log(centers[mask])
    y = np.log(hist.densities[mask])
    (slope, _), cov = np.polyfit(x, y, 1, cov=True)
    return float(slope), float(np.sqrt(cov[0, 0]))
