"""Log-returns, cross-sectional normalization, and epoch slicing."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .panels import PricePanel

__all__ = [
    "ReturnPanel",
    "EpochMatrix",
    "log_returns",
    "normalize_cross_section",
    "epoch_matrices",
]


@dataclass(frozen=True)
class ReturnPanel:
    """(T_total - 1) x N matrix of returns.

    When ``normalized`` is set, every row has zero mean and unit
    population variance across assets. ``labels`` are carried through
    from the source panel for export headers.
    """

    values: np.ndarray = field(repr=False)
    normalized: bool = False
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 2:
            raise ValueError("return values must be 2D")
        if self.labels is not None and len(self.labels) != values.shape[1]:
            raise ValueError("one label per asset column required")

    @property
    def n_times(self) -> int:
        return self.values.shape[0]

    @property
    def n_assets(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class EpochMatrix:
    """T consecutive return rows for N assets, with Q = T/N."""

    values: np.ndarray = field(repr=False)
    start: int = 0

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 2:
            raise ValueError("epoch values must be 2D")

    @property
    def T(self) -> int:
        return self.values.shape[0]

    @property
    def N(self) -> int:
        return self.values.shape[1]

    @property
    def Q(self) -> float:
        return self.T / self.N


def log_returns(panel: PricePanel) -> ReturnPanel:
    """Differences of log prices: values[t, i] = ln P[t+1, i] - ln P[t, i]."""
    if panel.n_times < 2:
        raise ValueError("need at least two price rows")
    if np.any(panel.values <= 0):
        raise ValueError("non-positive price")
    return ReturnPanel(
        values=np.diff(np.log(panel.values), axis=0), labels=panel.labels
    )


def normalize_cross_section(returns: ReturnPanel) -> ReturnPanel:
    """Shift and scale each row by its cross-asset mean and population std.

    A row with zero cross-sectional variance cannot be normalized and is
    reported by index.
    """
    if returns.n_assets < 2:
        raise ValueError("need at least two assets to normalize")
    values = returns.values
    mean = values.mean(axis=1, keepdims=True)
    centered = values - mean
    sigma = np.sqrt(np.mean(centered**2, axis=1, keepdims=True))
    degenerate = np.flatnonzero(sigma[:, 0] == 0.0)
    if degenerate.size:
        raise ValueError(
            f"zero cross-sectional variance at row {degenerate[0]}"
        )
    return ReturnPanel(
        values=centered / sigma, normalized=True, labels=returns.labels
    )


def epoch_matrices(
    returns: ReturnPanel, T: int, overlap: bool = False
) -> list[EpochMatrix]:
    """Slice a normalized panel into epochs of T consecutive rows.

    Without overlap the rows are cut into floor(rows / T) disjoint blocks
    (remainder dropped from the end); with overlap every start index
    yields a sliding window of stride 1.
    """
    if not returns.normalized:
        raise ValueError("epochs are built from normalized returns")
    rows = returns.n_times
    if not 1 <= T <= rows:
        raise ValueError(f"epoch length {T} outside [1, {rows}]")
    if overlap:
        starts = range(rows - T + 1)
    else:
        starts = range(0, (rows // T) * T, T)
    return [
        EpochMatrix(values=returns.values[s : s + T], start=s) for s in starts
    ]
