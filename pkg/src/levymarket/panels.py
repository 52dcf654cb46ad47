"""Price panels: dated matrices of strictly positive prices.

A panel holds one column per asset and one row per trading day. Empirical
panels come from :mod:`levymarket.ingest`; model panels from
:func:`levymarket.walks.generate_ensemble`. Dates for model panels are
synthetic consecutive calendar days and serve only as labels.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field

import numpy as np

MODEL_EPOCH_DATE = _dt.date(1990, 1, 2)


def synthetic_dates(n: int, start: _dt.date = MODEL_EPOCH_DATE) -> tuple[str, ...]:
    """``n`` consecutive ISO dates starting at ``start``."""
    base = start.toordinal()
    return tuple(_dt.date.fromordinal(base + k).isoformat() for k in range(n))


@dataclass(frozen=True)
class PricePanel:
    """T_total x N matrix of strictly positive prices.

    ``times`` are ISO-8601 date strings, strictly increasing; ``labels``
    are unique asset identifiers, one per column.
    """

    labels: tuple[str, ...]
    times: tuple[str, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 2:
            raise ValueError("panel values must be a 2D array")
        n_times, n_assets = values.shape
        if len(self.times) != n_times:
            raise ValueError(f"{len(self.times)} times for {n_times} rows")
        if len(self.labels) != n_assets:
            raise ValueError(f"{len(self.labels)} labels for {n_assets} columns")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate asset labels")
        if any(a >= b for a, b in zip(self.times, self.times[1:])):
            raise ValueError("times must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("panel contains non-finite values")
        if np.any(values <= 0):
            t, i = np.argwhere(values <= 0)[0]
            raise ValueError(
                f"non-positive price at time {self.times[t]} asset {self.labels[i]}"
            )

    @property
    def n_times(self) -> int:
        return self.values.shape[0]

    @property
    def n_assets(self) -> int:
        return self.values.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PricePanel):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.times == other.times
            and self.values.shape == other.values.shape
            and bool(np.array_equal(self.values, other.values))
        )
