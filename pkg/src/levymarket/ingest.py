"""Load and clean wide price CSVs; export analysis artifacts.

Wide CSV layout: header ``date,TICKER1,TICKER2,...``; first column
ISO-8601 dates, one row per trading day, cells decimal or empty.
Exports are round-trippable: CSV numbers carry 17 significant digits and
JSON uses shortest-round-trip floats, so re-importing reproduces every
value bit for bit.
"""

from __future__ import annotations

import csv
import datetime as _dt
import json
import math
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .evt import EvtFit, LambdaMaxCurve, TwReference
from .geometry import ScalarFit, ScalingCurve
from .panels import PricePanel
from .returns import ReturnPanel
from .spectra import Spectrum
from .statfit import Histogram, PsdEstimate, TailComparison, TailFit, TDistFit

__all__ = [
    "RawPanel",
    "CleaningPolicy",
    "CleaningReport",
    "load_price_csv",
    "clean_panel",
    "export",
]


def _fmt(x: float) -> str:
    return f"{x:.17g}"


@dataclass(frozen=True)
class RawPanel:
    """Loaded but uncleaned panel; missing cells are NaN."""

    labels: tuple[str, ...]
    times: tuple[str, ...]
    values: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class CleaningPolicy:
    """How gaps and bad assets are handled when building a PricePanel.

    Assets missing more than ``max_missing_fraction`` of their rows are
    dropped; remaining interior gaps are forward-filled (last traded
    price). Assets with unfillable leading gaps are dropped, as are
    assets with non-positive prices when ``drop_nonpositive`` is set.
    """

    max_missing_fraction: float = 0.02
    drop_nonpositive: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.max_missing_fraction < 1.0:
            raise ValueError("max_missing_fraction must be in [0, 1)")


@dataclass(frozen=True)
class CleaningReport:
    """What cleaning changed: dropped assets (with reasons) and filled cells."""

    dropped: dict[str, str]
    filled: dict[str, int]

    @property
    def n_filled(self) -> int:
        return sum(self.filled.values())


def load_price_csv(path: str | os.PathLike) -> RawPanel:
    """Parse a wide price CSV, validating structure but deferring gaps.

    Raises on malformed rows (with the line number), duplicate tickers,
    and duplicate or non-monotonic dates. Empty cells become NaN.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if len(header) < 2:
            raise ValueError(f"{path}: header must name at least one ticker")
        labels = tuple(t.strip() for t in header[1:])
        if len(set(labels)) != len(labels):
            raise ValueError(f"{path}: duplicate tickers in header")
        times: list[str] = []
        rows: list[list[float]] = []
        prev_date = None
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(labels) + 1:
                raise ValueError(
                    f"{path}:{lineno}: expected {len(labels) + 1} cells, "
                    f"got {len(row)}"
                )
            try:
                date = _dt.date.fromisoformat(row[0].strip())
            except ValueError:
                raise ValueError(
                    f"{path}:{lineno}: malformed date {row[0]!r}"
                ) from None
            if prev_date is not None and date <= prev_date:
                raise ValueError(
                    f"{path}:{lineno}: date {date.isoformat()} not after "
                    f"{prev_date.isoformat()}"
                )
            prev_date = date
            cells = []
            for label, cell in zip(labels, row[1:]):
                cell = cell.strip()
                if not cell:
                    cells.append(math.nan)
                    continue
                try:
                    cells.append(float(cell))
                except ValueError:
                    raise ValueError(
                        f"{path}:{lineno}: malformed number {cell!r} "
                        f"for {label}"
                    ) from None
            times.append(date.isoformat())
            rows.append(cells)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return RawPanel(
        labels=labels, times=tuple(times), values=np.asarray(rows, dtype=float)
    )


def clean_panel(
    raw: RawPanel, policy: CleaningPolicy = CleaningPolicy()
) -> tuple[PricePanel, CleaningReport]:
    """Apply a cleaning policy to a raw panel.

    Returns the clean panel together with a report of dropped assets and
    forward-filled cells, so the data handling stays auditable.
    """
    values = raw.values.copy()
    n_rows = values.shape[0]
    dropped: dict[str, str] = {}
    filled: dict[str, int] = {}
    keep: list[int] = []
    for i, label in enumerate(raw.labels):
        col = values[:, i]
        missing = np.isnan(col)
        frac = missing.sum() / n_rows
        if frac > policy.max_missing_fraction:
            dropped[label] = (
                f"missing fraction {frac:.4f} exceeds "
                f"{policy.max_missing_fraction}"
            )
            continue
        if missing[0]:
            dropped[label] = "leading gap cannot be forward-filled"
            continue
        if policy.drop_nonpositive and np.any(col[~missing] <= 0):
            dropped[label] = "non-positive price"
            continue
        if missing.any():
            idx = np.where(missing, 0, np.arange(n_rows))
            np.maximum.accumulate(idx, out=idx)
            values[:, i] = col[idx]
            filled[label] = int(missing.sum())
        keep.append(i)
    if not keep:
        raise ValueError("cleaning dropped every asset")
    panel = PricePanel(
        labels=tuple(raw.labels[i] for i in keep),
        times=raw.times,
        values=values[:, keep],
    )
    return panel, CleaningReport(dropped=dropped, filled=filled)


# ---------------------------------------------------------------------------
# Export


def _write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _panel_rows(times, values):
    for t, row in zip(times, values):
        yield [t, *(_fmt(v) for v in row)]


def export(artifact, path: str | os.PathLike, format: str = "csv") -> None:
    """Write an analysis artifact to ``path`` as CSV or JSON.

    Column and key orders are fixed per artifact type, and numbers are
    written at full precision, so identical artifacts produce identical
    bytes and a CSV/JSON round trip is lossless.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if format not in ("csv", "json"):
        raise ValueError(f"unknown export format {format!r}")
    if format == "json":
        payload = _json_payload(artifact)
        path.write_text(json.dumps(payload, indent=2) + "\n")
        return
    if isinstance(artifact, PricePanel):
        _write_csv(
            path,
            ["date", *artifact.labels],
            _panel_rows(artifact.times, artifact.values),
        )
    elif isinstance(artifact, ReturnPanel):
        labels = artifact.labels or tuple(
            f"A{i:04d}" for i in range(artifact.n_assets)
        )
        _write_csv(
            path,
            list(labels),
            ([_fmt(v) for v in row] for row in artifact.values),
        )
    elif isinstance(artifact, ScalingCurve):
        _write_csv(
            path,
            ["t", "ell", "rg"],
            (
                [int(t), _fmt(e), _fmt(r)]
                for t, e, r in zip(artifact.t, artifact.ell, artifact.rg)
            ),
        )
    elif isinstance(artifact, Histogram):
        _write_csv(
            path,
            ["edge_lo", "edge_hi", "count", "density"],
            (
                [_fmt(lo), _fmt(hi), int(c), _fmt(d)]
                for lo, hi, c, d in zip(
                    artifact.edges[:-1],
                    artifact.edges[1:],
                    artifact.counts,
                    artifact.densities,
                )
            ),
        )
    elif isinstance(artifact, PsdEstimate):
        _write_csv(
            path,
            ["freq", "power"],
            (
                [_fmt(f), _fmt(p)]
                for f, p in zip(artifact.freqs, artifact.power)
            ),
        )
    elif isinstance(artifact, LambdaMaxCurve):
        _write_csv(
            path,
            ["T", "Q", "mean_lambda_max", "stderr", "n_epochs", "flagged"],
            (
                [p.T, _fmt(p.Q), _fmt(p.mean), _fmt(p.stderr), p.n_epochs,
                 int(p.flagged)]
                for p in artifact.points
            ),
        )
    elif isinstance(artifact, (list, tuple)) and artifact and isinstance(
        artifact[0], Spectrum
    ):
        n = artifact[0].N
        _write_csv(
            path,
            ["start", "Q", *(f"eig{j:04d}" for j in range(n))],
            (
                [s.start, _fmt(s.Q), *(_fmt(v) for v in s.eigenvalues)]
                for s in artifact
            ),
        )
    else:
        raise TypeError(
            f"no CSV export for {type(artifact).__name__}; try format='json'"
        )


def _json_payload(artifact):
    if isinstance(artifact, TailFit):
        return {
            "exponent": artifact.exponent,
            "x_min": artifact.x_min,
            "n_tail": artifact.n_tail,
            "stderr": artifact.stderr,
            "ks": artifact.ks,
        }
    if isinstance(artifact, TDistFit):
        return {
            "nu0": artifact.nu0,
            "location": artifact.location,
            "scale": artifact.scale,
            "loglik": artifact.loglik,
            "at_upper_bound": artifact.at_upper_bound,
        }
    if isinstance(artifact, EvtFit):
        return {
            "shape": artifact.shape,
            "location": artifact.location,
            "scale": artifact.scale,
            "loglik": artifact.loglik,
            "shape_stderr": artifact.shape_stderr,
            "n_samples": artifact.n_samples,
            "family": artifact.family,
        }
    if isinstance(artifact, ScalarFit):
        return {
            "value": artifact.value,
            "stderr": artifact.stderr,
            "range": list(artifact.range),
        }
    if isinstance(artifact, TailComparison):
        return {
            "x_min": artifact.x_min,
            "n_tail": artifact.n_tail,
            "power_law": _json_payload(artifact.power_law),
            "exp_rate": artifact.exp_rate,
            "loglik_power_law": artifact.loglik_power_law,
            "loglik_exponential": artifact.loglik_exponential,
            "loglik_ratio": artifact.loglik_ratio,
        }
    if isinstance(artifact, LambdaMaxCurve):
        return {
            "source": artifact.source,
            "points": [
                {
                    "T": p.T,
                    "Q": p.Q,
                    "mean": p.mean,
                    "stderr": p.stderr,
                    "n_epochs": p.n_epochs,
                    "flagged": p.flagged,
                }
                for p in artifact.points
            ],
        }
    if isinstance(artifact, PricePanel):
        return {
            "labels": list(artifact.labels),
            "times": list(artifact.times),
            "values": artifact.values.tolist(),
        }
    if isinstance(artifact, PsdEstimate):
        return {
            "freqs": artifact.freqs.tolist(),
            "power": artifact.power.tolist(),
            "n_samples": artifact.n_samples,
            "n_series": artifact.n_series,
            "beta": artifact.beta,
            "beta_stderr": artifact.beta_stderr,
            "band": list(artifact.band) if artifact.band else None,
        }
    if isinstance(artifact, TwReference):
        return {
            "method": artifact.method,
            "n_matrices": artifact.n_matrices,
            "matrix_size": artifact.matrix_size,
            "seed": artifact.seed,
            "samples": artifact.samples.tolist(),
        }
    if isinstance(artifact, CleaningReport):
        return {"dropped": artifact.dropped, "filled": artifact.filled}
    if isinstance(artifact, Histogram):
        return {
            "edges": artifact.edges.tolist(),
            "counts": artifact.counts.tolist(),
            "densities": artifact.densities.tolist(),
            "total": artifact.total,
        }
    try:
        return _jsonable(asdict(artifact))
    except TypeError:
        raise TypeError(
            f"no JSON export for {type(artifact).__name__}"
        ) from None
