"""Wishart matrices of return epochs and their eigenvalue spectra.

For an epoch matrix X of shape T x N the Wishart matrix is
``W = X^T X / T``. For T < N it is rank T, so exactly N - T eigenvalues
vanish; those zeros are dropped before any tail statistics. The nonzero
spectrum equals that of the T x T Gram matrix ``X X^T / T``, which
:func:`spectrum_of_epoch` exploits to keep the small-epoch grid cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .returns import EpochMatrix

__all__ = [
    "WishartMatrix",
    "Spectrum",
    "wishart",
    "eigenvalues",
    "spectrum_of_epoch",
    "nonzero_spectrum",
    "collect_element_samples",
    "shuffle_matrix",
    "mp_edge",
]

# Eigenvalues below this fraction of the largest one count as zeros.
ZERO_EIGENVALUE_RTOL = 1e-10


@dataclass(frozen=True)
class WishartMatrix:
    """Symmetric N x N covariance-type matrix of one epoch."""

    values: np.ndarray = field(repr=False)
    T: int = 0
    start: int = 0

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError("Wishart matrix must be square")
        if self.T < 1:
            raise ValueError("epoch length T must be >= 1")

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def Q(self) -> float:
        return self.T / self.N


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of one Wishart matrix, sorted descending."""

    eigenvalues: np.ndarray = field(repr=False)
    T: int = 0
    N: int = 0
    start: int = 0

    def __post_init__(self) -> None:
        eigs = np.asarray(self.eigenvalues, dtype=float)
        object.__setattr__(self, "eigenvalues", eigs)
        if eigs.ndim != 1 or len(eigs) != self.N:
            raise ValueError("need exactly N eigenvalues")
        if np.any(np.diff(eigs) > 0):
            raise ValueError("eigenvalues must be sorted descending")

    @property
    def Q(self) -> float:
        return self.T / self.N


def wishart(epoch: EpochMatrix) -> WishartMatrix:
    """W = X^T X / T, symmetrized by averaging the two triangles."""
    x = epoch.values
    w = x.T @ x / epoch.T
    w = 0.5 * (w + w.T)
    return WishartMatrix(values=w, T=epoch.T, start=epoch.start)


def _clamp_zeros(eigs_desc: np.ndarray) -> np.ndarray:
    lam_max = eigs_desc[0] if len(eigs_desc) else 0.0
    if lam_max <= 0:
        return eigs_desc
    out = eigs_desc.copy()
    out[np.abs(out) < ZERO_EIGENVALUE_RTOL * lam_max] = 0.0
    return out


def eigenvalues(w: WishartMatrix) -> Spectrum:
    """Full symmetric eigendecomposition, clamped and sorted descending.

    Any eigenvalue smaller in magnitude than 1e-10 of the largest is set
    to exactly zero so rank counting is well defined.
    """
    try:
        eigs = np.linalg.eigvalsh(w.values)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(
            f"eigensolver failed for epoch starting at {w.start}: {exc}"
        ) from exc
    eigs = _clamp_zeros(eigs[::-1])
    return Spectrum(eigenvalues=eigs, T=w.T, N=w.N, start=w.start)


def spectrum_of_epoch(epoch: EpochMatrix) -> Spectrum:
    """Spectrum of ``wishart(epoch)`` computed on the cheaper Gram side.

    For T < N the T x T matrix X X^T / T carries the nonzero eigenvalues;
    the remaining N - T zeros are appended exactly. Results agree with
    ``eigenvalues(wishart(epoch))`` to solver precision.
    """
    x = epoch.values
    T, N = x.shape
    if T >= N:
        return eigenvalues(wishart(epoch))
    g = x @ x.T / T
    g = 0.5 * (g + g.T)
    try:
        nonzero = np.linalg.eigvalsh(g)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(
            f"eigensolver failed for epoch starting at {epoch.start}: {exc}"
        ) from exc
    eigs = np.concatenate((nonzero[::-1], np.zeros(N - T)))
    eigs = _clamp_zeros(eigs)
    return Spectrum(eigenvalues=eigs, T=T, N=N, start=epoch.start)


def nonzero_spectrum(s: Spectrum) -> np.ndarray:
    """The strictly positive eigenvalues, enforcing the rank rule.

    A T x N epoch must produce exactly max(N - T, 0) zeros; any other
    count signals degenerate input data.
    """
    eigs = s.eigenvalues
    positive = eigs[eigs > 0.0]
    expected_zeros = max(s.N - s.T, 0)
    n_zero = s.N - len(positive)
    if n_zero != expected_zeros:
        raise ValueError(
            f"unexpected rank for epoch at {s.start}: "
            f"{n_zero} zero eigenvalues, expected {expected_zeros}"
        )
    return positive


def collect_element_samples(
    ws: Iterable[WishartMatrix] | Sequence[WishartMatrix],
) -> np.ndarray:
    """Pool the upper-triangle entries (diagonal included) of many matrices."""
    chunks = []
    for w in ws:
        iu = np.triu_indices(w.N)
        chunks.append(w.values[iu])
    if not chunks:
        raise ValueError("no matrices to sample from")
    return np.concatenate(chunks)


def shuffle_matrix(epoch: EpochMatrix, seed: int) -> EpochMatrix:
    """Uniform random rearrangement of all T*N entries.

    Destroys temporal and cross-asset structure while preserving the
    multiset of entries exactly.
    """
    rng = np.random.default_rng(seed)
    flat = epoch.values.ravel()
    shuffled = flat[rng.permutation(flat.size)]
    return EpochMatrix(
        values=shuffled.reshape(epoch.values.shape), start=epoch.start
    )


def mp_edge(Q: float, sigma2: float = 1.0) -> float:
    """Upper Marchenko-Pastur eigenvalue edge sigma^2 (1 + Q^-1/2)^2."""
    if Q <= 0:
        raise ValueError("Q must be positive")
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    return sigma2 * (1.0 + Q**-0.5) ** 2
