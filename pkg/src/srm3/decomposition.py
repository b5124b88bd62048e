"""Per-bin factorization of cross-spectral matrices and its inverse.

Each Hermitian PSD matrix ``S[k]`` is factored as ``S = H H*`` through its
eigendecomposition ``S = Phi Sigma Phi*`` with ``H = Phi sqrt(Sigma)``.  The
eigen route is preferred over Cholesky for numerical robustness on nearly
rank-deficient matrices; the factor is made deterministic by a fixed
eigenvalue ordering and eigenvector sign convention, so identical inputs give
bit-identical factors.

``G[k] = H[k]^-1`` supplies the whitening factors used by the quadratic
interaction terms.  Bins with (numerically) zero trace carry ``H = 0``; they
hold no energy, are excluded from inversion, and synthesis treats their
contribution as zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidInputError,
    NotPositiveSemidefiniteError,
    SingularFactorError,
)
from .grids import FrequencyGrid
from .spectra import PSD_TOLERANCE, ZERO_TRACE, CrossSpectrum

#: Relative singular-value floor below which a factor bin counts as singular.
SINGULAR_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SpectralFactor:
    """Deterministic per-bin factor ``H`` with ``H H* = S``."""

    grid: FrequencyGrid
    H: np.ndarray
    zero_bins: np.ndarray  # bool, bins with no energy (H = 0)

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.H)

    @property
    def phases(self) -> np.ndarray:
        """Polar angles of the factor entries, in (-pi, pi]."""
        return np.angle(self.H)


@dataclass(frozen=True)
class InverseFactor:
    """Per-bin inverse ``G = H^-1`` (zero on empty bins)."""

    grid: FrequencyGrid
    G: np.ndarray
    zero_bins: np.ndarray

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.G)

    @property
    def phases(self) -> np.ndarray:
        return np.angle(self.G)


def _normalize_columns(vecs: np.ndarray) -> np.ndarray:
    """Rotate each eigenvector so its first non-negligible entry is real > 0."""
    vecs = vecs.copy()
    m = vecs.shape[0]
    mags = np.abs(vecs)
    lead = np.argmax(mags > 1e-12 * np.maximum(mags.max(axis=0), 1e-300), axis=0)
    for c in range(vecs.shape[1]):
        pivot = vecs[lead[c], c]
        if pivot != 0:
            vecs[:, c] *= np.conj(pivot) / abs(pivot)
    # force exactly-real pivots despite rounding
    for c in range(vecs.shape[1]):
        vecs[lead[c], c] = vecs[lead[c], c].real
    return vecs


def _order_ties(eigvals: np.ndarray, vecs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Within groups of equal eigenvalues, order columns descending-lex.

    Keeps e.g. the factor of the identity matrix equal to the identity.
    """
    n = len(eigvals)
    order = list(range(n))
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and eigvals[stop] == eigvals[start]:
            stop += 1
        if stop - start > 1:
            block = order[start:stop]
            block.sort(
                key=lambda c: tuple(
                    np.concatenate([vecs[:, c].real, vecs[:, c].imag])
                ),
                reverse=True,
            )
            order[start:stop] = block
        start = stop
    order = np.array(order)
    return eigvals[order], vecs[:, order]


def _factor_one(sym: np.ndarray, trace: float, k: int) -> np.ndarray:
    eigvals, vecs = np.linalg.eigh(sym)
    floor = -PSD_TOLERANCE * max(trace, ZERO_TRACE)
    if eigvals[0] < floor:
        raise NotPositiveSemidefiniteError(
            f"matrix at bin {k} is not PSD: eigenvalue {eigvals[0]:.6e}"
            f" below tolerance {floor:.3e}",
            bin_index=k,
            eigenvalue=float(eigvals[0]),
        )
    eigvals = np.maximum(eigvals, 0.0)  # clip roundoff negatives
    vecs = _normalize_columns(vecs)
    eigvals, vecs = _order_ties(eigvals, vecs)
    return vecs * np.sqrt(eigvals)[None, :]


def factor_spectrum(spectrum: CrossSpectrum) -> SpectralFactor:
    """Factor ``S[k] = H[k] H[k]*`` at every bin.

    Raises
    ------
    InvalidInputError
        If some bin is not Hermitian.
    NotPositiveSemidefiniteError
        If some bin has an eigenvalue below ``-PSD_TOLERANCE * trace``.
    """
    vals = spectrum.values
    m, N = spectrum.m, spectrum.N

    herm_err = np.abs(vals - np.conj(np.swapaxes(vals, 1, 2))).max(axis=(1, 2))
    scale = np.maximum(np.abs(vals).max(axis=(1, 2)), 1.0)
    bad = np.nonzero(herm_err > 1e-10 * scale)[0]
    if bad.size:
        raise InvalidInputError(
            f"spectrum is not Hermitian at bin {bad[0]}"
            f" (max asymmetry {herm_err[bad[0]]:.3e})"
        )

    sym = 0.5 * (vals + np.conj(np.swapaxes(vals, 1, 2)))
    traces = np.trace(sym, axis1=1, axis2=2).real
    H = np.zeros((N, m, m), dtype=np.complex128)
    zero_bins = traces < ZERO_TRACE
    for k in range(N):
        if zero_bins[k]:
            continue
        H[k] = _factor_one(sym[k], traces[k], k)
    H.setflags(write=False)
    zero_bins.setflags(write=False)
    return SpectralFactor(spectrum.grid, H, zero_bins)


def invert_factor(factor: SpectralFactor) -> InverseFactor:
    """Invert ``H`` per bin; empty bins stay zero and are never inverted.

    Raises
    ------
    SingularFactorError
        If a non-empty bin has condition number beyond ``1/SINGULAR_TOLERANCE``
        (smallest singular value below ``SINGULAR_TOLERANCE`` times largest).
    """
    N, m, _ = factor.H.shape
    G = np.zeros_like(factor.H)
    for k in range(N):
        if factor.zero_bins[k]:
            continue
        Hk = factor.H[k]
        svals = np.linalg.svd(Hk, compute_uv=False)
        if svals[-1] <= SINGULAR_TOLERANCE * svals[0]:
            raise SingularFactorError(
                f"spectral factor is singular at bin {k}"
                f" (singular values {svals[0]:.3e} .. {svals[-1]:.3e})",
                bin_index=k,
            )
        G[k] = np.linalg.inv(Hk)
    G.setflags(write=False)
    return InverseFactor(factor.grid, G, factor.zero_bins)


def biphase(bispectrum, a: int, l: int, n: int, i: int, j: int) -> float:
    """Polar angle of ``B[a,l,n](w_i, w_j)`` via atan2, in (-pi, pi]."""
    value = bispectrum.values[i, j, a, l, n]
    return float(np.arctan2(value.imag, value.real))
