"""Block phase retrieval for locally supported masks.

Pipeline: rearrange near-field data into far-field form, solve the lifted
block-circulant system for the banded autocorrelation, then read magnitudes
off its diagonal and phases from weighted angular synchronization.
"""

import numpy as np

from . import angsync, lift
from .errors import ConfigurationError
from .masks import MaskSpec, PsfSpec, derive_masks
from .measure import DIAGONAL_BAND, FULL_GRID

__all__ = ["recover_autocorrelation", "nfp_block_pr"]


def recover_autocorrelation(Y, psf, mask, solver="fft"):
    """Banded autocorrelation estimate from near-field measurements.

    Parameters
    ----------
    Y : MeasurementGrid
        Full grid (needs a ``2 delta - 1``-periodic PSF) or a diagonal band
        covering ``[d] x [2 delta - 1]``.
    psf : PsfSpec
    mask : MaskSpec
        Supported in ``[0, mask.delta)``.
    solver : {"fft", "dense"}

    Returns
    -------
    BandedAutocorrelation
        Symmetrized estimate of ``x x^*`` on the band.
    """
    if not isinstance(psf, PsfSpec):
        psf = PsfSpec(psf)
    if not isinstance(mask, MaskSpec):
        raise ConfigurationError("mask must be a MaskSpec carrying its support size")
    d, delta = Y.d, mask.delta
    q = 2 * delta - 1
    idx = Y.index_set
    if idx.kind not in (FULL_GRID, DIAGONAL_BAND) or idx.shape != (d, q):
        raise ConfigurationError(
            f"need all {d} shifts and {q} detector entries per shift, got {idx.kind} {idx.shape}")
    Yt = lift.rearrange_near_to_far(Y, psf)
    family = derive_masks(psf, mask, q)
    M = lift.assemble_lifted(family, d, delta, require_divisible=idx.kind == FULL_GRID)
    z = lift.solve_lifted(M, Yt.values, method=solver)
    return angsync.symmetrize_band(lift.unpack_lifted(z, d, delta))


def nfp_block_pr(Y, psf, mask, solver="fft", sync="laplacian"):
    """Recover ``x`` (up to a global phase) from near-field measurements.

    Parameters
    ----------
    Y, psf, mask, solver
        As in :func:`recover_autocorrelation`.
    sync : {"laplacian", "eigenvector"}
        Weighted-Laplacian synchronization, or the leading eigenvector of
        the phase-only band matrix.

    Returns
    -------
    ndarray
        Estimate of ``x``.
    """
    X = recover_autocorrelation(Y, psf, mask, solver=solver)
    mags = angsync.estimate_magnitudes(X)
    if sync == "laplacian":
        phases = angsync.sync_weighted_laplacian(X)
    elif sync == "eigenvector":
        phases = angsync.sync_leading_eigenvector(X)
    else:
        raise ValueError(f"unknown synchronization {sync!r}")
    return angsync.assemble_estimate(phases, mags)
