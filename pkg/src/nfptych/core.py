"""Circularly indexed complex-vector algebra.

Every vector of length ``d`` is indexed modulo ``d``.  The operations act on
the last axis, so a stack of signals with shape ``(..., d)`` is processed in
one call.  Conventions:

* shift:        ``(S_k x)_n = x_{(n + k) mod d}``
* reversal:     ``x~_n = x_{(-n) mod d}``
* convolution:  ``(x * y)_n = sum_k x_k y_{(n - k) mod d}``
* DFT:          ``xhat_n = sum_k x_k exp(-2 pi i n k / d)`` (unnormalized)
* inner:        ``<x, y> = sum_n x_n conj(y_n)``
"""

import numpy as np

from .errors import DimensionError

__all__ = [
    "as_signal",
    "circular_shift",
    "reversal",
    "hadamard",
    "circular_convolution",
    "dft",
    "idft",
    "inner",
    "delta_vector",
    "DIRECT_CONVOLUTION_MAX",
]

#: Largest length for which ``circular_convolution(method="auto")`` uses the direct sum.
DIRECT_CONVOLUTION_MAX = 64


def as_signal(x, d=None):
    """Return ``x`` as a complex128 array, optionally checking its length.

    Raises
    ------
    DimensionError
        If ``x`` has zero length, or its last axis differs from ``d``.
    ValueError
        If ``x`` contains NaN or Inf.
    """
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim == 0 or arr.shape[-1] == 0:
        raise DimensionError("a signal needs at least one entry")
    if d is not None and arr.shape[-1] != d:
        raise DimensionError(f"expected length {d}, got {arr.shape[-1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("signal contains non-finite entries")
    return arr


def _same_length(x, y):
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape[-1] != y.shape[-1]:
        raise DimensionError(
            f"length mismatch: {x.shape[-1]} vs {y.shape[-1]}")
    return x, y


def circular_shift(x, k):
    """Circular shift ``S_k``: ``result[n] = x[(n + k) mod d]`` for any integer ``k``."""
    x = np.asarray(x)
    d = x.shape[-1]
    return np.roll(x, -(int(k) % d), axis=-1)


def reversal(x):
    """Reversal about the first entry: ``result[n] = x[(-n) mod d]``."""
    x = np.asarray(x)
    d = x.shape[-1]
    return x[..., (-np.arange(d)) % d]


def hadamard(x, y):
    """Pointwise product of two equal-length vectors."""
    x, y = _same_length(x, y)
    return x * y


def _convolve_direct(x, y):
    d = x.shape[-1]
    n = np.arange(d)
    # idx[n, k] = (n - k) mod d
    idx = (n[:, None] - n[None, :]) % d
    return np.einsum("...k,...nk->...n", x, y[..., idx])


def _convolve_fft(x, y):
    return np.fft.ifft(np.fft.fft(x, axis=-1) * np.fft.fft(y, axis=-1), axis=-1)


def circular_convolution(x, y, method="auto"):
    """Circular convolution ``(x * y)_n = sum_k x_k y_{n-k}``.

    Parameters
    ----------
    x, y : array_like
        Signals with equal last-axis length ``d``; leading axes broadcast.
    method : {"auto", "direct", "fft"}
        ``"direct"`` evaluates the O(d^2) sum, ``"fft"`` uses the convolution
        theorem.  ``"auto"`` picks the direct sum for
        ``d <= DIRECT_CONVOLUTION_MAX`` and the FFT otherwise.

    Returns
    -------
    ndarray
        Complex array with the broadcast shape of ``x`` and ``y``.
    """
    x, y = _same_length(x, y)
    x = x.astype(np.complex128, copy=False)
    y = y.astype(np.complex128, copy=False)
    if method == "auto":
        method = "direct" if x.shape[-1] <= DIRECT_CONVOLUTION_MAX else "fft"
    if method == "direct":
        x, y = np.broadcast_arrays(x, y)
        return _convolve_direct(x, y)
    if method == "fft":
        return _convolve_fft(x, y)
    raise ValueError(f"unknown convolution method {method!r}")


def dft(x):
    """Unnormalized DFT along the last axis, ``xhat_n = sum_k x_k e^{-2 pi i nk/d}``."""
    return np.fft.fft(np.asarray(x, dtype=np.complex128), axis=-1)


def idft(x):
    """Inverse of :func:`dft` (carries the ``1/d`` factor)."""
    return np.fft.ifft(np.asarray(x, dtype=np.complex128), axis=-1)


def inner(x, y):
    """Complex inner product ``<x, y> = sum_n x_n conj(y_n) = y^* x``.

    Linear in ``x`` and conjugate-linear in ``y``.
    """
    x, y = _same_length(x, y)
    return np.sum(x * np.conj(y), axis=-1)


def delta_vector(d, j=0):
    """Standard basis vector ``e_j`` of length ``d`` (index taken mod ``d``)."""
    e = np.zeros(d, dtype=np.complex128)
    e[j % d] = 1.0
    return e
