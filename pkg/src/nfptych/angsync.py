"""Banded autocorrelations, angular synchronization and graph diagnostics.

A banded autocorrelation keeps the entries ``X[i, j] = x_i conj(x_j)`` with
``|i - j| mod d < delta``.  Magnitudes come from the diagonal; phases are
recovered by angular synchronization over the band graph whose edge weights
are ``|X[i, j]|^2``.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.sparse.csgraph import connected_components, shortest_path

from . import core
from .errors import ConvergenceError, DimensionError, SynchronizationError

__all__ = [
    "BandedAutocorrelation",
    "SyncGraph",
    "symmetrize_band",
    "estimate_magnitudes",
    "phase_only",
    "sync_leading_eigenvector",
    "sync_weighted_laplacian",
    "phase_laplacian",
    "spectral_gap",
    "unweighted_diameter",
    "inverse_weighted_diameter",
    "band_diameter_bound",
    "gap_lower_bounds",
    "assemble_estimate",
    "normalize_global_phase",
]

_PHASE_FLOOR = 1e-14


def _offsets(delta):
    q = 2 * delta - 1
    j = np.arange(q)
    return np.where(j < delta, j, j - q)


@dataclass(frozen=True)
class BandedAutocorrelation:
    """Entries of a ``d x d`` matrix on the circular band ``|i - j| mod d < delta``.

    ``band[i, s]`` holds ``X[i, (i + o(s)) mod d]`` where ``o(s) = s`` for
    ``s < delta`` and ``s - (2 delta - 1)`` otherwise.  Column 0 is the
    diagonal.
    """

    band: np.ndarray = field(repr=False)
    d: int
    delta: int

    def __post_init__(self):
        q = 2 * self.delta - 1
        band = np.array(self.band, dtype=np.complex128)
        if band.shape != (self.d, q):
            raise DimensionError(f"band must have shape ({self.d}, {q}), got {band.shape}")
        if q > self.d:
            raise DimensionError(f"2*delta-1={q} exceeds d={self.d}")
        band.setflags(write=False)
        object.__setattr__(self, "band", band)

    @property
    def offsets(self):
        return _offsets(self.delta)

    def _cols(self):
        return (np.arange(self.d)[:, None] + self.offsets[None, :]) % self.d

    def to_dense(self):
        X = np.zeros((self.d, self.d), dtype=np.complex128)
        X[np.arange(self.d)[:, None], self._cols()] = self.band
        return X

    @classmethod
    def from_dense(cls, X, delta):
        """Restrict a dense matrix to the band (off-band entries are dropped)."""
        X = np.asarray(X, dtype=np.complex128)
        d = X.shape[0]
        if X.shape != (d, d):
            raise DimensionError("expected a square matrix")
        cols = (np.arange(d)[:, None] + _offsets(delta)[None, :]) % d
        return cls(X[np.arange(d)[:, None], cols], d, delta)

    @classmethod
    def from_signal(cls, x, delta):
        """Band of ``x x^*``."""
        x = core.as_signal(x)
        d = x.size
        cols = (np.arange(d)[:, None] + _offsets(delta)[None, :]) % d
        return cls(x[:, None] * np.conj(x[cols]), d, delta)

    def diagonal(self):
        return self.band[:, 0]

    def scaled(self, c):
        return BandedAutocorrelation(c * self.band, self.d, self.delta)


def symmetrize_band(X):
    """Hermitian part ``(X + X^*) / 2`` restricted to the band."""
    q = 2 * X.delta - 1
    off = X.offsets
    neg = (-np.arange(q)) % q                        # slot holding offset -o(s)
    rows = (np.arange(X.d)[:, None] + off[None, :]) % X.d
    mirrored = np.conj(X.band[rows, neg[None, :]])   # conj X[i + o, i]
    return BandedAutocorrelation((X.band + mirrored) / 2, X.d, X.delta)


def estimate_magnitudes(X):
    """``sqrt(max(Re X[j, j], 0))``; negative noisy diagonals clamp to zero."""
    return np.sqrt(np.maximum(X.diagonal().real, 0.0))


def phase_only(X):
    """Dense ``X / |X|`` on the band, zero where ``X`` vanishes."""
    Xd = X.to_dense()
    mag = np.abs(Xd)
    out = np.zeros_like(Xd)
    nz = mag > 0
    out[nz] = Xd[nz] / mag[nz]
    return out


def normalize_global_phase(u):
    """Rotate ``u`` so its first nonzero entry is real and positive."""
    u = np.asarray(u, dtype=np.complex128)
    nz = np.flatnonzero(np.abs(u) > 0)
    if nz.size == 0:
        return u.copy()
    return u * np.conj(u[nz[0]]) / np.abs(u[nz[0]])


def _unit_phases(v):
    mag = np.abs(v)
    out = np.ones_like(v)
    ok = mag >= _PHASE_FLOOR
    out[ok] = v[ok] / mag[ok]
    return normalize_global_phase(out)


def sync_leading_eigenvector(X, tol=1e-10, max_iters=10_000, method="power"):
    """Phases from the leading eigenvector of the phase-only band matrix.

    Parameters
    ----------
    X : BandedAutocorrelation
    tol : float
        Stop when ``||A u - (u^* A u) u|| <= tol * ||A||``.
    max_iters : int
    method : {"power", "dense"}
        Power iteration on ``A + (2 delta - 1) I`` (the shift makes the
        spectrum nonnegative), or a full Hermitian eigensolve.

    Returns
    -------
    ndarray
        Unit-modulus phases, first entry real positive.
    """
    A = phase_only(X)
    if not np.any(A):
        raise SynchronizationError("band has no nonzero entries")
    A = (A + A.conj().T) / 2
    if method == "dense":
        _, vecs = scipy.linalg.eigh(A, subset_by_index=[X.d - 1, X.d - 1])
        return _unit_phases(vecs[:, 0])
    if method != "power":
        raise ValueError(f"unknown method {method!r}")
    shift = 2 * X.delta - 1
    scale = np.abs(A).sum(axis=1).max()
    u = np.ones(X.d, dtype=np.complex128) / np.sqrt(X.d)
    res = np.inf
    for it in range(1, max_iters + 1):
        Au = A @ u
        res = np.linalg.norm(Au - np.vdot(u, Au) * u)
        if res <= tol * scale:
            return _unit_phases(u)
        w = Au + shift * u
        u = w / np.linalg.norm(w)
    raise ConvergenceError("leading-eigenvector power iteration stalled", res, max_iters)


def phase_laplacian(X):
    """Hermitian phase-weighted Laplacian ``D - W o X^(theta)``.

    Off-diagonal entries are ``-|X_ij| X_ij`` (weights ``|X_ij|^2`` times
    unit phases); the diagonal carries the weighted degrees.
    """
    Xd = symmetrize_band(X).to_dense()
    np.fill_diagonal(Xd, 0)
    off = np.abs(Xd) * Xd
    deg = (np.abs(Xd) ** 2).sum(axis=1)
    return np.diag(deg).astype(np.complex128) - off


def sync_weighted_laplacian(X, tol=1e-10, max_iters=10_000, method="inverse"):
    """Phases from the smallest eigenvector of :func:`phase_laplacian`.

    In the noiseless case the phases of ``x`` span the null space, so the
    result equals ``x / |x|`` up to a global phase.

    Parameters
    ----------
    X : BandedAutocorrelation
    tol : float
        Residual tolerance relative to the largest degree.
    max_iters : int
    method : {"inverse", "dense"}
        Inverse iteration with a Cholesky factorization of a slightly
        shifted Laplacian, or a dense eigensolve.

    Raises
    ------
    SynchronizationError
        If the weight graph is disconnected.
    ConvergenceError
        If inverse iteration does not converge.
    """
    graph = SyncGraph.from_autocorrelation(X)
    if not graph.is_connected():
        raise SynchronizationError("weight graph is disconnected")
    L1 = phase_laplacian(X)
    if method == "dense":
        _, vecs = scipy.linalg.eigh(L1, subset_by_index=[0, 0])
        return _unit_phases(vecs[:, 0])
    if method != "inverse":
        raise ValueError(f"unknown method {method!r}")
    scale = max(2.0 * float(np.max(L1.diagonal().real)), np.finfo(float).tiny)
    eps = 1e-8 * scale
    factor = scipy.linalg.cho_factor(L1 + eps * np.eye(X.d))
    v = np.ones(X.d, dtype=np.complex128) / np.sqrt(X.d)
    res = np.inf
    for it in range(1, max_iters + 1):
        w = scipy.linalg.cho_solve(factor, v)
        v = w / np.linalg.norm(w)
        Lv = L1 @ v
        res = np.linalg.norm(Lv - np.vdot(v, Lv) * v)
        if res <= tol * scale:
            return _unit_phases(v)
    raise ConvergenceError("inverse iteration for the phase Laplacian stalled", res, max_iters)


@dataclass(frozen=True)
class SyncGraph:
    """Weighted undirected graph given by a symmetric nonnegative matrix ``W``."""

    W: np.ndarray = field(repr=False)
    delta: int | None = None

    def __post_init__(self):
        W = np.array(self.W, dtype=np.float64)
        n = W.shape[0]
        if W.shape != (n, n):
            raise DimensionError("weight matrix must be square")
        if np.any(W < 0):
            raise ValueError("weights must be nonnegative")
        if not np.allclose(W, W.T, rtol=1e-12, atol=0):
            raise ValueError("weight matrix must be symmetric")
        np.fill_diagonal(W, 0.0)
        W.setflags(write=False)
        object.__setattr__(self, "W", W)

    @classmethod
    def from_autocorrelation(cls, X):
        """Weights ``|X_ij|^2`` on the off-diagonal band of the symmetrized ``X``."""
        Xd = symmetrize_band(X).to_dense()
        W = np.abs(Xd) ** 2
        W = (W + W.T) / 2
        return cls(W, X.delta)

    @classmethod
    def complete(cls, n, weight=1.0):
        return cls(weight * (np.ones((n, n)) - np.eye(n)))

    @property
    def n(self):
        return self.W.shape[0]

    @property
    def degree(self):
        return self.W.sum(axis=1)

    @property
    def laplacian(self):
        return np.diag(self.degree) - self.W

    @property
    def normalized_laplacian(self):
        deg = self.degree
        inv = np.zeros_like(deg)
        inv[deg > 0] = 1.0 / np.sqrt(deg[deg > 0])
        return inv[:, None] * self.laplacian * inv[None, :]

    def is_connected(self):
        ncomp, _ = connected_components(self.W > 0, directed=False)
        return ncomp == 1


def spectral_gap(g):
    """Second smallest eigenvalue of the graph Laplacian (``0`` for ``n = 1``)."""
    if g.n < 2:
        return 0.0
    return float(scipy.linalg.eigvalsh(g.laplacian)[1])


def unweighted_diameter(g):
    """Hop diameter by breadth-first search; ``inf`` if disconnected."""
    dist = shortest_path(g.W > 0, directed=False, unweighted=True)
    return float(dist.max())


def inverse_weighted_diameter(g):
    """Diameter with edge lengths ``1 / W_ij``."""
    lengths = np.zeros_like(g.W)
    nz = g.W > 0
    lengths[nz] = 1.0 / g.W[nz]
    return float(shortest_path(lengths, directed=False).max())


def band_diameter_bound(d, delta):
    """``ceil((d // 2) / (delta - 1))``, the hop diameter of the full band graph."""
    if delta < 2:
        return np.inf
    return int(-(-(d // 2) // (delta - 1)))


def gap_lower_bounds(g, x_est=None):
    """Two lower bounds on :func:`spectral_gap`.

    Returns
    -------
    (float, float)
        ``min|x|^4 / max|x|^2 * 4 (delta - 1) / d^2`` (``nan`` without
        ``x_est`` or ``g.delta``), and
        ``2 W_min^2 / (W_max (n - 1) diam)`` with ``diam`` the hop diameter
        and ``W_min``, ``W_max`` taken over nonzero weights.
    """
    if x_est is not None and g.delta is not None:
        a = np.abs(np.asarray(x_est))
        amax = a.max()
        mag_bound = 0.0 if amax == 0 else a.min() ** 4 / amax ** 2 * 4 * (g.delta - 1) / g.n ** 2
    else:
        mag_bound = np.nan
    w = g.W[g.W > 0]
    if w.size == 0 or g.n < 2:
        return mag_bound, 0.0
    diam = unweighted_diameter(g)
    graph_bound = 2 * w.min() ** 2 / (w.max() * (g.n - 1) * diam)
    return float(mag_bound), float(graph_bound)


def assemble_estimate(phases, magnitudes):
    """Entrywise product ``magnitudes * phases``."""
    phases = np.asarray(phases, dtype=np.complex128)
    magnitudes = np.asarray(magnitudes, dtype=np.float64)
    if phases.shape != magnitudes.shape:
        raise DimensionError("phases and magnitudes differ in length")
    return magnitudes * phases
