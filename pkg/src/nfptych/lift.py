"""Near-to-far rearrangement and the block-circulant lifted linear system.

Far-field measurements with masks supported in ``[0, delta)`` are linear in
the banded autocorrelation entries of ``x``.  With ``q = 2 delta - 1`` the
unknowns are packed as ``d`` consecutive blocks of length ``q``::

    z[c * q + j] = conj(x_c) * x_{c + o(j)},   o(j) = j if j < delta else j - q

so slot ``j`` of block ``c`` stores ``X[c + o(j), c]`` of ``X = x x^*``.
Row ``r * q + l`` of the operator then reads
``Y~[r, l] = sum_k  M_k[l, :] @ z_block(r + k)`` with

    M_k[l, j] = m_l[k] * conj(m_l[k + o(j)])    (zero unless 0 <= k + o(j) < delta)

which makes the operator block-circulant and diagonalizable block-wise by
the DFT over block positions.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import core
from .errors import ConfigurationError, DimensionError, IllPosedOperatorError
from .masks import DerivedMaskFamily, PsfSpec
from .measure import DIAGONAL_BAND, FFP, FULL_GRID, IndexSet, MeasurementGrid

__all__ = [
    "LiftedOperator",
    "ConditioningReport",
    "slot_offsets",
    "near_to_far_permutation",
    "rearrange_near_to_far",
    "rearrange_far_to_near",
    "assemble_lifted",
    "pack_lifted",
    "unpack_lifted",
    "solve_lifted",
    "singular_values",
    "conditioning",
    "kappa_bound",
    "fpr_row_permutation",
    "DENSE_SOLVE_MAX",
]

#: Largest ``D`` accepted by the dense cross-check solver.
DENSE_SOLVE_MAX = 2000
_SINGULAR_RTOL = 1e-12


def slot_offsets(delta):
    """Offsets ``o(j)`` for the ``2 delta - 1`` slots of a block."""
    q = 2 * delta - 1
    j = np.arange(q)
    return np.where(j < delta, j, j - q)


@dataclass(frozen=True)
class LiftedOperator:
    """Block-circulant ``D x D`` matrix with ``D = d (2 delta - 1)``.

    ``blocks[k]`` is the ``q x q`` block placed ``k`` block-columns to the
    right of the diagonal, for ``k < delta``; all other blocks are zero.
    """

    blocks: np.ndarray = field(repr=False)
    d: int
    delta: int

    def __post_init__(self):
        q = 2 * self.delta - 1
        blocks = np.array(self.blocks, dtype=np.complex128)
        if blocks.shape != (self.delta, q, q):
            raise DimensionError(
                f"blocks must have shape ({self.delta}, {q}, {q}), got {blocks.shape}")
        if q > self.d:
            raise DimensionError(f"2*delta-1={q} exceeds d={self.d}")
        blocks.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)

    @property
    def q(self):
        return 2 * self.delta - 1

    @property
    def D(self):
        return self.d * self.q

    @property
    def shape(self):
        return (self.D, self.D)

    def matvec(self, z):
        z = np.asarray(z, dtype=np.complex128)
        if z.shape != (self.D,):
            raise DimensionError(f"expected vector of length {self.D}")
        Z = z.reshape(self.d, self.q)
        out = np.zeros_like(Z)
        for k in range(self.delta):
            out += np.roll(Z, -k, axis=0) @ self.blocks[k].T
        return out.ravel()

    def __matmul__(self, z):
        return self.matvec(z)

    def to_dense(self):
        q, d = self.q, self.d
        M = np.zeros((self.D, self.D), dtype=np.complex128)
        for r in range(d):
            for k in range(self.delta):
                c = (r + k) % d
                M[r * q:(r + 1) * q, c * q:(c + 1) * q] += self.blocks[k]
        return M

    def fourier_blocks(self):
        """Blocks ``Lambda_f = sum_k M_k exp(2 pi i f k / d)`` for ``f < d``.

        The operator is unitarily similar to ``blockdiag(Lambda_0, ..., Lambda_{d-1})``.
        """
        k = np.arange(self.delta)
        f = np.arange(self.d)
        phase = np.exp(2j * np.pi * np.outer(f, k) / self.d)
        return np.einsum("fk,kij->fij", phase, self.blocks)


@dataclass(frozen=True)
class ConditioningReport:
    """Extreme singular values of a lifted operator and the reference bound."""

    delta: int
    d: int
    sigma_min: float
    sigma_max: float
    kappa: float
    bound: float

    def as_row(self):
        return {"delta": self.delta, "d": self.d, "sigma_min": self.sigma_min,
                "sigma_max": self.sigma_max, "kappa": self.kappa, "bound": self.bound}


def kappa_bound(delta):
    """Reference condition-number bound ``max(144 e^2, 9 e^2 (delta - 1)^2 / 4)``."""
    e2 = np.e ** 2
    return max(144.0 * e2, 9.0 * e2 * (delta - 1) ** 2 / 4.0)


def near_to_far_permutation(idx):
    """Permutation ``perm`` with ``Y~.values = Y.values[perm]``.

    For ``full_grid`` the far-field entry ``(k, l)`` comes from near-field
    entry ``((-k) mod d, (k - l) mod (2 delta - 1))``; this needs a
    ``(2 delta - 1)``-periodic PSF.  ``diagonal_band`` sets are stored in
    far-field order already, and need no periodicity.
    """
    if idx.kind == FULL_GRID:
        q = idx.L
        if idx.d % q:
            raise ConfigurationError(f"2*delta-1={q} must divide d={idx.d}")
        k, ell = np.meshgrid(np.arange(idx.d), np.arange(q), indexing="ij")
        src_k = (-k) % idx.d
        src_l = (k - ell) % q
        return (src_k * q + src_l).ravel()
    if idx.kind == DIAGONAL_BAND:
        return np.arange(len(idx))
    raise ConfigurationError(
        f"index set of kind {idx.kind!r} is neither a full grid nor a diagonal band")


def rearrange_near_to_far(Y, psf=None):
    """Reorder near-field measurements into far-field form.

    Returns a grid over ``[K] x [L]`` with
    ``Y~[k, l] = |<conj(S_l p~ o m), S_k x>|^2`` (plus the permuted noise).

    Parameters
    ----------
    Y : MeasurementGrid
        Near-field grid of kind ``full_grid`` or ``diagonal_band``.
    psf : PsfSpec, optional
        If given with a ``full_grid``, its ``2 delta - 1`` periodicity is
        verified.
    """
    idx = Y.index_set
    if idx.kind == FULL_GRID and psf is not None:
        q = idx.L
        if isinstance(psf, PsfSpec):
            psf = psf.p
        psf = np.asarray(psf)
        scale = max(1.0, float(np.max(np.abs(psf))))
        if np.max(np.abs(core.circular_shift(psf, q) - psf)) > 1e-12 * scale:
            raise ConfigurationError(f"full-grid rearrangement needs a {q}-periodic psf")
    perm = near_to_far_permutation(idx)
    out_idx = IndexSet.ffp_grid(idx.d, idx.K, idx.L, idx.delta)
    noise = None if Y.noise is None else Y.noise[perm]
    return MeasurementGrid(Y.values[perm], out_idx, noise, Y.snr_db)


def rearrange_far_to_near(Yt, idx):
    """Inverse of :func:`rearrange_near_to_far` for the near-field index set ``idx``."""
    perm = near_to_far_permutation(idx)
    if len(perm) != len(Yt.values):
        raise DimensionError("grid size does not match the index set")
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    noise = None if Yt.noise is None else Yt.noise[inv]
    return MeasurementGrid(Yt.values[inv], idx, noise, Yt.snr_db)


def assemble_lifted(family, d, delta, require_divisible=True):
    """Build the block-circulant operator from ``2 delta - 1`` local masks.

    Raises
    ------
    ConfigurationError
        If the family size is not ``2 delta - 1``, a mask leaves ``[0, delta)``,
        or (with ``require_divisible``) ``2 delta - 1`` does not divide ``d``.
    """
    if not isinstance(family, DerivedMaskFamily):
        family = DerivedMaskFamily(family)
    q = 2 * delta - 1
    if family.d != d:
        raise DimensionError(f"masks have length {family.d}, expected {d}")
    if family.L != q:
        raise ConfigurationError(f"need {q} masks, got {family.L}")
    if require_divisible and d % q:
        raise ConfigurationError(f"2*delta-1={q} must divide d={d}")
    if np.any(family.masks[:, delta:] != 0):
        raise ConfigurationError(f"mask support exceeds [0, {delta})")
    m = family.masks[:, :delta]                      # (q, delta)
    off = slot_offsets(delta)                         # (q,)
    k = np.arange(delta)
    tgt = k[:, None] + off[None, :]                   # (delta, q) index k + o(j)
    valid = (tgt >= 0) & (tgt < delta)
    tgt_c = np.clip(tgt, 0, delta - 1)
    # blocks[k, l, j] = m[l, k] * conj(m[l, k + o(j)])
    blocks = m.T[:, :, None] * np.conj(m[:, tgt_c]).transpose(1, 0, 2)
    blocks = np.where(valid[:, None, :], blocks, 0.0)
    return LiftedOperator(blocks, d, delta)


def pack_lifted(x, delta):
    """Lifted vector ``z`` with ``z[c q + j] = conj(x_c) x_{c + o(j)}``."""
    x = core.as_signal(x)
    d = x.size
    if 2 * delta - 1 > d:
        raise DimensionError(f"2*delta-1 exceeds d={d}")
    off = slot_offsets(delta)
    c = np.arange(d)
    Z = np.conj(x)[:, None] * x[(c[:, None] + off[None, :]) % d]
    return Z.ravel()


def unpack_lifted(z, d, delta):
    """Banded autocorrelation estimate from a lifted vector.

    Exact left inverse of :func:`pack_lifted`: entry ``X[c + o(j), c]`` is
    read from ``z[c q + j]``.
    """
    from .angsync import BandedAutocorrelation

    q = 2 * delta - 1
    z = np.asarray(z, dtype=np.complex128)
    if z.shape != (d * q,):
        raise DimensionError(f"expected lifted vector of length {d * q}")
    Z = z.reshape(d, q)
    off = slot_offsets(delta)
    # band[i, slot(-o)] = X[i, i - o] = Z[i - o, slot(o)]
    band = np.empty_like(Z)
    neg = (-np.arange(q)) % q
    for j in range(q):
        band[:, neg[j]] = np.roll(Z[:, j], off[j])
    return BandedAutocorrelation(band, d, delta)


def solve_lifted(M, y, method="fft"):
    """Solve ``M z = y``.

    Parameters
    ----------
    M : LiftedOperator
    y : array_like
        Right-hand side of length ``D``; row ``r q + l`` holds ``Y~[r, l]``.
    method : {"fft", "dense"}
        ``"fft"`` applies a DFT across block positions and solves the ``d``
        independent ``q x q`` systems; ``"dense"`` LU-factorizes the assembled
        matrix (only for ``D <= DENSE_SOLVE_MAX``).

    Raises
    ------
    IllPosedOperatorError
        If some Fourier block has ``sigma_min < 1e-12 * sigma_max(M)``.
    """
    y = np.asarray(y, dtype=np.complex128)
    if y.shape != (M.D,):
        raise DimensionError(f"right-hand side must have length {M.D}")
    if method == "dense":
        if M.D > DENSE_SOLVE_MAX:
            raise ConfigurationError(f"dense solve limited to D <= {DENSE_SOLVE_MAX}")
        A = M.to_dense()
        s = np.linalg.svd(A, compute_uv=False)
        if s[-1] < _SINGULAR_RTOL * s[0]:
            raise IllPosedOperatorError(-1, s[-1], "assembled operator is singular")
        return scipy.linalg.lu_solve(scipy.linalg.lu_factor(A), y)
    if method != "fft":
        raise ValueError(f"unknown method {method!r}")
    lam = M.fourier_blocks()
    s = np.linalg.svd(lam, compute_uv=False)         # (d, q), descending
    smax = s[:, 0].max()
    bad = np.flatnonzero(s[:, -1] < _SINGULAR_RTOL * smax)
    if bad.size:
        f = int(bad[np.argmin(s[bad, -1])])
        raise IllPosedOperatorError(f, s[f, -1])
    Yhat = np.fft.fft(y.reshape(M.d, M.q), axis=0)
    Zhat = np.linalg.solve(lam, Yhat[:, :, None])[:, :, 0]
    return np.fft.ifft(Zhat, axis=0).ravel()


def singular_values(M):
    """All ``D`` singular values of ``M`` in descending order."""
    s = np.linalg.svd(M.fourier_blocks(), compute_uv=False)
    return np.sort(s.ravel())[::-1]


def conditioning(M):
    """Condition number of ``M`` from its Fourier blocks, with the reference bound."""
    s = singular_values(M)
    smin, smax = float(s[-1]), float(s[0])
    kappa = smax / smin if smin > 0 else np.inf
    return ConditioningReport(M.delta, M.d, smin, smax, kappa, kappa_bound(M.delta))


def fpr_row_permutation(delta):
    """Row map ``i -> 2 i mod (2 delta - 1)`` relating admissible and exponential blocks."""
    q = 2 * delta - 1
    return (2 * np.arange(q)) % q
