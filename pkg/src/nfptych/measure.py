"""Forward near-field / far-field measurement simulation and noise injection."""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import core
from .errors import ConfigurationError, DegenerateInputError, DimensionError
from .masks import DerivedMaskFamily, MaskSpec, PsfSpec

__all__ = [
    "IndexSet",
    "MeasurementGrid",
    "NoiseSpec",
    "gaussian_signal",
    "forward_nfp",
    "forward_ffp",
    "add_noise",
    "snr_db",
]

FULL_GRID = "full_grid"
DIAGONAL_BAND = "diagonal_band"
FFP = "ffp"


@dataclass(frozen=True)
class IndexSet:
    """Ordered set of measurement index pairs ``(k, l)`` in ``[d] x [d]``.

    Kinds
    -----
    ``full_grid``
        All ``(k, l)`` with ``k < d`` and ``l < 2 delta - 1``, row-major.
    ``diagonal_band``
        Pairs ``((-k) mod d, (k - l) mod d)`` for ``k < K``, ``l < L``, in
        ``(k, l)`` row-major order.  With ``L = d`` the ``K`` shifts are
        observed in full.
    ``ffp``
        Plain far-field grid ``[K] x [L]``, row-major.

    ``K`` and ``L`` always give the grid shape, so ``values.reshape(K, L)``
    is meaningful for every kind.
    """

    kind: str
    d: int
    K: int
    L: int
    delta: int | None = None
    pairs: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in (FULL_GRID, DIAGONAL_BAND, FFP):
            raise ConfigurationError(f"unknown index-set kind {self.kind!r}")
        if not (1 <= self.K <= self.d and 1 <= self.L <= self.d):
            raise DimensionError(f"K={self.K}, L={self.L} must lie in [1, d={self.d}]")
        k, ell = np.meshgrid(np.arange(self.K), np.arange(self.L), indexing="ij")
        k, ell = k.ravel(), ell.ravel()
        if self.kind == DIAGONAL_BAND:
            pairs = np.stack([(-k) % self.d, (k - ell) % self.d], axis=1)
        else:
            pairs = np.stack([k, ell], axis=1)
        pairs.setflags(write=False)
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def full_grid(cls, d, delta):
        q = 2 * delta - 1
        if q > d:
            raise DimensionError(f"2*delta-1={q} exceeds d={d}")
        return cls(FULL_GRID, d, d, q, delta)

    @classmethod
    def diagonal_band(cls, d, K, L, delta=None):
        return cls(DIAGONAL_BAND, d, K, L, delta)

    @classmethod
    def ffp_grid(cls, d, K, L, delta=None):
        return cls(FFP, d, K, L, delta)

    @property
    def shape(self):
        return (self.K, self.L)

    def __len__(self):
        return self.K * self.L


@dataclass(frozen=True)
class NoiseSpec:
    """Target SNR in dB (``math.inf`` for noiseless) and PRNG seed."""

    target_snr_db: float
    seed: int | np.random.Generator = 0

    def __post_init__(self):
        if math.isnan(self.target_snr_db) or self.target_snr_db == -math.inf:
            raise ConfigurationError("target SNR must be finite or +inf")


@dataclass(frozen=True)
class MeasurementGrid:
    """Phaseless intensities over an index set, with the additive noise used.

    ``values[i]`` belongs to ``index_set.pairs[i]``.  ``noise`` is ``None``
    for a clean grid; otherwise ``values - noise`` are the clean intensities.
    """

    values: np.ndarray = field(repr=False)
    index_set: IndexSet
    noise: np.ndarray | None = field(default=None, repr=False)
    snr_db: float | None = None

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (len(self.index_set),):
            raise DimensionError(
                f"expected {len(self.index_set)} values, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.noise is not None:
            noise = np.array(self.noise, dtype=np.float64)
            if noise.shape != values.shape:
                raise DimensionError("noise shape does not match values")
            noise.setflags(write=False)
            object.__setattr__(self, "noise", noise)

    @property
    def d(self):
        return self.index_set.d

    @property
    def delta(self):
        return self.index_set.delta

    @property
    def clean(self):
        """Noise-free intensities ``Y - N``."""
        if self.noise is None:
            return self.values
        return self.values - self.noise

    def as_matrix(self):
        """Values as a ``(K, L)`` array."""
        return self.values.reshape(self.index_set.shape)


def gaussian_signal(d, seed):
    """Random sample with i.i.d. standard normal real and imaginary parts."""
    rng = np.random.default_rng(seed)
    return rng.standard_normal(d) + 1j * rng.standard_normal(d)


def _nfp_rows(x, p, m, shifts):
    # rows[i] = p * (S_{shifts[i]} m o x)
    illum = np.stack([core.circular_shift(m, k) for k in shifts]) * x
    return core.circular_convolution(p[None, :], illum)


def forward_nfp(x, psf, mask, idx):
    """Near-field intensities ``|(p * (S_k m o x))_l|^2`` for ``(k, l)`` in ``idx``.

    Parameters
    ----------
    x : array_like
        Sample of length ``d``.
    psf : PsfSpec or array_like
    mask : MaskSpec or array_like
    idx : IndexSet
        Must be of kind ``full_grid`` or ``diagonal_band``.

    Returns
    -------
    MeasurementGrid
        Noiseless grid over ``idx``.
    """
    p = psf.p if isinstance(psf, PsfSpec) else core.as_signal(psf)
    m = mask.m if isinstance(mask, MaskSpec) else core.as_signal(mask)
    x = core.as_signal(x)
    d = idx.d
    for name, v in (("x", x), ("psf", p), ("mask", m)):
        if v.shape != (d,):
            raise DimensionError(f"{name} has length {v.shape[-1]}, index set has d={d}")
    if idx.kind == FFP:
        raise ConfigurationError("forward_nfp needs a near-field index set")
    shifts, inverse = np.unique(idx.pairs[:, 0], return_inverse=True)
    rows = _nfp_rows(x, p, m, shifts)
    amp = rows[inverse, idx.pairs[:, 1]]
    return MeasurementGrid(np.abs(amp) ** 2, idx)


def forward_ffp(x, family, K):
    """Far-field intensities ``|<m_l, S_k x>|^2`` over ``[K] x [L]``."""
    if not isinstance(family, DerivedMaskFamily):
        family = DerivedMaskFamily(family)
    x = core.as_signal(x, family.d)
    d = family.d
    if not 1 <= K <= d:
        raise DimensionError(f"K={K} must lie in [1, d={d}]")
    shifted = np.stack([core.circular_shift(x, k) for k in range(K)])
    # amp[k, l] = <m_l, S_k x> = sum_n m_l[n] conj((S_k x)_n)
    amp = shifted.conj() @ family.masks.T
    idx = IndexSet.ffp_grid(d, K, family.L)
    return MeasurementGrid((np.abs(amp) ** 2).ravel(), idx)


def snr_db(Y, N):
    """``10 log10(||Y - N||_F / ||N||_F)``; ``inf`` when ``N`` vanishes."""
    Y = np.asarray(Y, dtype=np.float64)
    N = np.asarray(N, dtype=np.float64)
    nn = np.linalg.norm(N)
    if nn == 0:
        return math.inf
    return 10.0 * math.log10(np.linalg.norm(Y - N) / nn)


def add_noise(grid, noise_spec):
    """Add i.i.d. Gaussian noise rescaled to hit ``noise_spec.target_snr_db`` exactly.

    The noise is drawn in index-set order from a single stream seeded by
    ``noise_spec.seed`` and scaled so that ``10 log10(||Y_clean|| / ||N||)``
    equals the target.  ``target_snr_db = inf`` returns ``N = 0``.
    """
    if grid.noise is not None and np.any(grid.noise != 0):
        raise ConfigurationError("grid already carries noise")
    clean = grid.values
    if noise_spec.target_snr_db == math.inf:
        return replace(grid, noise=np.zeros_like(clean), snr_db=math.inf)
    norm_clean = np.linalg.norm(clean)
    if norm_clean == 0:
        raise DegenerateInputError("cannot set an SNR for all-zero measurements")
    rng = np.random.default_rng(noise_spec.seed)
    noise = rng.standard_normal(clean.shape)
    noise *= norm_clean / (np.linalg.norm(noise) * 10.0 ** (noise_spec.target_snr_db / 10.0))
    return MeasurementGrid(clean + noise, grid.index_set, noise, noise_spec.target_snr_db)
