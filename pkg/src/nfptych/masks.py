"""PSF and mask families.

Three constructions are provided:

* exponential far-field masks (``build_fpr_mask``), the well-conditioned
  reference family for the lifted system;
* the admissible chirp PSF / exponential mask pair (``build_admissible_pair``)
  whose derived masks are phase-modulated copies of the far-field family;
* a low-pass PSF with a globally supported Gaussian mask
  (``build_lowpass_psf``, ``build_random_mask``) for the Wirtinger flow
  experiments.
"""

from dataclasses import dataclass, field

import numpy as np

from . import core
from .errors import ConfigurationError, DimensionError

__all__ = [
    "MaskSpec",
    "PsfSpec",
    "DerivedMaskFamily",
    "decay_rate",
    "build_fpr_mask",
    "build_fpr_family",
    "build_admissible_pair",
    "derive_masks",
    "build_lowpass_psf",
    "build_random_mask",
    "support",
]

_PERIODICITY_TOL = 1e-12


def support(v, tol=0.0):
    """Indices ``n`` with ``|v_n| > tol``."""
    return np.flatnonzero(np.abs(np.asarray(v)) > tol)


@dataclass(frozen=True)
class MaskSpec:
    """Illumination mask ``m`` with declared support size ``delta``.

    ``delta`` equals ``d`` for globally supported masks.
    """

    m: np.ndarray
    delta: int

    def __post_init__(self):
        m = core.as_signal(self.m)
        if m.ndim != 1:
            raise DimensionError("mask must be one-dimensional")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)
        if not 1 <= self.delta <= m.size:
            raise DimensionError(f"delta={self.delta} must lie in [1, d={m.size}]")

    @property
    def d(self):
        return self.m.size


@dataclass(frozen=True)
class PsfSpec:
    """Point spread function ``p``, optionally claimed to be ``q``-periodic.

    The claim is checked on construction: ``p[(n + q) mod d] == p[n]`` to 1e-12.
    """

    p: np.ndarray
    periodicity_claim: int | None = None

    def __post_init__(self):
        p = core.as_signal(self.p)
        if p.ndim != 1:
            raise DimensionError("psf must be one-dimensional")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)
        q = self.periodicity_claim
        if q is not None:
            scale = max(1.0, float(np.max(np.abs(p))))
            if np.max(np.abs(core.circular_shift(p, q) - p)) > _PERIODICITY_TOL * scale:
                raise ConfigurationError(f"psf is not {q}-periodic")

    @property
    def d(self):
        return self.p.size


@dataclass(frozen=True)
class DerivedMaskFamily:
    """Stack of far-field masks, ``masks[l]`` is the mask with index ``l``."""

    masks: np.ndarray = field(repr=False)

    def __post_init__(self):
        masks = np.array(self.masks, dtype=np.complex128)
        if masks.ndim != 2 or masks.shape[0] < 1:
            raise DimensionError("mask family must have shape (L, d) with L >= 1")
        masks.setflags(write=False)
        object.__setattr__(self, "masks", masks)

    @property
    def L(self):
        return self.masks.shape[0]

    @property
    def d(self):
        return self.masks.shape[1]

    def __len__(self):
        return self.L

    def __getitem__(self, ell):
        return self.masks[ell]

    def support_size(self, tol=0.0):
        """Smallest ``s`` with every mask supported in ``[0, s)``."""
        nz = np.flatnonzero(np.any(np.abs(self.masks) > tol, axis=0))
        return int(nz[-1]) + 1 if nz.size else 0


def decay_rate(delta):
    """Exponential decay scale ``a = max(4, (delta - 1) / 2)`` of the masks."""
    return max(4.0, (delta - 1) / 2.0)


def _check_delta(d, delta):
    if delta < 1:
        raise ConfigurationError(f"delta must be positive, got {delta}")
    if delta > d:
        raise DimensionError(f"delta={delta} exceeds d={d}")


def _exp_profile(delta):
    n = np.arange(delta)
    return np.exp(-(n + 1) / decay_rate(delta)) / (2 * delta - 1) ** 0.25


def build_fpr_mask(d, delta, ell):
    """Exponential far-field mask with modulation index ``ell``.

    Entry ``n < delta`` is ``e^{-(n+1)/a} / (2 delta - 1)^{1/4} * e^{2 pi i n ell / (2 delta - 1)}``;
    all other entries are zero.
    """
    _check_delta(d, delta)
    q = 2 * delta - 1
    if not 0 <= ell < q:
        raise ConfigurationError(f"ell={ell} must lie in [0, {q})")
    n = np.arange(delta)
    out = np.zeros(d, dtype=np.complex128)
    out[:delta] = _exp_profile(delta) * np.exp(2j * np.pi * n * ell / q)
    return out


def build_fpr_family(d, delta):
    """All ``2 delta - 1`` exponential far-field masks as a family."""
    return DerivedMaskFamily(
        np.stack([build_fpr_mask(d, delta, ell) for ell in range(2 * delta - 1)]))


def build_admissible_pair(d, delta, require_divisible=True):
    """Chirp PSF and exponential chirp mask.

    ``p_n = exp(-2 pi i s(n)^2 / q)`` with ``s(n)`` the signed representative
    of ``n`` in ``(-d/2, d/2]``, and, for ``n < delta``,
    ``m_n = e^{-(n+1)/a} / q^{1/4} * exp(2 pi i n^2 / q)`` with ``q = 2 delta - 1``.
    When ``q`` divides ``d`` the PSF is ``q``-periodic.  Otherwise it is only
    a chirp near index zero, which is all the diagonal-band measurements use.

    Returns
    -------
    (PsfSpec, MaskSpec)
    """
    _check_delta(d, delta)
    q = 2 * delta - 1
    divisible = d % q == 0
    if require_divisible and not divisible:
        raise ConfigurationError(f"2*delta-1={q} must divide d={d}")
    n = np.arange(d)
    s = np.where(n <= d // 2, n, n - d)
    # s^2 mod q keeps the phase argument small for large d
    p = np.exp(-2j * np.pi * ((s * s) % q) / q)
    m = np.zeros(d, dtype=np.complex128)
    nm = np.arange(delta)
    m[:delta] = _exp_profile(delta) * np.exp(2j * np.pi * ((nm * nm) % q) / q)
    return PsfSpec(p, periodicity_claim=q if divisible else None), MaskSpec(m, delta)


def derive_masks(psf, mask, L):
    """Far-field masks ``conj(S_l p~ o m)`` for ``l = 0, ..., L-1``.

    Entry ``n`` of mask ``l`` equals ``conj(p[-n-l]) * conj(m[n])``, so each
    derived mask inherits the support of ``m``.
    """
    if L < 1:
        raise ConfigurationError("L must be at least 1")
    p = psf.p if isinstance(psf, PsfSpec) else core.as_signal(psf)
    m = mask.m if isinstance(mask, MaskSpec) else core.as_signal(mask)
    if p.size != m.size:
        raise DimensionError(f"psf length {p.size} != mask length {m.size}")
    p_rev = core.reversal(p)
    shifted = np.stack([core.circular_shift(p_rev, ell) for ell in range(L)])
    return DerivedMaskFamily(np.conj(shifted * m))


def build_lowpass_psf(d, gamma=None):
    """Low-pass PSF whose DFT is one on ``gamma`` frequencies centred at zero.

    The passband is ``{-(gamma-1)/2, ..., (gamma-1)/2} mod d``.  ``gamma``
    defaults to ``d // 3 + 1``.

    Raises
    ------
    ConfigurationError
        If ``gamma`` is even, non-positive, or larger than ``d``.
    """
    if gamma is None:
        gamma = d // 3 + 1
    if gamma % 2 == 0:
        raise ConfigurationError(f"gamma={gamma} must be odd to centre the passband")
    if not 1 <= gamma <= d:
        raise ConfigurationError(f"gamma={gamma} must lie in [1, d={d}]")
    ones = np.zeros(d)
    ones[:gamma] = 1.0
    phat = core.circular_shift(ones, (gamma - 1) // 2)
    return PsfSpec(core.idft(phat))


def build_random_mask(d, seed):
    """Globally supported complex Gaussian mask with unit per-entry variance.

    Real and imaginary parts are independent ``N(0, 1/2)``.  ``seed`` may be
    an integer or a ``numpy.random.Generator``.
    """
    rng = np.random.default_rng(seed)
    m = (rng.standard_normal(d) + 1j * rng.standard_normal(d)) / np.sqrt(2.0)
    return MaskSpec(m, d)
