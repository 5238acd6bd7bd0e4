"""Wirtinger flow on vectorized far-field measurements.

Measurements ``Y~[k, l]`` become ``y[n]`` with ``n = k L + l`` and sensing
vectors ``a_n = S_{-k} m_l``, so that ``y_n = |a_n^* x|^2``.  The loss is

    f(z) = (1 / KL) sum_n (|a_n^* z|^2 - y_n)^2

and its gradient with respect to ``conj(z)`` is
``(2 / KL) sum_n (|a_n^* z|^2 - y_n) a_n a_n^* z``, so that
``f(z + h) = f(z) + 2 Re <grad, h> + O(|h|^2)``.
"""

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import core
from .errors import ConfigurationError, ConvergenceError, DegenerateInputError, DimensionError, DivergenceError
from .masks import DerivedMaskFamily

__all__ = [
    "WFProblem",
    "WFConfig",
    "WFTrace",
    "default_step",
    "vectorize_measurements",
    "spectral_init",
    "wf_loss",
    "wf_gradient",
    "run_wf",
    "relative_error",
]


def default_step(tau):
    """``min(1 - exp(-tau / 330), 0.4)``."""
    return min(1.0 - math.exp(-tau / 330.0), 0.4)


@dataclass(frozen=True)
class WFProblem:
    """Measurement vector ``y`` and sensing vectors stored as rows of ``A``.

    ``A[n]`` is ``a_n``; amplitudes are ``conj(A) @ z``.
    """

    y: np.ndarray = field(repr=False)
    A: np.ndarray = field(repr=False)
    K: int
    L: int

    def __post_init__(self):
        y = np.array(self.y, dtype=np.float64)
        A = np.array(self.A, dtype=np.complex128)
        if A.ndim != 2 or y.shape != (A.shape[0],) or A.shape[0] != self.K * self.L:
            raise DimensionError("need y of length K*L and A of shape (K*L, d)")
        y.setflags(write=False)
        A.setflags(write=False)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "A", A)

    @property
    def d(self):
        return self.A.shape[1]

    @property
    def n_meas(self):
        return self.y.size

    def amplitudes(self, z):
        return np.conj(self.A) @ z


@dataclass(frozen=True)
class WFConfig:
    """Iteration settings.

    Parameters
    ----------
    T : int
        Number of gradient steps.
    step : callable, optional
        ``tau -> mu_tau`` for ``tau = 1, ..., T``; defaults to :func:`default_step`.
    init : {"spectral", "provided"}
    z0 : array_like, optional
        Starting point when ``init == "provided"``.
    seed : int
        Seeds the start vector of the spectral power iteration.
    normalization : {"spectral", None}
        ``"spectral"`` divides the step by the top eigenvalue ``rho`` of
        ``(1/KL) sum_n y_n a_n a_n^*`` instead of ``||z_0||^2``.  For
        Gaussian sensing vectors ``rho`` is about ``2 ||x||^2``, so this
        reproduces the classical update there, while staying stable when
        the sensing vectors are far from isotropic.  ``None`` runs the raw
        ``mu / ||z_0||^2`` update.
    power_tol, power_iters : float, int
        Spectral initialization tolerance and iteration budget.
    """

    T: int = 2000
    step: Callable[[int], float] | None = None
    init: str = "spectral"
    z0: np.ndarray | None = field(default=None, repr=False)
    seed: int = 0
    normalization: str | None = "spectral"
    power_tol: float = 1e-8
    power_iters: int = 5000

    def __post_init__(self):
        if self.T < 0:
            raise ConfigurationError("T must be nonnegative")
        if self.init not in ("spectral", "provided"):
            raise ConfigurationError(f"unknown init {self.init!r}")
        if self.init == "provided" and self.z0 is None:
            raise ConfigurationError("init='provided' needs z0")
        if self.normalization not in ("spectral", None):
            raise ConfigurationError(f"unknown normalization {self.normalization!r}")


@dataclass
class WFTrace:
    """Loss (and optionally relative error) before and after each step.

    ``snapshots[t]`` holds ``(z_t, seconds since the start of run_wf)`` for
    every requested checkpoint ``t``.
    """

    loss: list = field(default_factory=list)
    relative_error: list = field(default_factory=list)
    snapshots: dict = field(default_factory=dict)

    def rows(self):
        errs = self.relative_error or [None] * len(self.loss)
        return [(i, f, e) for i, (f, e) in enumerate(zip(self.loss, errs))]


def vectorize_measurements(Yt, family):
    """Build a :class:`WFProblem` from a far-field grid over ``[K] x [L]``.

    ``y[k L + l] = Y~[k, l]`` and ``A[k L + l] = S_{-k} m_l``.
    """
    if not isinstance(family, DerivedMaskFamily):
        family = DerivedMaskFamily(family)
    K, L = Yt.index_set.shape
    if family.L < L:
        raise DimensionError(f"grid has L={L} columns but only {family.L} masks")
    if family.d != Yt.d:
        raise DimensionError(f"masks have length {family.d}, grid has d={Yt.d}")
    A = np.concatenate([core.circular_shift(family.masks[:L], -k) for k in range(K)])
    return WFProblem(Yt.values, A, K, L)


def _covariance_matvec(prob, v):
    return prob.A.T @ (prob.y * (np.conj(prob.A) @ v)) / prob.n_meas


def _top_eigenpair(prob, tol, max_iters, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(prob.d) + 1j * rng.standard_normal(prob.d)
    v /= np.linalg.norm(v)
    res = np.inf
    for _ in range(max_iters):
        w = _covariance_matvec(prob, v)
        rho = np.vdot(v, w).real
        res = np.linalg.norm(w - rho * v)
        if res <= tol * abs(rho):
            return rho, v
        v = w / np.linalg.norm(w)
    raise ConvergenceError("spectral initialization did not converge", res, max_iters)


def spectral_init(prob, tol=1e-8, max_iters=5000, seed=0, return_eigenvalue=False):
    """Scaled top eigenvector of ``(1/KL) sum_n y_n a_n a_n^*``.

    The eigenvector comes from power iteration; it is scaled to norm
    ``sqrt(d sum y / sum ||a_n||^2)``.  With ``return_eigenvalue`` the
    Rayleigh quotient is returned as well.

    Raises
    ------
    ConvergenceError
        If the residual does not drop below ``tol`` times the Rayleigh
        quotient within ``max_iters`` iterations.
    """
    if not np.any(prob.y):
        z = np.zeros(prob.d, dtype=np.complex128)
        return (z, 0.0) if return_eigenvalue else z
    lam = math.sqrt(max(prob.d * prob.y.sum() / np.sum(np.abs(prob.A) ** 2), 0.0))
    rho, v = _top_eigenpair(prob, tol, max_iters, seed)
    return (lam * v, rho) if return_eigenvalue else lam * v


def wf_loss(prob, z):
    r = np.abs(prob.amplitudes(z)) ** 2 - prob.y
    return float(np.dot(r, r) / prob.n_meas)


def wf_gradient(prob, z):
    """Gradient of :func:`wf_loss` with respect to ``conj(z)``."""
    Az = prob.amplitudes(z)
    r = np.abs(Az) ** 2 - prob.y
    return 2.0 / prob.n_meas * (prob.A.T @ (r * Az))


def relative_error(x, z):
    """``min_phi ||x - e^{i phi} z|| / ||x||``."""
    ip = np.vdot(z, x)
    phase = ip / abs(ip) if abs(ip) > 0 else 1.0
    return float(np.linalg.norm(x - phase * z) / np.linalg.norm(x))


def run_wf(prob, cfg=None, x_true=None, checkpoints=()):
    """Wirtinger flow ``z <- z - mu_tau / ||z_0||^2 * grad f(z)``.

    See :class:`WFConfig` for the default step normalization.

    Parameters
    ----------
    prob : WFProblem
    cfg : WFConfig, optional
    x_true : array_like, optional
        If given, the trace also records the relative error.
    checkpoints : iterable of int
        Iteration counts at which to snapshot the iterate and elapsed time.

    Returns
    -------
    (ndarray, WFTrace)

    Raises
    ------
    DegenerateInputError
        If the starting point is zero and ``T > 0``.
    DivergenceError
        If the loss becomes non-finite.
    """
    start = time.perf_counter()
    cfg = cfg or WFConfig()
    checkpoints = set(checkpoints)
    step = cfg.step or default_step
    rho = None
    if cfg.init == "provided":
        z = core.as_signal(cfg.z0, prob.d).copy()
    else:
        z, rho = spectral_init(prob, cfg.power_tol, cfg.power_iters, cfg.seed,
                               return_eigenvalue=True)
    trace = WFTrace()
    if cfg.T > 0:
        z0_norm2 = float(np.vdot(z, z).real)
        if z0_norm2 == 0:
            raise DegenerateInputError("initial point is zero")
        if cfg.normalization == "spectral":
            if rho is None:
                rho, _ = _top_eigenpair(prob, cfg.power_tol, cfg.power_iters, cfg.seed)
            if not rho > 0:
                raise DegenerateInputError("spectral matrix has no positive eigenvalue")
            scale = 1.0 / rho
        else:
            scale = 1.0 / z0_norm2
    for tau in range(cfg.T + 1):
        # one pass over the sensing vectors gives both loss and gradient
        Az = prob.amplitudes(z)
        r = np.abs(Az) ** 2 - prob.y
        f = float(np.dot(r, r) / prob.n_meas)
        if not math.isfinite(f):
            raise DivergenceError(tau)
        trace.loss.append(f)
        if x_true is not None:
            trace.relative_error.append(relative_error(x_true, z))
        if tau in checkpoints:
            trace.snapshots[tau] = (z.copy(), time.perf_counter() - start)
        if tau == cfg.T:
            break
        grad = 2.0 / prob.n_meas * (prob.A.T @ (r * Az))
        z = z - step(tau + 1) * scale * grad
    return z, trace
