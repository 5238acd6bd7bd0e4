"""Randomized trials and parameter sweeps for both recovery pipelines.

Each trial draws its randomness from ``numpy.random.default_rng([seed, trial])``
in a fixed order (signal, then mask if random, then noise direction), so a
trial sees the same sample and noise direction at every SNR level and the
results do not depend on thread scheduling.
"""

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import blockpr, lift, masks, measure, wflow
from .errors import ConfigurationError, DegenerateInputError

__all__ = [
    "error_metric",
    "TrialResult",
    "ExperimentConfig",
    "run_alg1_trial",
    "run_wf_trial",
    "run_sweep",
    "CSV_HEADER",
    "EXPERIMENT_KINDS",
]

CSV_HEADER = ("experiment", "d", "delta_or_K", "snr_db", "T",
              "mean_error_db", "mean_runtime_s", "trials", "seed")
EXPERIMENT_KINDS = ("alg1_delta_sweep", "alg1_vs_alg2", "wf_global_mask")


def error_metric(x, x_est):
    """``10 log10(min_phi ||x - e^{i phi} x_est||^2 / ||x||^2)`` in dB.

    The optimal phase is ``arg <x_est, x>``; the residual is formed
    explicitly rather than through the expanded quadratic, which cancels
    catastrophically near exact recovery.  Exact recovery gives ``-inf``.
    """
    x = np.asarray(x, dtype=np.complex128)
    x_est = np.asarray(x_est, dtype=np.complex128)
    nx = np.linalg.norm(x)
    if nx == 0:
        raise DegenerateInputError("error is undefined for x = 0")
    ip = np.vdot(x_est, x)
    phase = ip / abs(ip) if abs(ip) > 0 else 1.0
    rel = np.linalg.norm(x - phase * x_est) / nx
    if rel == 0:
        return -math.inf
    return 20.0 * math.log10(rel)


@dataclass(frozen=True)
class TrialResult:
    error_db: float
    runtime_seconds: float
    metadata: dict = field(default_factory=dict)


def _noisy(grid, snr_db, rng):
    return measure.add_noise(grid, measure.NoiseSpec(snr_db, rng))


def run_alg1_trial(d, delta, snr_db, seed, sync="laplacian"):
    """One block phase retrieval trial on the full grid with the chirp pair.

    ``seed`` may be an int, a sequence such as ``[seed, trial]``, or a
    Generator.  The reported runtime covers recovery only.
    """
    rng = np.random.default_rng(seed)
    x = measure.gaussian_signal(d, rng)
    psf, mask = masks.build_admissible_pair(d, delta)
    Y = measure.forward_nfp(x, psf, mask, measure.IndexSet.full_grid(d, delta))
    Y = _noisy(Y, snr_db, rng)
    start = time.perf_counter()
    x_est = blockpr.nfp_block_pr(Y, psf, mask, sync=sync)
    elapsed = time.perf_counter() - start
    meta = {"algorithm": "alg1", "d": d, "delta": delta, "snr_db": snr_db}
    return TrialResult(error_metric(x, x_est), elapsed, meta)


def _wf_problem(d, K, L, snr_db, mask_kind, rng, delta=None, gamma=None):
    x = measure.gaussian_signal(d, rng)
    if mask_kind == "global":
        psf = masks.build_lowpass_psf(d, gamma)
        mask = masks.build_random_mask(d, rng)
        idx = measure.IndexSet.diagonal_band(d, K, L)
    elif mask_kind == "local":
        if delta is None:
            raise ConfigurationError("local masks need delta")
        psf, mask = masks.build_admissible_pair(d, delta)
        if (K, L) != (d, 2 * delta - 1):
            raise ConfigurationError("local masks use all d shifts and 2*delta-1 entries")
        idx = measure.IndexSet.full_grid(d, delta)
    else:
        raise ConfigurationError(f"unknown mask kind {mask_kind!r}")
    Y = _noisy(measure.forward_nfp(x, psf, mask, idx), snr_db, rng)
    return x, Y, psf, mask


def _wf_solve(Y, psf, mask, T, checkpoints=()):
    start = time.perf_counter()
    Yt = lift.rearrange_near_to_far(Y, psf)
    family = masks.derive_masks(psf, mask, Yt.index_set.L)
    prob = wflow.vectorize_measurements(Yt, family)
    setup = time.perf_counter() - start
    z, trace = wflow.run_wf(prob, wflow.WFConfig(T=T), checkpoints=checkpoints)
    total = time.perf_counter() - start
    snaps = {t: (zt, setup + el) for t, (zt, el) in trace.snapshots.items()}
    return z, total, snaps


def run_wf_trial(d, K, L, snr_db, T, mask_kind="global", seed=0, delta=None, gamma=None):
    """One Wirtinger flow trial.

    ``mask_kind="global"`` uses the low-pass PSF and a Gaussian mask over
    ``K`` shifts with ``L`` detector entries each; ``"local"`` uses the
    chirp pair with all ``d`` shifts and ``2 delta - 1`` entries.
    """
    rng = np.random.default_rng(seed)
    x, Y, psf, mask = _wf_problem(d, K, L, snr_db, mask_kind, rng, delta, gamma)
    z, elapsed, _ = _wf_solve(Y, psf, mask, T)
    meta = {"algorithm": "wf", "mask_kind": mask_kind, "d": d, "K": K, "L": L,
            "snr_db": snr_db, "T": T}
    return TrialResult(error_metric(x, z), elapsed, meta)


def _compare_trial(d, delta, snr_db, Ts, seed):
    """Both algorithms on the same sample and noise; one WF run checkpointed at every T."""
    rng = np.random.default_rng(seed)
    q = 2 * delta - 1
    x, Y, psf, mask = _wf_problem(d, d, q, snr_db, "local", rng, delta)
    start = time.perf_counter()
    x1 = blockpr.nfp_block_pr(Y, psf, mask)
    t1 = time.perf_counter() - start
    out = [("alg1", None, error_metric(x, x1), t1)]
    _, _, snaps = _wf_solve(Y, psf, mask, max(Ts), checkpoints=Ts)
    for T in Ts:
        zT, tT = snaps[T]
        out.append(("wf", T, error_metric(x, zT), tT))
    return out


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameter grid of a sweep.

    ``deltas`` is used by the block-recovery kinds, ``Ks`` by
    ``wf_global_mask``; ``Ts`` lists Wirtinger flow iteration counts.
    """

    kind: str
    d: int
    deltas: tuple = ()
    Ks: tuple = ()
    snrs: tuple = (10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0)
    trials: int = 100
    Ts: tuple = (2000,)
    seed: int = 0
    L: int | None = None

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigurationError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise ConfigurationError("trials must be at least 1")
        if self.kind in ("alg1_delta_sweep", "alg1_vs_alg2"):
            if not self.deltas:
                raise ConfigurationError("block-recovery sweeps need at least one delta")
            for delta in self.deltas:
                if self.d % (2 * delta - 1):
                    raise ConfigurationError(f"2*delta-1={2 * delta - 1} must divide d={self.d}")
        if self.kind == "wf_global_mask" and not self.Ks:
            raise ConfigurationError("wf_global_mask needs at least one K")
        if any(T < 0 for T in self.Ts):
            raise ConfigurationError("iteration counts must be nonnegative")
        if self.kind != "alg1_delta_sweep" and not self.Ts:
            raise ConfigurationError("Wirtinger flow sweeps need at least one T")


def _mean(values):
    values = list(values)
    if any(v == -math.inf for v in values):
        return -math.inf
    return math.fsum(values) / len(values)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _run_trials(fn, n, workers):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, range(n)))
    return [fn(t) for t in range(n)]


def _sweep_rows(cfg, workers):
    rows = []
    if cfg.kind == "alg1_delta_sweep":
        for delta in cfg.deltas:
            for snr in cfg.snrs:
                res = _run_trials(
                    lambda t: run_alg1_trial(cfg.d, delta, snr, [cfg.seed, t]), cfg.trials, workers)
                rows.append(("alg1_delta_sweep", delta, snr, None,
                             [r.error_db for r in res], [r.runtime_seconds for r in res]))
    elif cfg.kind == "alg1_vs_alg2":
        Ts = tuple(sorted(set(cfg.Ts)))
        for delta in cfg.deltas:
            for snr in cfg.snrs:
                res = _run_trials(
                    lambda t: _compare_trial(cfg.d, delta, snr, Ts, [cfg.seed, t]), cfg.trials, workers)
                for j, (alg, T, _, _) in enumerate(res[0]):
                    rows.append((f"alg1_vs_alg2:{alg}", delta, snr, T,
                                 [r[j][2] for r in res], [r[j][3] for r in res]))
    else:
        Ts = tuple(sorted(set(cfg.Ts)))
        L = cfg.L or cfg.d
        for K in cfg.Ks:
            for snr in cfg.snrs:
                def trial(t, K=K, snr=snr):
                    rng = np.random.default_rng([cfg.seed, t])
                    x, Y, psf, mask = _wf_problem(cfg.d, K, L, snr, "global", rng)
                    _, _, snaps = _wf_solve(Y, psf, mask, max(Ts), checkpoints=Ts)
                    return [(error_metric(x, snaps[T][0]), snaps[T][1]) for T in Ts]
                res = _run_trials(trial, cfg.trials, workers)
                for j, T in enumerate(Ts):
                    rows.append(("wf_global_mask", K, snr, T,
                                 [r[j][0] for r in res], [r[j][1] for r in res]))
    return rows


def run_sweep(cfg, out=None, workers=1, timing=False):
    """Run every grid point of ``cfg`` and write one CSV row per point.

    Parameters
    ----------
    cfg : ExperimentConfig
    out : path-like, optional
        CSV destination; nothing is written when omitted.
    workers : int
        Threads used across trials.
    timing : bool
        Fill ``mean_runtime_s``.  Off by default so that reruns with the
        same seed give byte-identical files.

    Returns
    -------
    list of dict
        The rows, keyed by :data:`CSV_HEADER`.
    """
    table = []
    for exp, param, snr, T, errs, times in _sweep_rows(cfg, workers):
        table.append({
            "experiment": exp, "d": cfg.d, "delta_or_K": param, "snr_db": float(snr),
            "T": T, "mean_error_db": _mean(errs),
            "mean_runtime_s": math.fsum(times) / len(times) if timing else None,
            "trials": cfg.trials, "seed": cfg.seed,
        })
    table.sort(key=lambda r: (r["experiment"], r["delta_or_K"], r["snr_db"],
                              -1 if r["T"] is None else r["T"]))
    if out is not None:
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for row in table:
                writer.writerow([_fmt(row[c]) for c in CSV_HEADER])
    return table
