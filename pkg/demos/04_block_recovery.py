"""Block phase retrieval end to end, with and without noise.

Lifted solve, then magnitudes from the diagonal and phases from weighted
angular synchronization.  The error is reported in dB after removing the
global phase.
"""

import math

from nfptych import blockpr, harness, masks, measure
from nfptych.measure import IndexSet, NoiseSpec

d, delta = 105, 8
psf, mask = masks.build_admissible_pair(d, delta)
x = measure.gaussian_signal(d, seed=4)
clean = measure.forward_nfp(x, psf, mask, IndexSet.full_grid(d, delta))

print("SNR (dB)   error (dB)")
for snr in (math.inf, 80, 60, 40, 20, 10):
    Y = measure.add_noise(clean, NoiseSpec(snr, seed=5))
    est = blockpr.nfp_block_pr(Y, psf, mask)
    print(f"{snr:>8}   {harness.error_metric(x, est):9.1f}")

# Averaged over trials, as the sweep command does.
cfg = harness.ExperimentConfig("alg1_delta_sweep", d, deltas=(8,), snrs=(20.0, 40.0), trials=20)
for row in harness.run_sweep(cfg):
    print(f"mean over {row['trials']} trials at SNR {row['snr_db']:.0f}: {row['mean_error_db']:.1f} dB")
