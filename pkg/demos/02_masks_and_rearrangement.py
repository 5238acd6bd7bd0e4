"""Near-field measurements with the chirp PSF are far-field measurements in disguise.

Reindexing the near-field grid gives exactly the intensities produced by a
family of derived far-field masks, and those masks are phase-modulated
copies of the exponential family.
"""

import numpy as np

from nfptych import lift, masks, measure
from nfptych.measure import IndexSet

d, delta = 15, 3
q = 2 * delta - 1
psf, mask = masks.build_admissible_pair(d, delta)
print(f"d={d}, delta={delta}: the chirp PSF is {psf.periodicity_claim}-periodic,"
      f" the mask is supported on the first {mask.delta} entries")

x = measure.gaussian_signal(d, seed=1)
Y = measure.forward_nfp(x, psf, mask, IndexSet.full_grid(d, delta))
print("near-field grid shape:", Y.as_matrix().shape)

Yt = lift.rearrange_near_to_far(Y, psf)
family = masks.derive_masks(psf, mask, q)
F = measure.forward_ffp(x, family, d)
print("rearranged vs far-field model, max difference:", np.abs(Yt.values - F.values).max())

worst = 0.0
for ell in range(q):
    modulated = np.exp(2j * np.pi * ell ** 2 / q) * masks.build_fpr_mask(d, delta, (2 * ell) % q)
    worst = max(worst, np.abs(family[ell] - modulated).max())
print("derived mask l vs modulated exponential mask 2l mod q:", worst)

# Without a periodic PSF the same reindexing still works on a diagonal band.
p = np.random.default_rng(2).standard_normal(d) + 0j
Yb = measure.forward_nfp(x, p, mask, IndexSet.diagonal_band(d, 4, d))
Fb = measure.forward_ffp(x, masks.derive_masks(p, mask, d), 4)
print("diagonal band with an arbitrary PSF:", np.abs(lift.rearrange_near_to_far(Yb).values - Fb.values).max())
