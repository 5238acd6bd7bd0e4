"""Angular synchronization and the band graph.

The weighted graph on the band has weights |X_ij|^2.  Its spectral gap
controls how noise in the relative phases propagates to the recovered
phases; two lower bounds are compared with the exact gap.
"""

import numpy as np

from nfptych import angsync, measure
from nfptych.angsync import BandedAutocorrelation, SyncGraph

d, delta = 30, 4
x = measure.gaussian_signal(d, seed=6)
X = BandedAutocorrelation.from_signal(x, delta)

truth = angsync.normalize_global_phase(x / np.abs(x))
print("noiseless Laplacian sync, max phase error:",
      np.abs(angsync.sync_weighted_laplacian(X) - truth).max())
print("noiseless eigenvector sync, max phase error:",
      np.abs(angsync.sync_leading_eigenvector(X) - truth).max())

rng = np.random.default_rng(7)
noisy = BandedAutocorrelation(X.band + 0.05 * (rng.standard_normal(X.band.shape)
                                               + 1j * rng.standard_normal(X.band.shape)), d, delta)
noisy = angsync.symmetrize_band(noisy)
print("noisy Laplacian sync, max phase error:",
      np.abs(angsync.sync_weighted_laplacian(noisy) - truth).max())

g = SyncGraph.from_autocorrelation(X)
tau = angsync.spectral_gap(g)
mag_bound, graph_bound = angsync.gap_lower_bounds(g, x)
print(f"\nspectral gap {tau:.4g}; magnitude bound {mag_bound:.4g}; graph bound {graph_bound:.4g}")
print("hop diameter", angsync.unweighted_diameter(g), "<= band bound", angsync.band_diameter_bound(d, delta))
