"""Circular indexing conventions used throughout the package.

Every vector is indexed modulo its length.  This script checks the shift,
reversal, convolution and DFT conventions on a small example.
"""

import numpy as np

from nfptych import core

x = np.arange(6) + 0j
print("x            ", x.real)
print("S_2 x        ", core.circular_shift(x, 2).real, " (entry n is x[n+2])")
print("S_-1 x       ", core.circular_shift(x, -1).real)
print("reversal     ", core.reversal(x).real, " (entry n is x[-n])")

rng = np.random.default_rng(0)
a = rng.standard_normal(8) + 1j * rng.standard_normal(8)
b = rng.standard_normal(8) + 1j * rng.standard_normal(8)
direct = core.circular_convolution(a, b, method="direct")
fast = core.circular_convolution(a, b, method="fft")
print("\nconvolution, direct vs FFT:", np.abs(direct - fast).max())
print("convolution theorem residual:", np.abs(core.dft(direct) - core.dft(a) * core.dft(b)).max())

# the inner product is linear in its first argument
print("\n<2i a, b> / <a, b> =", core.inner(2j * a, b) / core.inner(a, b))
