"""Near-field ptychographic phase retrieval.

Modules
-------
core      circular shifts, reversal, convolution and DFT conventions
masks     PSF and mask constructions
measure   forward models, index sets and noise
lift      near-to-far rearrangement and the block-circulant lifted system
angsync   banded autocorrelations, angular synchronization, graph diagnostics
blockpr   block phase retrieval for locally supported masks
wflow     Wirtinger flow with spectral initialization
harness   randomized trials, sweeps and CSV output
io        plain-text persistence
"""

from . import angsync, blockpr, core, harness, io, lift, masks, measure, wflow
from .blockpr import nfp_block_pr
from .errors import (ConfigurationError, ConvergenceError, DegenerateInputError, DimensionError,
                     DivergenceError, IllPosedOperatorError, NFPError, SynchronizationError)

__version__ = "0.1.0"

__all__ = [
    "angsync", "blockpr", "core", "harness", "io", "lift", "masks", "measure", "wflow",
    "nfp_block_pr",
    "NFPError", "DimensionError", "ConfigurationError", "DegenerateInputError",
    "IllPosedOperatorError", "ConvergenceError", "SynchronizationError", "DivergenceError",
]
