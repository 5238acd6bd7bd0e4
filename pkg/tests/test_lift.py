import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import crandn
from nfptych import angsync, lift, masks, measure
from nfptych.errors import ConfigurationError, DimensionError, IllPosedOperatorError
from nfptych.measure import IndexSet, MeasurementGrid

# Condition numbers of the exponential-mask operator, from a dense SVD of the
# assembled matrix (frozen once, re-derived below for (15, 3)).
FROZEN_KAPPA = {(15, 3): 5.953610774163189, (45, 8): 28.150508799495015}


def case_formula_block(family, delta, k):
    """Block k from the three-case entry rule, written out with loops."""
    q = 2 * delta - 1
    B = np.zeros((q, q), complex)
    for ell in range(q):
        m = family[ell]
        for j in range(q):
            if 0 <= j <= delta - 1 - k:
                B[ell, j] = m[k] * np.conj(m[j + k])
            elif q - k <= j <= q - 1:
                B[ell, j] = m[k] * np.conj(m[j + k - q])
    return B


def pack_loop(x, delta):
    d, q = len(x), 2 * delta - 1
    z = np.zeros(d * q, complex)
    for c in range(d):
        for j in range(q):
            o = j if j < delta else j - q
            z[c * q + j] = np.conj(x[c]) * x[(c + o) % d]
    return z


def chirp_setup(d, delta, seed=0):
    psf, mask = masks.build_admissible_pair(d, delta)
    x = measure.gaussian_signal(d, seed)
    return psf, mask, x


# rearrangement

def test_rearrangement_matches_far_field_model():
    d, delta = 15, 3
    psf, mask, x = chirp_setup(d, delta)
    Y = measure.forward_nfp(x, psf, mask, IndexSet.full_grid(d, delta))
    Yt = lift.rearrange_near_to_far(Y, psf)
    fam = masks.derive_masks(psf, mask, 5)
    # brute-force far-field values
    for k in range(d):
        for ell in range(5):
            sx = np.array([x[(n + k) % d] for n in range(d)])
            direct = abs(np.sum(fam[ell] * np.conj(sx))) ** 2
            assert abs(Yt.as_matrix()[k, ell] - direct) < 1e-10


def test_rearrangement_is_a_bijection():
    idx = IndexSet.full_grid(15, 3)
    perm = lift.near_to_far_permutation(idx)
    assert sorted(perm) == list(range(75))


def test_rearrangement_trivial_and_inverse(rng):
    idx = IndexSet.full_grid(15, 3)
    Y = MeasurementGrid(rng.random(75), idx, noise=rng.random(75))
    Yt = lift.rearrange_near_to_far(Y)
    assert Yt.values[0] == Y.values[0]
    back = lift.rearrange_far_to_near(Yt, idx)
    np.testing.assert_array_equal(back.values, Y.values)
    np.testing.assert_array_equal(back.noise, Y.noise)
    band = IndexSet.diagonal_band(9, 1, 1)
    one = MeasurementGrid([2.5], band)
    assert lift.rearrange_near_to_far(one).values[0] == 2.5


def test_rearrangement_on_diagonal_band_needs_no_periodicity(rng):
    d, K, L = 14, 3, 14
    p, m = crandn(rng, d), crandn(rng, d)
    x = crandn(rng, d)
    Y = measure.forward_nfp(x, p, m, IndexSet.diagonal_band(d, K, L))
    Yt = lift.rearrange_near_to_far(Y)
    F = measure.forward_ffp(x, masks.derive_masks(p, masks.MaskSpec(m, d), L), K)
    np.testing.assert_allclose(Yt.values, F.values, rtol=1e-10)


def test_rearrangement_errors(rng):
    with pytest.raises(ConfigurationError):
        lift.rearrange_near_to_far(MeasurementGrid(np.ones(4), IndexSet.ffp_grid(4, 2, 2)))
    idx = IndexSet.full_grid(15, 3)
    with pytest.raises(ConfigurationError):
        lift.rearrange_near_to_far(MeasurementGrid(np.ones(75), idx), crandn(rng, 15))


# assembly and packing

@pytest.mark.parametrize("d,delta", [(15, 2), (15, 3), (45, 8)])
def test_blocks_follow_case_formula(d, delta):
    psf, mask = masks.build_admissible_pair(d, delta)
    fam = masks.derive_masks(psf, mask, 2 * delta - 1)
    M = lift.assemble_lifted(fam, d, delta)
    for k in range(delta):
        np.testing.assert_allclose(M.blocks[k], case_formula_block(fam, delta, k), atol=1e-15)


@pytest.mark.parametrize("d,delta", [(15, 2), (15, 3), (45, 8)])
def test_lifted_system_reproduces_measurements(d, delta):
    psf, mask, x = chirp_setup(d, delta, seed=d + delta)
    fam = masks.derive_masks(psf, mask, 2 * delta - 1)
    M = lift.assemble_lifted(fam, d, delta)
    direct = measure.forward_ffp(x, fam, d).values
    np.testing.assert_allclose(M @ lift.pack_lifted(x, delta), direct, atol=1e-12 * direct.max())
    np.testing.assert_allclose(M.to_dense() @ lift.pack_lifted(x, delta), direct,
                               atol=1e-12 * direct.max())


def test_dense_matrix_is_block_circulant():
    M = lift.assemble_lifted(masks.build_fpr_family(15, 3), 15, 3)
    A = M.to_dense()
    q = 5
    for r in range(15):
        for c in range(15):
            blk = A[r * q:(r + 1) * q, c * q:(c + 1) * q]
            k = (c - r) % 15
            expected = M.blocks[k] if k < 3 else np.zeros((q, q))
            np.testing.assert_array_equal(blk, expected)


def test_zero_masks_give_zero_operator():
    fam = masks.DerivedMaskFamily(np.zeros((5, 15)))
    M = lift.assemble_lifted(fam, 15, 3)
    assert not np.any(M.blocks)


def test_delta_one_is_diagonal(rng):
    m0 = np.zeros(6, complex)
    m0[0] = 0.5 - 1j
    M = lift.assemble_lifted(masks.DerivedMaskFamily(m0[None, :]), 6, 1)
    np.testing.assert_allclose(M.to_dense(), abs(m0[0]) ** 2 * np.eye(6))


def test_assembly_errors():
    fam = masks.build_fpr_family(15, 3)
    with pytest.raises(ConfigurationError):
        lift.assemble_lifted(masks.DerivedMaskFamily(fam.masks[:4]), 15, 3)
    wide = fam.masks.copy()
    wide[0, 3] = 1.0
    with pytest.raises(ConfigurationError):
        lift.assemble_lifted(masks.DerivedMaskFamily(wide), 15, 3)
    with pytest.raises(ConfigurationError):
        lift.assemble_lifted(masks.build_fpr_family(16, 3), 16, 3)
    lift.assemble_lifted(masks.build_fpr_family(16, 3), 16, 3, require_divisible=False)
    with pytest.raises(DimensionError):
        lift.assemble_lifted(fam, 14, 3)


def test_pack_layout(rng):
    x = crandn(rng, 8)
    z = lift.pack_lifted(x, 3)
    np.testing.assert_allclose(z, pack_loop(x, 3), atol=1e-15)
    np.testing.assert_allclose(z.reshape(8, 5)[:, 0], np.abs(x) ** 2)


def test_unpack_reproduces_band(rng):
    d, delta = 8, 3
    x = crandn(rng, d)
    X = lift.unpack_lifted(lift.pack_lifted(x, delta), d, delta).to_dense()
    full = np.outer(x, np.conj(x))
    for i in range(d):
        for j in range(d):
            on_band = min((i - j) % d, (j - i) % d) < delta
            assert X[i, j] == pytest.approx(full[i, j] if on_band else 0, abs=1e-13)


@given(st.integers(0, 10_000), st.floats(0, 2 * np.pi), st.integers(1, 4))
def test_pack_phase_invariance_and_roundtrip(seed, phi, delta):
    d = 2 * delta - 1 + 3
    x = crandn(np.random.default_rng(seed), d)
    z = lift.pack_lifted(x, delta)
    np.testing.assert_allclose(lift.pack_lifted(np.exp(1j * phi) * x, delta), z, atol=1e-12 * np.abs(z).max())
    X = angsync.BandedAutocorrelation.from_signal(x, delta)
    np.testing.assert_allclose(lift.unpack_lifted(z, d, delta).band, X.band, atol=1e-14 * np.abs(z).max())


# solving and conditioning

def test_solve_roundtrip(rng):
    M = lift.assemble_lifted(masks.build_fpr_family(15, 3), 15, 3)
    z = crandn(rng, M.D)
    y = M @ z
    sol = lift.solve_lifted(M, y)
    assert np.linalg.norm(sol - z) <= 1e-8 * np.linalg.norm(z)
    assert np.linalg.norm(M @ sol - y) <= 1e-8 * np.linalg.norm(y)


def test_fft_and_dense_solves_agree(rng):
    psf, mask = masks.build_admissible_pair(15, 3)
    M = lift.assemble_lifted(masks.derive_masks(psf, mask, 5), 15, 3)
    y = crandn(rng, M.D)
    a = lift.solve_lifted(M, y, "fft")
    b = lift.solve_lifted(M, y, "dense")
    assert np.linalg.norm(a - b) <= 1e-8 * np.linalg.norm(b)


def test_identity_operator(rng):
    blocks = np.zeros((3, 5, 5), complex)
    blocks[0] = np.eye(5)
    M = lift.LiftedOperator(blocks, 15, 3)
    y = crandn(rng, 75)
    np.testing.assert_allclose(lift.solve_lifted(M, y), y, atol=1e-14)
    assert lift.conditioning(M).kappa == pytest.approx(1.0, abs=1e-12)


def test_singular_operator_is_reported():
    blocks = np.zeros((2, 3, 3), complex)
    blocks[0] = np.diag([1.0, 1.0, 0.0])
    M = lift.LiftedOperator(blocks, 6, 2)
    with pytest.raises(IllPosedOperatorError) as info:
        lift.solve_lifted(M, np.ones(18))
    assert info.value.sigma_min < 1e-12
    assert 0 <= info.value.block_index < 6


def test_solve_errors():
    M = lift.assemble_lifted(masks.build_fpr_family(15, 3), 15, 3)
    with pytest.raises(DimensionError):
        lift.solve_lifted(M, np.ones(10))
    with pytest.raises(ValueError):
        lift.solve_lifted(M, np.ones(75), method="cg")


def test_fourier_blocks_give_all_singular_values():
    M = lift.assemble_lifted(masks.build_fpr_family(15, 3), 15, 3)
    dense = np.linalg.svd(M.to_dense(), compute_uv=False)
    np.testing.assert_allclose(lift.singular_values(M), dense, atol=1e-12)


@pytest.mark.parametrize("key", sorted(FROZEN_KAPPA))
def test_conditioning_values(key):
    d, delta = key
    M = lift.assemble_lifted(masks.build_fpr_family(d, delta), d, delta)
    rep = lift.conditioning(M)
    assert rep.kappa == pytest.approx(FROZEN_KAPPA[key], rel=1e-9)
    assert rep.kappa == pytest.approx(rep.sigma_max / rep.sigma_min)
    assert rep.kappa <= rep.bound
    if key == (15, 3):
        s = np.linalg.svd(M.to_dense(), compute_uv=False)
        assert rep.kappa == pytest.approx(s[0] / s[-1], rel=1e-10)
        assert rep.bound == pytest.approx(144 * np.e ** 2)


def test_kappa_bound_switches_branch():
    assert lift.kappa_bound(2) == pytest.approx(144 * np.e ** 2)
    assert lift.kappa_bound(13) == pytest.approx(9 * np.e ** 2 * 144 / 4)


@pytest.mark.parametrize("delta", [2, 3, 5, 8])
def test_chirp_operator_is_row_permuted_exponential_operator(delta):
    q = 2 * delta - 1
    d = 3 * q
    psf, mask = masks.build_admissible_pair(d, delta)
    Mpm = lift.assemble_lifted(masks.derive_masks(psf, mask, q), d, delta)
    Mf = lift.assemble_lifted(masks.build_fpr_family(d, delta), d, delta)
    perm = lift.fpr_row_permutation(delta)
    assert sorted(perm) == list(range(q))
    np.testing.assert_allclose(Mpm.blocks, Mf.blocks[:, perm, :], atol=1e-12)
    np.testing.assert_allclose(lift.singular_values(Mpm), lift.singular_values(Mf), atol=1e-9)
