import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import conv_loop, crandn, dft_loop, inner_loop, reverse_loop, shift_loop
from nfptych import core
from nfptych.errors import DimensionError

lengths = st.integers(min_value=1, max_value=40)
seeds = st.integers(min_value=0, max_value=2**31 - 1)


def test_shift_matches_definition(rng):
    x = crandn(rng, 11)
    for k in (-13, -1, 0, 1, 4, 11, 25):
        np.testing.assert_array_equal(core.circular_shift(x, k), shift_loop(x, k))


def test_shift_examples():
    x = np.arange(5)
    np.testing.assert_array_equal(core.circular_shift(x, 1), [1, 2, 3, 4, 0])
    np.testing.assert_array_equal(core.circular_shift(x, -1), [4, 0, 1, 2, 3])


def test_reversal_matches_definition(rng):
    x = crandn(rng, 9)
    np.testing.assert_array_equal(core.reversal(x), reverse_loop(x))
    np.testing.assert_array_equal(core.reversal([1, 2, 3, 4]), [1, 4, 3, 2])


@given(lengths, seeds, st.integers(-50, 50), st.integers(-50, 50))
def test_shift_group_law(d, seed, a, b):
    x = crandn(np.random.default_rng(seed), d)
    np.testing.assert_array_equal(
        core.circular_shift(core.circular_shift(x, a), b), core.circular_shift(x, a + b))
    np.testing.assert_array_equal(core.circular_shift(x, a + d), core.circular_shift(x, a))


@given(lengths, seeds)
def test_reversal_is_involution(d, seed):
    x = crandn(np.random.default_rng(seed), d)
    np.testing.assert_array_equal(core.reversal(core.reversal(x)), x)


@pytest.mark.parametrize("method", ["direct", "fft", "auto"])
@pytest.mark.parametrize("d", [1, 2, 7, 16, 65])
def test_convolution_matches_loop(rng, method, d):
    x, y = crandn(rng, d), crandn(rng, d)
    np.testing.assert_allclose(core.circular_convolution(x, y, method), conv_loop(x, y),
                               rtol=1e-12, atol=1e-12 * d)


def test_convolution_with_delta_is_identity(rng):
    x = crandn(rng, 12)
    np.testing.assert_allclose(core.circular_convolution(core.delta_vector(12), x), x, atol=1e-15)
    np.testing.assert_allclose(core.circular_convolution(core.delta_vector(12, 3), x),
                               core.circular_shift(x, -3), atol=1e-15)


@given(st.integers(1, 30), seeds)
def test_convolution_commutes_and_diagonalizes(d, seed):
    r = np.random.default_rng(seed)
    x, y = crandn(r, d), crandn(r, d)
    xy = core.circular_convolution(x, y, "direct")
    tol = 1e-10 * (1 + np.linalg.norm(x) * np.linalg.norm(y))
    np.testing.assert_allclose(xy, core.circular_convolution(y, x, "direct"), atol=tol)
    np.testing.assert_allclose(core.dft(xy), core.dft(x) * core.dft(y), atol=tol * d)


def test_convolution_broadcasts(rng):
    x = crandn(rng, 3, 10)
    y = crandn(rng, 10)
    out = core.circular_convolution(x, y, "direct")
    assert out.shape == (3, 10)
    np.testing.assert_allclose(out[1], conv_loop(x[1], y), atol=1e-12)


def test_dft_convention(rng):
    x = crandn(rng, 10)
    np.testing.assert_allclose(core.dft(x), dft_loop(x), atol=1e-11)
    np.testing.assert_allclose(core.idft(core.dft(x)), x, atol=1e-14)
    np.testing.assert_allclose(core.dft(np.ones(6)), [6, 0, 0, 0, 0, 0], atol=1e-14)


def test_inner_convention(rng):
    x, y = crandn(rng, 8), crandn(rng, 8)
    assert np.isclose(core.inner(x, y), inner_loop(x, y), atol=1e-13)
    assert np.isclose(core.inner(2j * x, y), 2j * core.inner(x, y))
    assert np.isclose(core.inner(x, 2j * y), -2j * core.inner(x, y))
    assert np.isclose(core.inner(x, x).imag, 0.0)


def test_hadamard_and_delta():
    np.testing.assert_array_equal(core.hadamard([1, 2], [3, 4]), [3, 8])
    np.testing.assert_array_equal(core.delta_vector(4, 5), [0, 1, 0, 0])


def test_dimension_errors():
    with pytest.raises(DimensionError):
        core.hadamard([1, 2], [1, 2, 3])
    with pytest.raises(DimensionError):
        core.circular_convolution(np.ones(3), np.ones(4))
    with pytest.raises(DimensionError):
        core.inner(np.ones(3), np.ones(2))
    with pytest.raises(DimensionError):
        core.as_signal([])
    with pytest.raises(DimensionError):
        core.as_signal(np.ones(3), d=4)
    with pytest.raises(ValueError):
        core.as_signal([1.0, np.nan])
    with pytest.raises(ValueError):
        core.circular_convolution(np.ones(3), np.ones(3), method="bogus")


# Identities used to turn near-field data into far-field form.

@given(st.integers(1, 25), seeds)
def test_conjugation_identity(d, seed):
    r = np.random.default_rng(seed)
    x, y = crandn(r, d), crandn(r, d)
    lhs = abs(core.inner(x, np.conj(y))) ** 2
    rhs = abs(core.inner(np.conj(x), y)) ** 2
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, lhs)


@given(st.integers(1, 25), seeds)
def test_hadamard_moves_across_inner_product(d, seed):
    r = np.random.default_rng(seed)
    x, y, z = crandn(r, d), crandn(r, d), crandn(r, d)
    lhs = core.inner(x, y * z)
    rhs = core.inner(x * np.conj(y), z)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


@given(st.integers(1, 25), seeds, st.integers(-60, 60))
def test_shift_identities(d, seed, k):
    r = np.random.default_rng(seed)
    x, y = crandn(r, d), crandn(r, d)
    scale = 1.0 + np.linalg.norm(x) * np.linalg.norm(y)
    conv = core.circular_convolution(x, y, "direct")[k % d]
    assert abs(conv - core.inner(core.circular_shift(core.reversal(x), -k), np.conj(y))) <= 1e-12 * scale
    np.testing.assert_allclose(
        x * core.circular_shift(y, k),
        core.circular_shift(core.circular_shift(x, -k) * y, k), atol=1e-12 * scale)
    assert abs(core.inner(core.circular_shift(x, k), y)
               - core.inner(x, core.circular_shift(y, -k))) <= 1e-12 * scale
