import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apnp.boolmat import (
    KERNEL_OMEGA,
    BitMatrix,
    MulStats,
    _strassen_kernel,
    block_side,
    default_t,
    mul_count,
    naive_count,
    square_kernel,
)


def test_identity_left():
    rng = np.random.default_rng(1)
    b = rng.random((5, 7)) < 0.5
    assert np.array_equal(mul_count(np.eye(5, dtype=bool), b), b.astype(np.uint32))


def test_two_by_two():
    c = mul_count(np.array([[1, 0], [1, 1]]), np.array([[1, 1], [0, 1]]))
    assert c.tolist() == [[1, 1], [1, 2]]
    assert c.dtype == np.uint32


def test_all_ones():
    assert np.all(mul_count(np.ones((3, 70), bool), np.ones((70, 5), bool)) == 70)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        mul_count(np.ones((2, 3), bool), np.ones((2, 3), bool))


def test_empty_dimensions():
    assert mul_count(np.zeros((0, 3), bool), np.zeros((3, 4), bool)).shape == (0, 4)
    assert np.all(mul_count(np.zeros((2, 0), bool), np.zeros((0, 4), bool)) == 0)


@pytest.mark.parametrize("kernel", ["packed", "strassen"])
def test_square_kernel_small_cases(kernel):
    one = np.ones((1, 1), bool)
    assert square_kernel(one, one, kernel).tolist() == [[1]]
    rng = np.random.default_rng(2)
    b = rng.random((64, 64)) < 0.5
    assert np.all(square_kernel(np.zeros((64, 64), bool), b, kernel) == 0)
    a = rng.random((64, 64)) < 0.5
    assert np.array_equal(square_kernel(a, b, kernel), naive_count(a, b))


def test_square_kernel_rejects_bad_shapes():
    with pytest.raises(ValueError):
        square_kernel(np.ones((2, 3), bool), np.ones((2, 3), bool))
    with pytest.raises(ValueError):
        square_kernel(np.ones((2, 2), bool), np.ones((2, 2), bool), "magic")


def test_strassen_recursion_exact():
    rng = np.random.default_rng(3)
    a = rng.random((32, 32)) < 0.5
    b = rng.random((32, 32)) < 0.5
    assert np.array_equal(_strassen_kernel(a, b, cutoff=1), naive_count(a, b))


def test_block_side_clamp():
    assert block_side(3, 3, 3) == 64
    assert block_side(100, 1000, 1000) == 128
    assert block_side(5000, 5000, 5000) == 512


def test_default_exponent():
    assert default_t(3.0) == 0.0
    assert abs(default_t(KERNEL_OMEGA["strassen"]) - (3 - np.log2(7)) / 2) < 1e-12


def test_stats_skip_zero_blocks():
    a = np.zeros((128, 128), bool)
    a[0, 0] = True
    st_ = MulStats()
    mul_count(a, np.ones((128, 128), bool), block=64, stats=st_)
    assert st_.calls == 1 and st_.blocks == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 40), st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_bitmatrix_roundtrip(r, c, seed):
    d = np.random.default_rng(seed).random((r, c)) < 0.5
    m = BitMatrix.from_dense(d)
    assert np.array_equal(m.to_dense(), d)
    assert np.array_equal(m.transpose().to_dense(), d.T)
    assert np.array_equal(mul_count(m, BitMatrix.from_dense(d.T)), naive_count(d, d.T))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 150), st.integers(1, 150), st.integers(1, 150),
       st.sampled_from([1, 3, 64, 128, None]), st.sampled_from(["packed", "strassen"]),
       st.integers(0, 2**32 - 1))
def test_block_and_kernel_independent(r, k, c, block, kernel, seed):
    if block is not None and block < 64:
        r, k, c = min(r, 20), min(k, 20), min(c, 20)
    rng = np.random.default_rng(seed)
    a = rng.random((r, k)) < rng.random()
    b = rng.random((k, c)) < rng.random()
    ref = a.astype(np.int64) @ b.astype(np.int64)
    assert np.array_equal(mul_count(a, b, kernel=kernel, block=block), ref)
