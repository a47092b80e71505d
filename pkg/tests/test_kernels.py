"""Compiled and reference kernels must agree bit for bit."""
import numpy as np
import pytest

from isingbraid import _kernels_py, kernels
from isingbraid.braid import generators
from isingbraid.cyclotomic import _weights

BACKENDS = kernels.available_backends()


def _random_batch(rng, F=64, d=4, lo=-3, hi=4):
    return rng.integers(lo, hi, size=(F, d, d, 4)).astype(np.int64), rng.integers(0, 4, size=F)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_backend_matches_reference(name):
    be = BACKENDS[name]
    rng = np.random.default_rng(7)
    a, ka = _random_batch(rng)
    b, _ = _random_batch(rng)
    assert np.array_equal(be.matmul_batch(a, b), _kernels_py.matmul_batch(a, b))
    for x, y in zip(be.reduce_batch(2 * a, ka + 2), _kernels_py.reduce_batch(2 * a, ka + 2)):
        assert np.array_equal(x, y)
    assert np.array_equal(be.projective_canonical_batch(a), _kernels_py.projective_canonical_batch(a))
    g = generators(2)[1]
    for proj in (False, True):
        for x, y in zip(
            be.left_mul_batch(g.num, g.k, a, ka, proj), _kernels_py.left_mul_batch(g.num, g.k, a, ka, proj)
        ):
            assert np.array_equal(x, y)
    w = _weights(64)
    assert np.array_equal(be.hash_batch(a.reshape(len(a), -1), ka, w), _kernels_py.hash_batch(a, ka, w))


def test_left_mul_equals_dense_product_then_reduce():
    rng = np.random.default_rng(3)
    a, ka = _random_batch(rng, F=16)
    g = generators(2)[3]
    y, ky = kernels.impl.left_mul_batch(g.num, g.k, a, ka)
    dense = _kernels_py.matmul_batch(np.broadcast_to(g.num, a.shape).copy(), a)
    ry, rk = _kernels_py.reduce_batch(dense, ka + g.k)
    assert np.array_equal(y, ry) and np.array_equal(ky, rk)


def test_rotation_by_eight_is_identity():
    u = np.arange(12).reshape(3, 4)
    assert np.array_equal(_kernels_py.rotate(u, 8), u)
    assert np.array_equal(_kernels_py.rotate(u, 4), -u)
    assert np.array_equal(_kernels_py.rotate(_kernels_py.rotate(u, 3), 5), u)


def test_object_dtype_reference_path():
    a = np.zeros((1, 2, 2, 4), dtype=object)
    a[0, 0, 0, 0] = 2**70
    a[0, 1, 1, 2] = 1
    p = _kernels_py.matmul_batch(a, a)
    assert p[0, 0, 0, 0] == 2**140
    assert p[0, 1, 1, 0] == -1
