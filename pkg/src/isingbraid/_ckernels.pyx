# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 kernels; same contracts as ``_kernels_py``."""
import numpy as np

ctypedef long long i64


cdef inline void _cmul_acc(i64* o, const i64* a, const i64* b) noexcept nogil:
    o[0] += a[0] * b[0] - a[1] * b[3] - a[2] * b[2] - a[3] * b[1]
    o[1] += a[0] * b[1] + a[1] * b[0] - a[2] * b[3] - a[3] * b[2]
    o[2] += a[0] * b[2] + a[1] * b[1] + a[2] * b[0] - a[3] * b[3]
    o[3] += a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0]


cdef inline void _rot(i64* o, const i64* u, int t) noexcept nogil:
    cdef int m, s
    cdef i64 sgn = 1
    if t >= 4:
        sgn = -1
        t -= 4
    for m in range(4):
        s = m - t
        if s >= 0:
            o[m] = sgn * u[s]
        else:
            o[m] = -sgn * u[s + 4]


cdef inline i64 _floordiv2(i64 v) noexcept nogil:
    # arithmetic shift is floor division; operands are even anyway
    return v >> 1


cdef void _reduce_one(i64* x, Py_ssize_t L, i64* k) noexcept nogil:
    cdef Py_ssize_t e
    cdef i64 a0, a1, a2, a3
    cdef bint ok
    while k[0] > 0:
        ok = True
        for e in range(L):
            if ((x[4 * e + 1] - x[4 * e + 3]) & 1) or ((x[4 * e] - x[4 * e + 2]) & 1):
                ok = False
                break
        if not ok:
            return
        for e in range(L):
            a0 = x[4 * e]
            a1 = x[4 * e + 1]
            a2 = x[4 * e + 2]
            a3 = x[4 * e + 3]
            x[4 * e] = _floordiv2(a1 - a3)
            x[4 * e + 1] = _floordiv2(a0 + a2)
            x[4 * e + 2] = _floordiv2(a1 + a3)
            x[4 * e + 3] = _floordiv2(a2 - a0)
        k[0] -= 1


cdef void _canon_one(i64* x, Py_ssize_t L) noexcept nogil:
    cdef Py_ssize_t e, p = -1
    cdef int t, best = 0, c
    cdef i64 cur[4]
    cdef i64 top[4]
    cdef i64 tmp[4]
    for e in range(L):
        if x[4 * e] != 0 or x[4 * e + 1] != 0 or x[4 * e + 2] != 0 or x[4 * e + 3] != 0:
            p = e
            break
    if p < 0:
        return
    for c in range(4):
        top[c] = x[4 * p + c]
    for t in range(1, 8):
        _rot(cur, &x[4 * p], t)
        for c in range(4):
            if cur[c] != top[c]:
                if cur[c] > top[c]:
                    best = t
                    top[0] = cur[0]
                    top[1] = cur[1]
                    top[2] = cur[2]
                    top[3] = cur[3]
                break
    if best == 0:
        return
    for e in range(L):
        _rot(tmp, &x[4 * e], best)
        for c in range(4):
            x[4 * e + c] = tmp[c]


def reduce_batch(x, k):
    cdef i64[:, :, :, ::1] X = np.array(x, dtype=np.int64, order="C", copy=True)
    cdef i64[::1] K = np.array(k, dtype=np.int64, copy=True)
    cdef Py_ssize_t f, F = X.shape[0], L = X.shape[1] * X.shape[2]
    with nogil:
        for f in range(F):
            _reduce_one(&X[f, 0, 0, 0], L, &K[f])
    return np.asarray(X), np.asarray(K)


def projective_canonical_batch(x):
    cdef i64[:, :, :, ::1] X = np.array(x, dtype=np.int64, order="C", copy=True)
    cdef Py_ssize_t f, F = X.shape[0], L = X.shape[1] * X.shape[2]
    with nogil:
        for f in range(F):
            _canon_one(&X[f, 0, 0, 0], L)
    return np.asarray(X)


def matmul_batch(a, b):
    cdef const i64[:, :, :, ::1] A = np.ascontiguousarray(a, dtype=np.int64)
    cdef const i64[:, :, :, ::1] B = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t F = A.shape[0], d = A.shape[1]
    cdef i64[:, :, :, ::1] Y = np.zeros((F, d, d, 4), dtype=np.int64)
    cdef Py_ssize_t f, i, j, l
    with nogil:
        for f in range(F):
            for i in range(d):
                for l in range(d):
                    if A[f, i, l, 0] == 0 and A[f, i, l, 1] == 0 and A[f, i, l, 2] == 0 and A[f, i, l, 3] == 0:
                        continue
                    for j in range(d):
                        _cmul_acc(&Y[f, i, j, 0], &A[f, i, l, 0], &B[f, l, j, 0])
    return np.asarray(Y)


def left_mul_batch(g, gk, x, k, bint projective=False):
    cdef const i64[:, :, ::1] G = np.ascontiguousarray(g, dtype=np.int64)
    cdef const i64[:, :, :, ::1] X = np.ascontiguousarray(x, dtype=np.int64)
    cdef Py_ssize_t F = X.shape[0], d = X.shape[1], L = d * d
    cdef i64[:, :, :, ::1] Y = np.zeros((F, d, d, 4), dtype=np.int64)
    cdef i64[::1] K = np.asarray(k, dtype=np.int64) + <i64>gk
    # sparse view of the generator
    nz = np.argwhere(np.asarray(G).any(axis=2)).astype(np.intp)
    cdef Py_ssize_t nnz = nz.shape[0]
    cdef Py_ssize_t[:, ::1] NZ = np.ascontiguousarray(nz).reshape(nnz, 2)
    cdef Py_ssize_t f, j, q, i, l
    with nogil:
        for f in range(F):
            for q in range(nnz):
                i = NZ[q, 0]
                l = NZ[q, 1]
                for j in range(d):
                    _cmul_acc(&Y[f, i, j, 0], &G[i, l, 0], &X[f, l, j, 0])
            _reduce_one(&Y[f, 0, 0, 0], L, &K[f])
            if projective:
                _canon_one(&Y[f, 0, 0, 0], L)
    return np.asarray(Y), np.asarray(K)


ctypedef unsigned long long u64


def hash_batch(x, k, w):
    cdef const i64[:, ::1] X = np.ascontiguousarray(x, dtype=np.int64).reshape(x.shape[0], -1)
    cdef const i64[::1] K = np.ascontiguousarray(k, dtype=np.int64)
    cdef const u64[:, ::1] W = np.ascontiguousarray(w, dtype=np.uint64)
    cdef Py_ssize_t F = X.shape[0], L = X.shape[1], f, p
    cdef u64[:, ::1] H = np.empty((F, 2), dtype=np.uint64)
    cdef u64 h0, h1, v
    with nogil:
        for f in range(F):
            h0 = <u64>K[f] * W[L, 0]
            h1 = <u64>K[f] * W[L, 1]
            for p in range(L):
                v = <u64>X[f, p]
                if v:
                    h0 += v * W[p, 0]
                    h1 += v * W[p, 1]
            H[f, 0] = h0
            H[f, 1] = h1
    return np.asarray(H)
