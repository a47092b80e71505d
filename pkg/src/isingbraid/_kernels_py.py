"""Reference kernels for batched matrix arithmetic over Z[zeta8].

A batch holds ``F`` square matrices as an integer array of shape
``(F, d, d, 4)``: the last axis carries the coefficients of 1, z, z^2, z^3
(z = e^{i pi/4}, z^4 = -1). Each matrix has one common sqrt(2)-denominator
exponent, stored separately as an array ``k`` of shape ``(F,)``.

Everything here is plain numpy and also accepts ``dtype=object`` arrays of
Python ints, which is the arbitrary-precision path. The compiled module
``_ckernels`` mirrors these signatures for int64 input.
"""
from __future__ import annotations

import numpy as np

# _MUL[a, b, m] = coefficient of z^m in z^a * z^b
_MUL = np.zeros((4, 4, 4), dtype=np.int64)
for _a in range(4):
    for _b in range(4):
        _MUL[_a, _b, (_a + _b) % 4] = 1 if _a + _b < 4 else -1


def rotate(u: np.ndarray, t: int) -> np.ndarray:
    """Multiply coefficient vectors (last axis) by z**t."""
    t %= 8
    neg = t >= 4
    t %= 4
    if t == 0:
        out = u.copy()
    else:
        out = np.concatenate([-u[..., 4 - t:], u[..., : 4 - t]], axis=-1)
    return -out if neg else out


def _operator(a: np.ndarray) -> np.ndarray:
    """(F, d, d, 4) -> (F, 4d, 4d) integer matrices acting on stacked coefficients."""
    F, d = a.shape[0], a.shape[1]
    if a.dtype == object:
        op = np.zeros((F, d, d, 4, 4), dtype=object)
        for av in range(4):
            for b in range(4):
                for m in range(4):
                    s = _MUL[av, b, m]
                    if s:
                        op[..., b, m] += s * a[..., av]
    else:
        op = np.einsum("fila,abm->filbm", a, _MUL)
    # rows (i, m), columns (l, b)
    return op.transpose(0, 1, 4, 2, 3).reshape(F, 4 * d, 4 * d)


def _stack(x: np.ndarray) -> np.ndarray:
    F, d = x.shape[0], x.shape[1]
    return x.transpose(0, 1, 3, 2).reshape(F, 4 * d, d)


def _unstack(y: np.ndarray, d: int) -> np.ndarray:
    F = y.shape[0]
    return np.ascontiguousarray(y.reshape(F, d, 4, d).transpose(0, 1, 3, 2))


def matmul_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise batch product ``a[f] @ b[f]`` of numerators (unreduced)."""
    d = a.shape[1]
    return _unstack(np.matmul(_operator(a), _stack(b)), d)


def reduce_batch(x: np.ndarray, k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lower each matrix's exponent while every entry is divisible by sqrt(2)."""
    x = np.array(x, copy=True)
    k = np.array(k, copy=True)
    F = x.shape[0]
    while True:
        live = k > 0
        if not live.any():
            break
        a0, a1, a2, a3 = x[..., 0], x[..., 1], x[..., 2], x[..., 3]
        div = ((a1 - a3) % 2 == 0) & ((a0 - a2) % 2 == 0)
        ok = div.reshape(F, -1).all(axis=1) & live
        if not ok.any():
            break
        y = x[ok]
        b0, b1, b2, b3 = y[..., 0], y[..., 1], y[..., 2], y[..., 3]
        x[ok] = np.stack(
            [(b1 - b3) // 2, (b0 + b2) // 2, (b1 + b3) // 2, (b2 - b0) // 2], axis=-1
        )
        k[ok] -= 1
    return x, k


def _best_phase(u: np.ndarray) -> np.ndarray:
    """For leading entries u (F, 4), the t in 0..7 maximizing rotate(u, t) lexicographically."""
    rots = np.stack([rotate(u, t) for t in range(8)], axis=1)  # (F, 8, 4)
    if rots.dtype == object:
        return np.array(
            [max(range(8), key=lambda t, r=r: tuple(r[t])) for r in rots], dtype=np.int64
        )
    cand = np.ones(rots.shape[:2], dtype=bool)
    floor = np.iinfo(rots.dtype).min
    for c in range(4):
        vals = np.where(cand, rots[..., c], floor)
        cand &= vals == vals.max(axis=1, keepdims=True)
    return cand.argmax(axis=1)


def projective_canonical_batch(x: np.ndarray) -> np.ndarray:
    """Pick, per matrix, the z^t multiple whose row-major coefficient sequence is largest.

    The first nonzero entry decides the comparison outright, since the eight
    rotations of a nonzero ring element are pairwise distinct.
    """
    F = x.shape[0]
    flat = x.reshape(F, -1, 4)
    nz = (flat != 0).any(axis=2)
    lead = flat[np.arange(F), nz.argmax(axis=1)]
    ts = _best_phase(lead)
    out = np.array(x, copy=True)
    for t in range(1, 8):
        sel = ts == t
        if sel.any():
            out[sel] = rotate(x[sel], t)
    return out


def left_mul_batch(
    g: np.ndarray, gk: int, x: np.ndarray, k: np.ndarray, projective: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """Reduced products ``g @ x[f]``; optionally phase-canonicalized."""
    d = g.shape[0]
    y = _unstack(np.matmul(_operator(g[None])[0], _stack(x)), d)
    y, ky = reduce_batch(y, np.asarray(k) + gk)
    if projective:
        y = projective_canonical_batch(y)
    return y, ky


def hash_batch(x: np.ndarray, k: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Two linear hashes mod 2^64 per matrix: ``flat(x) @ w[:-1] + k * w[-1]``."""
    F = x.shape[0]
    flat = np.ascontiguousarray(x, dtype=np.int64).reshape(F, -1).view(np.uint64)
    with np.errstate(over="ignore"):
        h = flat @ w[:-1]
        h += np.asarray(k, dtype=np.int64).view(np.uint64)[:, None] * w[-1]
    return h
