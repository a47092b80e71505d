"""Exact arithmetic in Z[z, 1/sqrt(2)] with z = e^{i pi/4}, and matrices over it.

Scalars are :class:`CycEl` values ``(a0 + a1 z + a2 z^2 + a3 z^3) / sqrt(2)^k``
kept with minimal ``k``. Matrices (:class:`UnitaryMatrix`) store one integer
numerator array of shape ``(d, d, 4)`` over a common exponent ``k``, again
minimal, so equality of canonical matrices is plain array equality.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from isingbraid import kernels
from isingbraid._kernels_py import rotate

ZETA = cmath.exp(1j * math.pi / 4)

# int64 products stay exact while |a| * |b| * 4 * d < 2**62
_INT64_SAFE = 2**62


def _div_sqrt2(a0: int, a1: int, a2: int, a3: int) -> tuple[int, int, int, int] | None:
    """u / sqrt(2) = u (z - z^3) / 2 when that lands back in Z[z]."""
    if (a1 - a3) % 2 or (a0 - a2) % 2:
        return None
    return (a1 - a3) // 2, (a0 + a2) // 2, (a1 + a3) // 2, (a2 - a0) // 2


def _mul_sqrt2(a0: int, a1: int, a2: int, a3: int) -> tuple[int, int, int, int]:
    return a1 - a3, a0 + a2, a1 + a3, a2 - a0


@dataclass(frozen=True)
class CycEl:
    """Element of Z[z, 1/sqrt(2)]; construct through :func:`cyc` to get canonical form."""

    a0: int
    a1: int
    a2: int
    a3: int
    k: int = 0

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.a0, self.a1, self.a2, self.a3)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __complex__(self) -> complex:
        num = self.a0 + self.a1 * ZETA + self.a2 * 1j + self.a3 * ZETA**3
        return num / math.sqrt(2) ** self.k

    def __add__(self, other: CycEl) -> CycEl:
        return cyc_add(self, other)

    def __neg__(self) -> CycEl:
        return CycEl(-self.a0, -self.a1, -self.a2, -self.a3, self.k)

    def __sub__(self, other: CycEl) -> CycEl:
        return cyc_add(self, -other)

    def __mul__(self, other: CycEl) -> CycEl:
        return cyc_mul(self, other)

    def conj(self) -> CycEl:
        return cyc_conj(self)

    def to_list(self) -> list[int]:
        return [self.a0, self.a1, self.a2, self.a3, self.k]

    def __str__(self) -> str:
        return format_cyc(self)


def cyc(a0: int = 0, a1: int = 0, a2: int = 0, a3: int = 0, k: int = 0) -> CycEl:
    return cyc_reduce(CycEl(int(a0), int(a1), int(a2), int(a3), int(k)))


def cyc_reduce(a: CycEl) -> CycEl:
    if a.k < 0:
        raise ValueError("sqrt(2) exponent must be non-negative")
    u, k = a.coeffs, a.k
    while k > 0:
        v = _div_sqrt2(*u)
        if v is None:
            break
        u, k = v, k - 1
    return CycEl(*u, k)


def _lift(a: CycEl, k: int) -> tuple[int, int, int, int]:
    """Numerator of ``a`` over sqrt(2)^k, k >= a.k."""
    u = a.coeffs
    steps = k - a.k
    if steps % 2:
        u = _mul_sqrt2(*u)
    s = 2 ** (steps // 2)
    return tuple(s * c for c in u)  # type: ignore[return-value]


def cyc_add(a: CycEl, b: CycEl) -> CycEl:
    k = max(a.k, b.k)
    u, v = _lift(a, k), _lift(b, k)
    return cyc_reduce(CycEl(*(x + y for x, y in zip(u, v)), k))


def cyc_mul(a: CycEl, b: CycEl) -> CycEl:
    x0, x1, x2, x3 = a.coeffs
    y0, y1, y2, y3 = b.coeffs
    return cyc_reduce(
        CycEl(
            x0 * y0 - x1 * y3 - x2 * y2 - x3 * y1,
            x0 * y1 + x1 * y0 - x2 * y3 - x3 * y2,
            x0 * y2 + x1 * y1 + x2 * y0 - x3 * y3,
            x0 * y3 + x1 * y2 + x2 * y1 + x3 * y0,
            a.k + b.k,
        )
    )


def cyc_conj(a: CycEl) -> CycEl:
    # z^t -> z^{-t}: z -> -z^3, z^2 -> -z^2, z^3 -> -z
    return CycEl(a.a0, -a.a3, -a.a2, -a.a1, a.k)


ZERO = CycEl(0, 0, 0, 0, 0)
ONE = CycEl(1, 0, 0, 0, 0)
I_UNIT = CycEl(0, 0, 1, 0, 0)
ZETA8 = CycEl(0, 1, 0, 0, 0)
INV_SQRT2 = CycEl(1, 0, 0, 0, 1)

_PHASE_NAMES = ["1", "e^{iπ/4}", "i", "e^{3iπ/4}", "-1", "-e^{iπ/4}", "-i", "-e^{3iπ/4}"]


def format_cyc(a: CycEl) -> str:
    """Readable symbolic form, e.g. ``e^{iπ/4}/√2`` or ``(1+i)/2``."""
    if a.is_zero():
        return "0"
    nz = [(t, c) for t, c in enumerate(a.coeffs) if c]
    den = ""
    if a.k:
        den = "/" + ("√2" if a.k == 1 else f"√2^{a.k}")
        if a.k % 2 == 0:
            den = "/" + str(2 ** (a.k // 2))
    if len(nz) == 1 and abs(nz[0][1]) == 1:
        t, c = nz[0]
        return _PHASE_NAMES[t if c > 0 else t + 4] + den
    terms = []
    for t, c in nz:
        base = ["", "e^{iπ/4}", "i", "e^{3iπ/4}"][t]
        if not base:
            terms.append(str(c))
        elif abs(c) == 1:
            terms.append(("-" if c < 0 else "") + base)
        else:
            terms.append(f"{c}{base}")
    body = "+".join(terms).replace("+-", "-")
    return f"({body}){den}" if den else body


class UnitaryMatrix:
    """Square 2^n matrix over Z[z, 1/sqrt(2)] in common-denominator canonical form.

    ``num`` is an integer array (int64, or object for big coefficients) of
    shape ``(d, d, 4)`` and the matrix value is ``num / sqrt(2)^k``. Unitarity
    is not enforced at construction; see :meth:`is_unitary`.
    """

    def __init__(self, num: np.ndarray, k: int = 0, *, reduced: bool = False) -> None:
        num = np.asarray(num)
        if num.ndim != 3 or num.shape[0] != num.shape[1] or num.shape[2] != 4:
            raise ValueError(f"expected numerator of shape (d, d, 4), got {num.shape}")
        if num.dtype != object and num.dtype != np.int64:
            num = num.astype(np.int64)
        if not reduced:
            be = kernels.for_dtype(num.dtype)
            r, kk = be.reduce_batch(num[None], np.array([k], dtype=num.dtype))
            num, k = r[0], int(kk[0])
        num = _shrink(num)
        num.flags.writeable = False
        self.num = num
        self.k = int(k)

    # construction ------------------------------------------------------
    @classmethod
    def from_entries(cls, rows: Sequence[Sequence[CycEl]]) -> UnitaryMatrix:
        d = len(rows)
        if any(len(r) != d for r in rows):
            raise ValueError("matrix must be square")
        k = max((e.k for r in rows for e in r), default=0)
        num = np.empty((d, d, 4), dtype=object)
        for i, r in enumerate(rows):
            for j, e in enumerate(r):
                num[i, j] = _lift(e, k)
        return cls(num, k)

    @classmethod
    def identity(cls, d: int) -> UnitaryMatrix:
        num = np.zeros((d, d, 4), dtype=np.int64)
        num[np.arange(d), np.arange(d), 0] = 1
        return cls(num, 0, reduced=True)

    @classmethod
    def diag(cls, entries: Sequence[CycEl]) -> UnitaryMatrix:
        d = len(entries)
        return cls.from_entries([[entries[i] if i == j else ZERO for j in range(d)] for i in range(d)])

    @classmethod
    def scalar(cls, c: CycEl, d: int) -> UnitaryMatrix:
        return cls.diag([c] * d)

    # basic properties ----------------------------------------------------
    @property
    def dim(self) -> int:
        return self.num.shape[0]

    @property
    def n_qubits(self) -> int:
        n = self.dim.bit_length() - 1
        if 1 << n != self.dim:
            raise ValueError(f"dimension {self.dim} is not a power of two")
        return n

    def __getitem__(self, ij: tuple[int, int]) -> CycEl:
        i, j = ij
        return cyc(*(int(c) for c in self.num[i, j]), self.k)

    @property
    def entries(self) -> list[list[CycEl]]:
        return [[self[i, j] for j in range(self.dim)] for i in range(self.dim)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UnitaryMatrix):
            return NotImplemented
        return self.k == other.k and self.num.shape == other.num.shape and bool(
            np.all(self.num == other.num)
        )

    def __hash__(self) -> int:
        return mat_hash(self)

    def __repr__(self) -> str:
        return f"UnitaryMatrix(dim={self.dim}, k={self.k})"

    # algebra -------------------------------------------------------------
    def __matmul__(self, other: UnitaryMatrix) -> UnitaryMatrix:
        return mat_mul(self, other)

    def scale(self, c: CycEl) -> UnitaryMatrix:
        return mat_mul(UnitaryMatrix.scalar(c, self.dim), self)

    def dagger(self) -> UnitaryMatrix:
        u = self.num.transpose(1, 0, 2)
        conj = np.stack([u[..., 0], -u[..., 3], -u[..., 2], -u[..., 1]], axis=-1)
        return UnitaryMatrix(conj, self.k, reduced=True)

    def phase(self, t: int) -> UnitaryMatrix:
        """z^t times this matrix."""
        return UnitaryMatrix(rotate(self.num, t), self.k, reduced=True)

    def kron(self, other: UnitaryMatrix) -> UnitaryMatrix:
        d1, d2 = self.dim, other.dim
        out = UnitaryMatrix._kron_num(self.num, other.num)
        return UnitaryMatrix(out.reshape(d1 * d2, d1 * d2, 4), self.k + other.k)

    @staticmethod
    def _kron_num(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        d1, d2 = a.shape[0], b.shape[0]
        dt = object if object in (a.dtype, b.dtype) else np.int64
        prod = kernels.for_dtype(dt).matmul_batch
        # entrywise ring products via a 1x1 "matrix" batch
        aa = np.repeat(a.reshape(-1, 1, 1, 4), d2 * d2, axis=0).astype(dt)
        bb = np.tile(b.reshape(-1, 1, 1, 4), (d1 * d1, 1, 1, 1)).astype(dt)
        p = prod(aa, bb).reshape(d1, d1, d2, d2, 4)
        return p.transpose(0, 2, 1, 3, 4)

    def is_unitary(self) -> bool:
        return mat_mul(self, self.dagger()) == UnitaryMatrix.identity(self.dim)

    def is_scalar(self) -> bool:
        off = self.num.copy()
        off[np.arange(self.dim), np.arange(self.dim)] = 0
        if np.any(off != 0):
            return False
        diag = self.num[np.arange(self.dim), np.arange(self.dim)]
        return bool(np.all(diag == diag[0]))

    def to_complex(self) -> np.ndarray:
        z = np.array([1, ZETA, 1j, ZETA**3])
        return (self.num.astype(float) @ z) / math.sqrt(2) ** self.k

    # serialization -------------------------------------------------------
    def to_json(self) -> list[list[list[int]]]:
        return [[self[i, j].to_list() for j in range(self.dim)] for i in range(self.dim)]

    @classmethod
    def from_json(cls, data: Iterable[Iterable[Sequence[int]]]) -> UnitaryMatrix:
        return cls.from_entries([[cyc(*e) for e in row] for row in data])

    def pretty(self) -> list[list[str]]:
        return [[format_cyc(self[i, j]) for j in range(self.dim)] for i in range(self.dim)]


def _shrink(num: np.ndarray) -> np.ndarray:
    """Prefer int64 storage whenever the coefficients fit."""
    if num.dtype == object:
        if num.size == 0 or max(abs(int(v)) for v in num.flat) < 2**62:
            return num.astype(np.int64)
        return num
    return np.ascontiguousarray(num)


def _max_abs(num: np.ndarray) -> int:
    if num.size == 0:
        return 0
    if num.dtype == object:
        return max(abs(int(v)) for v in num.flat)
    return int(np.abs(num).max())


def mat_mul(a: UnitaryMatrix, b: UnitaryMatrix) -> UnitaryMatrix:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    x, y = a.num, b.num
    if x.dtype == object or y.dtype == object or _max_abs(x) * _max_abs(y) * 4 * a.dim >= _INT64_SAFE:
        x, y = x.astype(object), y.astype(object)
    be = kernels.for_dtype(x.dtype)
    p = be.matmul_batch(x[None], y[None])
    kk = np.array([a.k + b.k], dtype=object if x.dtype == object else np.int64)
    r, kk = be.reduce_batch(p, kk)
    return UnitaryMatrix(r[0], int(kk[0]), reduced=True)


def projective_canonical(a: UnitaryMatrix) -> UnitaryMatrix:
    """Representative of the orbit {z^t a : t = 0..7}.

    Order: flatten the common-denominator numerator row-major, entry by entry
    as (a0, a1, a2, a3), and take the lexicographically largest. Under this
    order the identity is the representative of its own phase orbit.
    """
    be = kernels.for_dtype(a.num.dtype)
    return UnitaryMatrix(be.projective_canonical_batch(a.num[None])[0], a.k, reduced=True)


# ---------------------------------------------------------------------------
# 128-bit keys: two independent linear hashes mod 2^64 over the numerator and k.

_HASH_SEED = 0x15196_B4A1D


_WEIGHTS: dict[int, np.ndarray] = {}


def _weights(length: int) -> np.ndarray:
    w = _WEIGHTS.get(length)
    if w is None:
        rng = np.random.default_rng([_HASH_SEED, length])
        w = rng.integers(0, 2**64, size=(length + 1, 2), dtype=np.uint64, endpoint=False)
        w = _WEIGHTS[length] = w | np.uint64(1)
    return w


def hash_batch(num: np.ndarray, k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Key words (h1, h2) for each canonical matrix in an int batch (F, d, d, 4)."""
    flat = np.ascontiguousarray(num, dtype=np.int64).reshape(num.shape[0], -1)
    h = kernels.impl.hash_batch(flat, np.asarray(k, dtype=np.int64), _weights(flat.shape[1]))
    return h[:, 0], h[:, 1]


def mat_hash(a: UnitaryMatrix) -> int:
    """Deterministic 128-bit key ``h1 << 64 | h2`` of a canonical matrix."""
    num = a.num
    if num.dtype == object:
        num = np.array([int(v) % 2**64 for v in num.flat], dtype=np.uint64).view(np.int64)
        num = num.reshape(a.num.shape)
    h1, h2 = hash_batch(num[None], np.array([a.k]))
    return (int(h1[0]) << 64) | int(h2[0])

