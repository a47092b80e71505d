"""Clifford membership, reduction to Sp(2n, F2), and group order formulas.

Conjugation is ``U^dagger W U``. Row ``r`` of the symplectic matrix is the
(x|z) vector of the image of the r-th Pauli generator (X_1..X_n, Z_1..Z_n),
and Paulis act as row vectors, so ``S(U V) = S(U) S(V)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from isingbraid import kernels
from isingbraid.cyclotomic import INV_SQRT2, ONE, I_UNIT, ZERO, UnitaryMatrix, cyc
from isingbraid.pauli import (
    _I_POW,
    PauliOperator,
    matrix_to_pauli,
    pauli_generators,
    pauli_to_matrix,
)


class NotClifford(ValueError):
    pass


class NotUnitary(ValueError):
    pass


def symplectic_form(n: int) -> np.ndarray:
    j = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    j[:n, n:] = np.eye(n, dtype=np.uint8)
    j[n:, :n] = np.eye(n, dtype=np.uint8)
    return j


@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    n: int
    bits: np.ndarray  # (2n, 2n) uint8

    def __post_init__(self) -> None:
        b = np.asarray(self.bits, dtype=np.uint8) & 1
        if b.shape != (2 * self.n, 2 * self.n):
            raise ValueError(f"expected {2 * self.n}x{2 * self.n} bits, got {b.shape}")
        b.flags.writeable = False
        object.__setattr__(self, "bits", b)

    @classmethod
    def identity(cls, n: int) -> SymplecticMatrix:
        return cls(n, np.eye(2 * n, dtype=np.uint8))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymplecticMatrix):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self) -> int:
        return hash((self.n, self.bits.tobytes()))

    def __matmul__(self, other: SymplecticMatrix) -> SymplecticMatrix:
        return sp_mul(self, other)

    def inverse(self) -> SymplecticMatrix:
        j = symplectic_form(self.n)
        return SymplecticMatrix(self.n, (j @ self.bits.T @ j) % 2)

    def to_rows(self) -> np.ndarray:
        """Row r as an integer with bit c set for column c."""
        w = np.uint64(1) << np.arange(2 * self.n, dtype=np.uint64)
        return (self.bits.astype(np.uint64) * w).sum(axis=1, dtype=np.uint64)

    @classmethod
    def from_rows(cls, n: int, rows) -> SymplecticMatrix:
        rows = np.asarray(rows, dtype=np.uint64)
        bits = (rows[:, None] >> np.arange(2 * n, dtype=np.uint64)) & np.uint64(1)
        return cls(n, bits.astype(np.uint8))

    def to_bitstrings(self) -> list[str]:
        return ["".join(str(int(b)) for b in row) for row in self.bits]

    @classmethod
    def from_bitstrings(cls, rows: list[str]) -> SymplecticMatrix:
        bits = np.array([[int(c) for c in r] for r in rows], dtype=np.uint8)
        return cls(bits.shape[0] // 2, bits)


def sp_mul(a: SymplecticMatrix, b: SymplecticMatrix) -> SymplecticMatrix:
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    return SymplecticMatrix(a.n, (a.bits.astype(np.int64) @ b.bits) % 2)


def sp_check(s: SymplecticMatrix) -> bool:
    j = symplectic_form(s.n)
    b = s.bits.astype(np.int64)
    return bool(np.array_equal((b @ j @ b.T) % 2, j))


@dataclass(frozen=True)
class CliffordImage:
    """Projective action (S) plus the phases r of the generator images."""

    S: SymplecticMatrix
    r: tuple[int, ...]

    def image(self, r: int) -> PauliOperator:
        n = self.S.n
        row = self.S.bits[r]
        return PauliOperator(n, self.r[r], tuple(row[:n]), tuple(row[n:]))


def conjugate(u: UnitaryMatrix, w: UnitaryMatrix) -> UnitaryMatrix:
    return u.dagger() @ w @ u


def _require_unitary(u: UnitaryMatrix) -> None:
    if not u.is_unitary():
        raise NotUnitary("matrix is not unitary")


def is_clifford(u: UnitaryMatrix) -> bool:
    _require_unitary(u)
    n = u.n_qubits
    return all(
        matrix_to_pauli(conjugate(u, pauli_to_matrix(w))) is not None for w in pauli_generators(n)
    )


def clifford_to_symplectic(u: UnitaryMatrix) -> CliffordImage:
    _require_unitary(u)
    n = u.n_qubits
    rows, phases = [], []
    for w in pauli_generators(n):
        p = matrix_to_pauli(conjugate(u, pauli_to_matrix(w)))
        if p is None:
            raise NotClifford("conjugation leaves the Pauli group")
        rows.append(p.x + p.z)
        phases.append(p.m)
    return CliffordImage(SymplecticMatrix(n, np.array(rows, dtype=np.uint8)), tuple(phases))


def _dagger_batch(num: np.ndarray) -> np.ndarray:
    u = num.transpose(0, 2, 1, 3)
    return np.ascontiguousarray(np.stack([u[..., 0], -u[..., 3], -u[..., 2], -u[..., 1]], axis=-1))


def _is_pauli_batch(num: np.ndarray, k: np.ndarray, n: int) -> np.ndarray:
    """Vectorized membership in the Pauli group for reduced matrices."""
    F, d = num.shape[0], num.shape[1]
    nz = np.any(num != 0, axis=3)  # (F, row, col)
    ok = (k == 0) & np.all(nz.sum(axis=1) == 1, axis=1) & np.all(nz.sum(axis=2) == 1, axis=1)
    rows = nz.argmax(axis=1)  # (F, col)
    xm = rows[:, 0]
    cols = np.arange(d)
    ok &= np.all(rows == (cols[None, :] ^ xm[:, None]), axis=1)
    vals = num[np.arange(F)[:, None], rows, cols[None, :]]  # (F, col, 4)
    match = np.all(vals[:, :, None, :] == _I_POW[None, None], axis=3)  # (F, col, 4)
    ok &= match.any(axis=2).all(axis=1)
    m = match.argmax(axis=2)
    rel = (m - m[:, :1]) % 4
    ok &= np.all(rel % 2 == 0, axis=1)
    sgn = rel // 2  # (F, col): must equal parity(z & col)
    z = np.zeros(F, dtype=np.int64)
    for q in range(n):
        c = 1 << q
        z |= sgn[:, c] << q
    par = np.array([bin(v).count("1") % 2 for v in range(d)])
    zc = np.bitwise_and(z[:, None], cols[None, :])
    parity = par[zc]
    ok &= np.all(parity == sgn, axis=1)
    return ok


def is_clifford_batch(num: np.ndarray, k: np.ndarray) -> np.ndarray:
    """``is_clifford`` over a stack of unitaries (F, d, d, 4) with exponents (F,)."""
    num = np.ascontiguousarray(num, dtype=np.int64)
    k = np.asarray(k, dtype=np.int64)
    d = num.shape[1]
    n = d.bit_length() - 1
    be = kernels.impl
    dag = _dagger_batch(num)
    ok = np.ones(num.shape[0], dtype=bool)
    for w in pauli_generators(n):
        wu, kw = be.left_mul_batch(pauli_to_matrix(w).num, 0, num, k)
        r = be.matmul_batch(dag, wu)
        r, kr = be.reduce_batch(r, k + kw)
        ok &= _is_pauli_batch(r, kr, n)
    return ok


# ---------------------------------------------------------------------------
# Standard gates, expressed exactly in the ring.

def _embed(n: int, gate: UnitaryMatrix, qubits: tuple[int, ...]) -> UnitaryMatrix:
    """Lift a gate on ``qubits`` (1-based, in gate order) to n qubits."""
    d = 2**n
    g = len(qubits)
    num = np.zeros((d, d, 4), dtype=np.int64)
    gn = gate.num
    shifts = [n - q for q in qubits]
    for col in range(d):
        sub_c = 0
        for s in shifts:
            sub_c = (sub_c << 1) | ((col >> s) & 1)
        base = col
        for s in shifts:
            base &= ~(1 << s)
        for sub_r in range(2**g):
            row = base
            for t, s in enumerate(shifts):
                if (sub_r >> (g - 1 - t)) & 1:
                    row |= 1 << s
            num[row, col] = gn[sub_r, sub_c]
    return UnitaryMatrix(num, gate.k)


def hadamard(n: int = 1, q: int = 1) -> UnitaryMatrix:
    h = UnitaryMatrix.from_entries([[INV_SQRT2, INV_SQRT2], [INV_SQRT2, cyc(-1, k=1)]])
    return _embed(n, h, (q,))


def phase_gate(n: int = 1, q: int = 1) -> UnitaryMatrix:
    return _embed(n, UnitaryMatrix.diag([ONE, I_UNIT]), (q,))


def t_gate(n: int = 1, q: int = 1) -> UnitaryMatrix:
    return _embed(n, UnitaryMatrix.diag([ONE, cyc(0, 1)]), (q,))


def cnot(n: int, control: int, target: int) -> UnitaryMatrix:
    o, z = ONE, ZERO
    g = UnitaryMatrix.from_entries(
        [[o, z, z, z], [z, o, z, z], [z, z, z, o], [z, z, o, z]]
    )
    return _embed(n, g, (control, target))


def swap(n: int, i: int, j: int) -> UnitaryMatrix:
    o, z = ONE, ZERO
    g = UnitaryMatrix.from_entries(
        [[o, z, z, z], [z, z, o, z], [z, o, z, z], [z, z, z, o]]
    )
    return _embed(n, g, (i, j))


def swap_symplectic(n: int, i: int, j: int) -> SymplecticMatrix:
    perm = list(range(2 * n))
    perm[i - 1], perm[j - 1] = perm[j - 1], perm[i - 1]
    perm[n + i - 1], perm[n + j - 1] = perm[n + j - 1], perm[n + i - 1]
    return SymplecticMatrix(n, np.eye(2 * n, dtype=np.uint8)[perm])


def clifford_generators(n: int) -> list[UnitaryMatrix]:
    """H_q, S_q for every qubit and CNOT between neighbours."""
    gens = [hadamard(n, q) for q in range(1, n + 1)] + [phase_gate(n, q) for q in range(1, n + 1)]
    gens += [cnot(n, q, q + 1) for q in range(1, n)]
    return gens


# ---------------------------------------------------------------------------
# Closed-form orders.

def symplectic_group_order(n: int) -> int:
    return 2 ** (n * n) * math.prod(4**j - 1 for j in range(1, n + 1))


def clifford_projective_order(n: int) -> int:
    return 2 ** (n * n + 2 * n) * math.prod(4**j - 1 for j in range(1, n + 1))


def braid_image_order(n: int) -> int:
    """Order of the braid image including its centre (96 at one qubit)."""
    if n < 1:
        raise ValueError("n >= 1")
    if n == 1:
        return 96
    return 2 ** (2 * n + 2) * math.factorial(2 * n + 2)


def braid_projective_order(n: int) -> int:
    return braid_image_order(n) // 4


def order_ratio(n: int) -> Fraction:
    return Fraction(clifford_projective_order(n), braid_projective_order(n))
