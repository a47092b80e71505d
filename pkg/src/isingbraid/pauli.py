"""n-qubit Pauli group in (phase, x, z) form.

``PauliOperator(n, m, x, z)`` is ``i^m * prod_j X_j^{x_j} Z_j^{z_j}``, with X
before Z on each qubit, so ``Y = i X Z``. Bit vectors are tuples of 0/1 with
qubit 1 first.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from isingbraid.cyclotomic import UnitaryMatrix

# i^m as Z[z] coefficient vectors
_I_POW = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [-1, 0, 0, 0], [0, 0, -1, 0]], dtype=np.int64)


class NotPauli(ValueError):
    """A matrix expected to lie in the Pauli group does not."""


def _bits(v, n: int) -> tuple[int, ...]:
    if isinstance(v, str):
        v = [int(c) for c in v]
    t = tuple(int(b) & 1 for b in v)
    if len(t) != n:
        raise ValueError(f"bit vector {v!r} has length {len(t)}, expected {n}")
    return t


@dataclass(frozen=True)
class PauliOperator:
    n: int
    m: int
    x: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", self.m % 4)
        object.__setattr__(self, "x", _bits(self.x, self.n))
        object.__setattr__(self, "z", _bits(self.z, self.n))

    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls(n, 0, (0,) * n, (0,) * n)

    @classmethod
    def single(cls, n: int, qubit: int, label: str) -> PauliOperator:
        """``label`` in I, X, Y, Z on 1-based ``qubit`` (Y carries its i)."""
        x, z = [0] * n, [0] * n
        xb, zb, m = {"I": (0, 0, 0), "X": (1, 0, 0), "Z": (0, 1, 0), "Y": (1, 1, 1)}[label]
        x[qubit - 1], z[qubit - 1] = xb, zb
        return cls(n, m, tuple(x), tuple(z))

    @classmethod
    def from_labels(cls, labels: str, m: int = 0) -> PauliOperator:
        """Tensor product of Hermitian Paulis, e.g. ``"ZIX"``."""
        out = cls(len(labels), m, (0,) * len(labels), (0,) * len(labels))
        for q, c in enumerate(labels, start=1):
            out = pauli_mul(out, cls.single(len(labels), q, c))
        return out

    @property
    def symplectic(self) -> tuple[int, ...]:
        return self.x + self.z

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return pauli_mul(self, other)

    def commutes(self, other: PauliOperator) -> bool:
        return symplectic_product(self, other) == 0

    def __str__(self) -> str:
        xs = "".join(map(str, self.x))
        zs = "".join(map(str, self.z))
        return f"i^{self.m} X{xs} Z{zs}"


_TEXT = re.compile(r"^\s*i\^(\d+)\s+X([01]*)\s+Z([01]*)\s*$")


def parse_pauli(text: str) -> PauliOperator:
    """Inverse of ``str(PauliOperator)``: ``i^m X<bits> Z<bits>``."""
    mt = _TEXT.match(text)
    if not mt or len(mt.group(2)) != len(mt.group(3)) or not mt.group(2):
        raise ValueError(f"malformed Pauli text {text!r}")
    n = len(mt.group(2))
    return PauliOperator(n, int(mt.group(1)), mt.group(2), mt.group(3))


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    """x_p.z_q + z_p.x_q mod 2; zero iff p and q commute."""
    return (sum(a & b for a, b in zip(p.x, q.z)) + sum(a & b for a, b in zip(p.z, q.x))) % 2


def pauli_mul(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n} qubits")
    # Z^{z_p} X^{x_q} = (-1)^{z_p.x_q} X^{x_q} Z^{z_p}
    cross = sum(a & b for a, b in zip(p.z, q.x))
    return PauliOperator(
        p.n,
        p.m + q.m + 2 * cross,
        tuple(a ^ b for a, b in zip(p.x, q.x)),
        tuple(a ^ b for a, b in zip(p.z, q.z)),
    )


def _mask(bits: tuple[int, ...]) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | b
    return v


def pauli_to_matrix(p: PauliOperator) -> UnitaryMatrix:
    # X^x Z^z |c> = (-1)^{z.c} |c xor x>
    d = 2**p.n
    xm, zm = _mask(p.x), _mask(p.z)
    num = np.zeros((d, d, 4), dtype=np.int64)
    for c in range(d):
        sign = bin(zm & c).count("1") % 2
        num[c ^ xm, c] = _I_POW[(p.m + 2 * sign) % 4]
    return UnitaryMatrix(num, 0, reduced=True)


def _phase_index(coeffs: np.ndarray) -> int | None:
    """m with coeffs == i^m, else None."""
    for m in range(4):
        if np.array_equal(coeffs, _I_POW[m]):
            return m
    return None


def matrix_to_pauli(u: UnitaryMatrix) -> PauliOperator | None:
    """Exact decoding; ``None`` when ``u`` is not an element of the Pauli group."""
    n = u.n_qubits
    if u.k != 0:
        return None
    d = u.dim
    nz = np.any(u.num != 0, axis=2)
    if not np.all(nz.sum(axis=0) == 1) or not np.all(nz.sum(axis=1) == 1):
        return None
    rows = nz.argmax(axis=0)  # rows[c] = image row of column c
    xm = int(rows[0])
    if not np.all(rows == (np.arange(d) ^ xm)):
        return None
    m = _phase_index(u.num[xm, 0])
    if m is None:
        return None
    z = []
    for q in range(n):
        c = 1 << (n - 1 - q)
        mq = _phase_index(u.num[c ^ xm, c])
        if mq is None or (mq - m) % 2:
            return None
        z.append(((mq - m) % 4) // 2)
    x = tuple((xm >> (n - 1 - q)) & 1 for q in range(n))
    p = PauliOperator(n, m, x, tuple(z))
    return p if pauli_to_matrix(p) == u else None


def pauli_group_elements(n: int) -> Iterator[PauliOperator]:
    """All 4^(n+1) elements, each once."""
    for m in range(4):
        for x in itertools.product((0, 1), repeat=n):
            for z in itertools.product((0, 1), repeat=n):
                yield PauliOperator(n, m, x, z)


def pauli_generators(n: int) -> list[PauliOperator]:
    """X_1..X_n, Z_1..Z_n: the basis rows of the symplectic picture."""
    return [PauliOperator.single(n, q, "X") for q in range(1, n + 1)] + [
        PauliOperator.single(n, q, "Z") for q in range(1, n + 1)
    ]
