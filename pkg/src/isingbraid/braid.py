"""Ising representation of the braid group on 2n+2 strands acting on n qubits.

Tensor slots follow the usual convention: qubit 1 is the leftmost factor, so
basis index ``b`` reads as the bit string ``b_1 b_2 ... b_n``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from isingbraid.cyclotomic import UnitaryMatrix, mat_mul

# e^{i pi/4} / sqrt(2) = z / sqrt(2): numerator (0, 1, 0, 0), k = 1
_HALF_PHASE = np.array([0, 1, 0, 0], dtype=np.int64)


class BraidWordError(ValueError):
    pass


@dataclass(frozen=True)
class BraidSpec:
    n: int
    parity: int
    j: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"need n >= 1 qubits, got {self.n}")
        if self.parity not in (1, -1):
            raise ValueError(f"parity must be +1 or -1, got {self.parity}")
        if not 1 <= self.j <= 2 * self.n + 1:
            raise ValueError(f"generator index {self.j} outside 1..{2 * self.n + 1}")


def _cyc_array(d: int) -> np.ndarray:
    return np.zeros((d, d, 4), dtype=np.int64)


def _one_qubit_slot(n: int, slot: int, block: np.ndarray, k: int) -> UnitaryMatrix:
    """I^(slot-1) (x) block (x) I^(n-slot); ``block`` is a (2,2,4) numerator."""
    left = UnitaryMatrix.identity(2 ** (slot - 1))
    right = UnitaryMatrix.identity(2 ** (n - slot))
    mid = UnitaryMatrix(block, k)
    out = mid
    if slot > 1:
        out = left.kron(out)
    if slot < n:
        out = out.kron(right)
    return out


def _pair_block(n: int, slot: int, block: np.ndarray, k: int) -> UnitaryMatrix:
    """4x4 ``block`` acting on qubits slot, slot+1."""
    out = UnitaryMatrix(block, k)
    if slot > 1:
        out = UnitaryMatrix.identity(2 ** (slot - 1)).kron(out)
    if slot + 1 < n:
        out = out.kron(UnitaryMatrix.identity(2 ** (n - slot - 1)))
    return out


def _odd_generator(n: int, i: int) -> UnitaryMatrix:
    b = _cyc_array(2)
    b[0, 0, 0] = 1
    b[1, 1, 2] = 1  # i
    return _one_qubit_slot(n, i, b, 0)


def _even_generator(n: int, i: int) -> UnitaryMatrix:
    # z/sqrt(2) * (I_4 - i antidiag(1,1,1,1)); z * (-i) = -z^3
    b = _cyc_array(4)
    for r in range(4):
        b[r, r] = _HALF_PHASE
        b[r, 3 - r, 3] = -1
    return _pair_block(n, i, b, 1)


def _last_pair_generator(n: int) -> UnitaryMatrix:
    # z/sqrt(2) * (I_2 - i sigma_1)
    b = _cyc_array(2)
    for r in range(2):
        b[r, r] = _HALF_PHASE
        b[r, 1 - r, 3] = -1
    return _one_qubit_slot(n, n, b, 1)


def _parity_generator(n: int, parity: int) -> UnitaryMatrix:
    # z/sqrt(2) * (I -/+ i Z^{(x)n}), minus sign for the + representation
    d = 2**n
    num = _cyc_array(d)
    for b in range(d):
        zsign = -1 if bin(b).count("1") % 2 else 1
        # z * (1 - parity * i * zsign) = z - parity * zsign * z^3
        num[b, b, 1] = 1
        num[b, b, 3] = -parity * zsign
    return UnitaryMatrix(num, 1)


@lru_cache(maxsize=None)
def _generator(n: int, parity: int, j: int) -> UnitaryMatrix:
    if j == 2 * n + 1:
        return _parity_generator(n, parity)
    if j == 2 * n:
        return _last_pair_generator(n)
    if j % 2:
        return _odd_generator(n, (j + 1) // 2)
    return _even_generator(n, j // 2)


def braid_generator(spec: BraidSpec) -> UnitaryMatrix:
    return _generator(spec.n, spec.parity, spec.j)


def generators(n: int, parity: int = 1) -> list[UnitaryMatrix]:
    """B_1 .. B_{2n+1} in order."""
    return [braid_generator(BraidSpec(n, parity, j)) for j in range(1, 2 * n + 2)]


@lru_cache(maxsize=None)
def _inverse(n: int, parity: int, j: int) -> UnitaryMatrix:
    return _generator(n, parity, j).dagger()


BraidWord = list[tuple[int, int]]

_TOKEN = re.compile(r"^([sS])(\d+)$")


def parse_braid_word(text: str) -> BraidWord:
    """Parse tokens like ``s3`` (generator 3) and ``S3`` (its inverse)."""
    word: BraidWord = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise BraidWordError(f"malformed braid token {tok!r}")
        word.append((int(m.group(2)), 1 if m.group(1) == "s" else -1))
    return word


def format_braid_word(word: BraidWord) -> str:
    return " ".join(("s" if e > 0 else "S") + str(j) for j, e in word)


def braid_word_matrix(word: BraidWord, n: int, parity: int = 1) -> UnitaryMatrix:
    """Ordered product of the word's letters, leftmost letter leftmost."""
    out = UnitaryMatrix.identity(2**n)
    for j, e in word:
        if e not in (1, -1):
            raise BraidWordError(f"exponent must be +1 or -1, got {e}")
        try:
            BraidSpec(n, parity, j)
        except ValueError as exc:
            raise BraidWordError(str(exc)) from None
        out = mat_mul(out, _generator(n, parity, j) if e == 1 else _inverse(n, parity, j))
    return out


@dataclass(frozen=True)
class RelationResult:
    kind: str  # "braid" or "commute"
    j: int
    k: int
    holds: bool


def check_braid_relations(n: int, parity: int = 1) -> list[RelationResult]:
    gens = generators(n, parity)
    out: list[RelationResult] = []
    m = len(gens)
    for a in range(m):
        for b in range(a + 1, m):
            ga, gb = gens[a], gens[b]
            if b == a + 1:
                holds = ga @ gb @ ga == gb @ ga @ gb
                out.append(RelationResult("braid", a + 1, b + 1, holds))
            else:
                out.append(RelationResult("commute", a + 1, b + 1, ga @ gb == gb @ ga))
    return out


def _check_pair(n: int, i: int, j: int) -> None:
    if not 1 <= i < j <= 2 * n + 2:
        raise ValueError(f"monodromy indices need 1 <= i < j <= {2 * n + 2}, got ({i}, {j})")


def monodromy_generator(n: int, parity: int, i: int, j: int) -> UnitaryMatrix:
    """A_ij = U^-1 B_i^2 U with U = B_{i+1} B_{i+2} ... B_{j-1}."""
    _check_pair(n, i, j)
    u = braid_word_matrix([(k, 1) for k in range(i + 1, j)], n, parity)
    b = _generator(n, parity, i)
    return u.dagger() @ (b @ b) @ u


def monodromy_generators(n: int, parity: int = 1) -> dict[tuple[int, int], UnitaryMatrix]:
    m = 2 * n + 2
    return {(i, j): monodromy_generator(n, parity, i, j) for i in range(1, m) for j in range(i + 1, m + 1)}


def squared_product(n: int, parity: int, i: int, j: int) -> UnitaryMatrix:
    """B_i^2 B_{i+1}^2 ... B_{j-1}^2."""
    _check_pair(n, i, j)
    out = UnitaryMatrix.identity(2**n)
    for k in range(i, j):
        g = _generator(n, parity, k)
        out = out @ g @ g
    return out


def squared_generator(n: int, parity: int, j: int):
    """B_j^2 decoded as a Pauli operator; raises NotPauli if it is not one."""
    from isingbraid.pauli import NotPauli, matrix_to_pauli

    g = braid_generator(BraidSpec(n, parity, j))
    p = matrix_to_pauli(g @ g)
    if p is None:
        raise NotPauli(f"B_{j}^2 is not a Pauli operator (n={n}, parity={parity:+d})")
    return p
