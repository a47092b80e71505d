import itertools
import math

import numpy as np
import pytest

from isingbraid import braid
from isingbraid.analysis import braid_symplectic_generators, clifford_symplectic_closure
from isingbraid.clifford import (
    NotClifford,
    NotUnitary,
    SymplecticMatrix,
    braid_image_order,
    braid_projective_order,
    clifford_generators,
    clifford_projective_order,
    clifford_to_symplectic,
    cnot,
    hadamard,
    is_clifford,
    is_clifford_batch,
    order_ratio,
    phase_gate,
    sp_check,
    swap,
    swap_symplectic,
    symplectic_group_order,
    t_gate,
)
from isingbraid.cyclotomic import UnitaryMatrix, cyc
from isingbraid.pauli import PauliOperator, pauli_group_elements, pauli_to_matrix


def test_t_gate_is_not_clifford():
    assert not is_clifford(t_gate())
    with pytest.raises(NotClifford):
        clifford_to_symplectic(t_gate())


def test_non_unitary_rejected():
    with pytest.raises(NotUnitary):
        is_clifford(UnitaryMatrix.diag([cyc(1), cyc(2)]))


def test_first_generator_image():
    img = clifford_to_symplectic(braid.generators(1)[0])
    assert img.S.to_bitstrings() == ["11", "01"]
    # S^dagger X S = -Y = -i X Z, and Z is fixed
    assert img.image(0) == PauliOperator(1, 3, (1,), (1,))
    assert img.image(1) == PauliOperator.from_labels("Z")


def test_standard_gate_images():
    assert clifford_to_symplectic(hadamard()).S.to_bitstrings() == ["01", "10"]
    assert clifford_to_symplectic(phase_gate()).S.to_bitstrings() == ["11", "01"]
    s = clifford_to_symplectic(cnot(2, 1, 2)).S
    # X1 -> X1 X2, X2 -> X2, Z1 -> Z1, Z2 -> Z1 Z2
    assert s.to_bitstrings() == ["1100", "0100", "0010", "0011"]
    for i, j in [(1, 2), (1, 3), (2, 3)]:
        assert clifford_to_symplectic(swap(3, i, j)).S == swap_symplectic(3, i, j)


@pytest.mark.parametrize("n", [1, 2])
def test_paulis_map_to_identity(n):
    for p in pauli_group_elements(n):
        if p.m == 0:
            assert clifford_to_symplectic(pauli_to_matrix(p)).S == SymplecticMatrix.identity(n)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_symplectic_map_is_homomorphism(n):
    rng = np.random.default_rng(n)
    gens = braid.generators(n) + clifford_generators(n)
    for _ in range(15):
        a, b = (gens[i] for i in rng.integers(0, len(gens), 2))
        c = gens[rng.integers(0, len(gens))]
        u, v = a @ c, b
        su, sv = clifford_to_symplectic(u).S, clifford_to_symplectic(v).S
        assert clifford_to_symplectic(u @ v).S == su @ sv
        assert sp_check(su)
        assert su @ su.inverse() == SymplecticMatrix.identity(n)


def test_sp_check_rejects_non_symplectic():
    s = SymplecticMatrix.from_bitstrings(["01", "10"])
    assert sp_check(s)
    bad = SymplecticMatrix.from_bitstrings(["1000", "0010", "0100", "0001"])
    assert not sp_check(bad)


def test_rows_round_trip():
    s = clifford_to_symplectic(cnot(3, 1, 3) @ hadamard(3, 2)).S
    assert SymplecticMatrix.from_rows(3, s.to_rows()) == s
    assert SymplecticMatrix.from_bitstrings(s.to_bitstrings()) == s


@pytest.mark.parametrize("n, expected", [(1, 6), (2, 720)])
def test_symplectic_order_brute_force(n, expected):
    m = 2 * n
    count = 0
    for flat in itertools.product((0, 1), repeat=m * m):
        if sp_check(SymplecticMatrix(n, np.array(flat, dtype=np.uint8).reshape(m, m))):
            count += 1
    assert count == expected == symplectic_group_order(n)


def test_sp6_by_closure():
    assert clifford_symplectic_closure(3).order == symplectic_group_order(3) == 1451520


@pytest.mark.parametrize("n", range(1, 9))
def test_order_formulas(n):
    assert clifford_projective_order(n) == 4**n * symplectic_group_order(n)
    assert braid_projective_order(n) * 4 == braid_image_order(n)
    if n >= 2:
        assert braid_projective_order(n) == 4**n * math.factorial(2 * n + 2)
    assert order_ratio(n) >= 1


def test_table_values():
    assert [braid_projective_order(n) for n in (1, 2, 3)] == [24, 11520, 2580480]
    assert [clifford_projective_order(n) for n in (1, 2, 3)] == [24, 11520, 92897280]
    assert braid_image_order(1) == 96
    assert order_ratio(3) == 36


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("parity", [1, -1])
def test_braid_generators_are_clifford(n, parity):
    gens = braid.generators(n, parity)
    assert all(is_clifford(g) for g in gens)
    num = np.stack([g.num for g in gens])
    k = np.array([g.k for g in gens])
    assert is_clifford_batch(num, k).all()
    assert all(sp_check(s) for s in braid_symplectic_generators(n, parity))


def test_batch_clifford_flags_t_gate():
    gens = [t_gate(2, 1), hadamard(2, 2), cnot(2, 2, 1), t_gate(2, 2) @ hadamard(2, 2)]
    k = np.array([g.k for g in gens])
    assert is_clifford_batch(np.stack([g.num for g in gens]), k).tolist() == [False, True, True, False]
