import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isingbraid.braid import generators
from isingbraid.clifford import hadamard
from isingbraid.cyclotomic import UnitaryMatrix, cyc
from isingbraid.pauli import (
    PauliOperator,
    matrix_to_pauli,
    parse_pauli,
    pauli_group_elements,
    pauli_mul,
    pauli_to_matrix,
    symplectic_product,
)

SIG = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1, -1]),
}


def paulis(n):
    bits = st.tuples(*[st.integers(0, 1)] * n)
    return st.builds(PauliOperator, st.just(n), st.integers(0, 3), bits, bits)


def test_product_examples():
    X = PauliOperator.from_labels("X")
    Z = PauliOperator.from_labels("Z")
    Y = PauliOperator.from_labels("Y")
    assert X * Z == PauliOperator(1, 3, (0,), (0,)) * Y
    assert X * X == PauliOperator.identity(1)
    assert PauliOperator.from_labels("ZI") * PauliOperator.from_labels("IX") == PauliOperator(2, 0, (0, 1), (1, 0))
    assert np.allclose(pauli_to_matrix(Y).to_complex(), SIG["Y"])


def test_square_of_pauli():
    for p in pauli_group_elements(2):
        sq = p * p
        assert sq.x == (0, 0) and sq.z == (0, 0)
        expected_m = (2 * p.m + 2 * sum(a & b for a, b in zip(p.x, p.z))) % 4
        assert sq.m == expected_m


def test_matrix_examples():
    assert pauli_to_matrix(PauliOperator(3, 0, "000", "100")) == pauli_to_matrix(PauliOperator.from_labels("ZII"))
    assert np.allclose(pauli_to_matrix(PauliOperator(2, 1, "00", "00")).to_complex(), 1j * np.eye(4))
    yy = np.kron(SIG["Y"], SIG["Y"])
    assert np.allclose(pauli_to_matrix(PauliOperator(2, 0, "11", "11")).to_complex(), -yy)


def test_decoding_examples():
    assert matrix_to_pauli(UnitaryMatrix.identity(4)) == PauliOperator.identity(2)
    had_like = generators(1)[1]
    assert matrix_to_pauli(had_like) is None
    assert matrix_to_pauli(hadamard()) is None
    b1 = generators(1)[0]
    assert matrix_to_pauli(b1 @ b1) == PauliOperator(1, 0, (0,), (1,))
    # monomial but with a non-Pauli phase
    assert matrix_to_pauli(UnitaryMatrix.diag([cyc(1), cyc(0, 1)])) is None
    # permutation that is not an xor mask
    o, z = cyc(1), cyc(0)
    cyc3 = UnitaryMatrix.from_entries([[z, o, z, z], [z, z, o, z], [o, z, z, z], [z, z, z, o]])
    assert matrix_to_pauli(cyc3) is None


@pytest.mark.parametrize("n, count", [(1, 16), (2, 64), (3, 256)])
def test_group_size_and_round_trip(n, count):
    elems = list(pauli_group_elements(n))
    assert len(elems) == count == 2 ** (2 * n + 2)
    assert len(set(elems)) == count
    assert len({(p.x, p.z) for p in elems}) == 4**n
    for p in elems:
        assert matrix_to_pauli(pauli_to_matrix(p)) == p


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matrices_match_float_tensor_products(n):
    for labels in itertools.product("IXYZ", repeat=n):
        m = np.eye(1)
        for c in labels:
            m = np.kron(m, SIG[c])
        assert np.allclose(pauli_to_matrix(PauliOperator.from_labels("".join(labels))).to_complex(), m)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(paulis(n), paulis(n))))
def test_multiplication_is_homomorphic(pq):
    p, q = pq
    assert pauli_to_matrix(pauli_mul(p, q)) == pauli_to_matrix(p) @ pauli_to_matrix(q)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(paulis(n), paulis(n))))
def test_commutation_form(pq):
    p, q = pq
    a, b = pauli_to_matrix(p), pauli_to_matrix(q)
    assert (a @ b == b @ a) == (symplectic_product(p, q) == 0)


@pytest.mark.parametrize("n", [1, 2])
def test_centre_is_phases_matrix_level(n):
    elems = list(pauli_group_elements(n))
    mats = {p: pauli_to_matrix(p) for p in elems}
    centre = [p for p in elems if all(mats[p] @ mats[q] == mats[q] @ mats[p] for q in elems)]
    assert sorted(p.m for p in centre) == [0, 1, 2, 3]
    assert all(not any(p.x) and not any(p.z) for p in centre)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_centre_is_phases_symplectic_level(n):
    gens = [PauliOperator.single(n, q, c) for q in range(1, n + 1) for c in "XZ"]
    central = [
        (x, z)
        for x in itertools.product((0, 1), repeat=n)
        for z in itertools.product((0, 1), repeat=n)
        if all(symplectic_product(PauliOperator(n, 0, x, z), g) == 0 for g in gens)
    ]
    assert central == [((0,) * n, (0,) * n)]


def test_text_form():
    p = PauliOperator(3, 1, "101", "010")
    assert str(p) == "i^1 X101 Z010"
    assert parse_pauli(str(p)) == p
    with pytest.raises(ValueError):
        parse_pauli("i^1 X10 Z010")
    with pytest.raises(ValueError):
        pauli_mul(PauliOperator.identity(1), PauliOperator.identity(2))
