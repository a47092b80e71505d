"""Acceptance criteria, one test each, each reporting a single pass/fail line.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines are repeated
in the terminal summary.
"""
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from isingbraid import braid
from isingbraid.analysis import (
    braid_closure,
    monodromy_check,
    ratio_series,
    second_differences,
)
from isingbraid.clifford import (
    braid_projective_order,
    clifford_projective_order,
    is_clifford,
    is_clifford_batch,
    swap_symplectic,
)
from isingbraid.cyclotomic import ONE, UnitaryMatrix, cyc
from isingbraid.engine import Budget, scalar_audit
from isingbraid.pauli import matrix_to_pauli, pauli_group_elements, pauli_to_matrix


def report(name, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_table_small_n():
    t = time.perf_counter()
    got = [braid_closure(n).order for n in (1, 2)]
    formula = [clifford_projective_order(n) for n in (1, 2)]
    dt = time.perf_counter() - t
    ok = got == [24, 11520] and formula == [24, 11520] and dt < 60
    report("1 table n=1,2", ok, f"closure {got}, clifford {formula}, {dt:.1f}s")


def test_criterion_2_table_n3():
    t = time.perf_counter()
    sp = braid_closure(3, "symplectic").order
    dt = time.perf_counter() - t
    ok = (
        sp == 40320
        and 4**3 * sp == 2580480 == braid_projective_order(3)
        and clifford_projective_order(3) == 92897280
        and dt < 60
    )
    report("2 table n=3", ok, f"symplectic {sp}, x64 = {4**3 * sp}, {dt:.1f}s")


@pytest.mark.slow
def test_criterion_2_long_unitary_n3():
    t = time.perf_counter()
    c = braid_closure(3, budget=Budget(max_mem_mb=4096))
    dt = time.perf_counter() - t
    report("2 (long) unitary closure n=3", c.order == 2580480, f"{c.order} in {dt:.0f}s")


def test_criterion_3_monodromy_is_pauli():
    details, ok = [], True
    for n in (1, 2, 3):
        for parity in (1, -1):
            rep = monodromy_check(n, parity)
            good = rep.equal and rep.monodromy_order == 2 ** (2 * n + 2)
            ok &= good
            details.append(f"n={n}{'+' if parity > 0 else '-'}:{rep.monodromy_order}")
    report("3 monodromy = Pauli", ok, " ".join(details))


def test_criterion_4_clifford_containment():
    ok = True
    sizes = []
    for n in (1, 2):
        c = braid_closure(n, store_elements=True)
        num, k = c.element_batch()
        ok &= bool(is_clifford_batch(num, k).all())
        sizes.append(len(k))
    gens_ok = all(is_clifford(g) for n in range(1, 5) for p in (1, -1) for g in braid.generators(n, p))
    report("4 Clifford containment", ok and gens_ok, f"images {sizes} all Clifford, generators n<=4 {gens_ok}")


def test_criterion_5_full_image_n1():
    c = braid_closure(1, "unitary-exact")
    sc = set(scalar_audit(c))
    i_pows = {cyc(1), cyc(0, 0, 1), cyc(-1), cyc(0, 0, -1)}
    report("5 full image n=1", c.order == 96 and sc == i_pows, f"order {c.order}, scalars {len(sc)}")


def test_criterion_6_swap_obstruction():
    n2 = braid_closure(2, "symplectic")
    n3 = braid_closure(3, "symplectic")
    member2 = n2.contains(swap_symplectic(2, 1, 2))
    member3 = {(i, j): n3.contains(swap_symplectic(3, i, j)) for i, j in [(1, 2), (1, 3), (2, 3)]}
    ok = member2 and not any(member3.values())
    detail = f"n=2 member {member2}; n=3 members " + ", ".join(f"{p}={v}" for p, v in member3.items())
    report("6 SWAP obstruction", ok, detail)


def test_criterion_7_ratio_series():
    series = ratio_series(12)
    vals = dict(series)
    second = dict(second_differences(series))
    ok = (
        vals[1] == 0
        and vals[2] == 0
        and math.isclose(vals[3], 1.5563, abs_tol=1e-4)
        and all(second[n] > 0 for n in range(3, 12))
    )
    # n = 12 needs f(13) for a centred difference
    ext = dict(second_differences(ratio_series(13)))
    ok &= ext[12] > 0
    report("7 ratio series", ok, f"f(3) = {vals[3]:.6f}, min second difference {min(ext.values()):.4f}")


def _ring_samples(rng, count):
    a = rng.integers(-1000, 1000, size=(count, 4))
    k = rng.integers(0, 8, size=count)
    return [cyc(*map(int, c), int(kk)) for c, kk in zip(a, k)]


def test_criterion_8_property_suites():
    checks = {}
    rel = all(r.holds for n in range(1, 5) for p in (1, -1) for r in braid.check_braid_relations(n, p))
    checks["relations"] = rel
    four, decode = True, True
    for n in range(1, 5):
        eye = UnitaryMatrix.identity(2**n)
        for p in (1, -1):
            for g in braid.generators(n, p):
                g2 = g @ g
                four &= g2 @ g2 == eye
                decode &= matrix_to_pauli(g2) is not None
    checks["B^4=I"] = four
    checks["B^2 Pauli"] = decode
    checks["Pauli round trip"] = all(
        matrix_to_pauli(pauli_to_matrix(q)) == q for n in (1, 2, 3) for q in pauli_group_elements(n)
    )
    rng = np.random.default_rng(2024)
    xs, ys, zs = (_ring_samples(rng, 10_000) for _ in range(3))
    ring = True
    hom = True
    for x, y, z in zip(xs, ys, zs):
        ring &= (x + y) * z == x * z + y * z and (x * y) * z == x * (y * z) and x * y == y * x
        ring &= x * ONE == x and x + (-x) == cyc(0)
        hom &= abs(complex(x * y) - complex(x) * complex(y)) <= 1e-9 * (1 + abs(complex(x)) * abs(complex(y)))
        hom &= abs(complex(x + y) - complex(x) - complex(y)) <= 1e-9 * (1 + abs(complex(x)) + abs(complex(y)))
    checks["ring axioms"] = ring
    checks["float homomorphism"] = hom
    a = braid_closure(2, threads=1)
    b = braid_closure(2, threads=4)
    checks["threads"] = a.order == b.order and np.array_equal(a.h1, b.h1)
    ok = all(checks.values())
    report("8 property suites", ok, ", ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in checks.items()))
