"""Reproducible reports built on the library: order tables, ratio series,
monodromy identification and the SWAP realizability test."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from isingbraid import braid, clifford
from isingbraid.braid import BraidWord, braid_word_matrix, monodromy_generators, squared_product
from isingbraid.clifford import (
    SymplecticMatrix,
    braid_projective_order,
    clifford_generators,
    clifford_projective_order,
    clifford_to_symplectic,
    is_clifford,
    swap,
    swap_symplectic,
)
from isingbraid.cyclotomic import UnitaryMatrix
from isingbraid.engine import Budget, GroupClosure, enumerate_closure
from isingbraid.pauli import matrix_to_pauli, pauli_group_elements, pauli_to_matrix

# Sp(2n, 2) enumeration of the full Clifford group is feasible up to here
CLIFFORD_ENUM_MAX = 3


def braid_symplectic_generators(n: int, parity: int = 1) -> list[SymplecticMatrix]:
    return [clifford_to_symplectic(g).S for g in braid.generators(n, parity)]


def braid_closure(
    n: int,
    mode: str = "unitary-projective",
    parity: int = 1,
    budget: Budget | None = None,
    threads: int = 1,
    store_elements: bool = False,
) -> GroupClosure:
    gens = braid_symplectic_generators(n, parity) if mode == "symplectic" else braid.generators(n, parity)
    return enumerate_closure(gens, mode, budget, threads=threads, store_elements=store_elements)


def clifford_symplectic_closure(n: int, budget: Budget | None = None, threads: int = 1) -> GroupClosure:
    gens = [clifford_to_symplectic(g).S for g in clifford_generators(n)]
    return enumerate_closure(gens, "symplectic", budget, threads=threads)


@dataclass
class ReportRow:
    n: int
    braid_projective_order: int
    clifford_projective_order: int
    braid_method: str = "formula"
    clifford_method: str = "formula"
    braid_enumerated: int | None = None
    clifford_enumerated: int | None = None
    agreement: bool = True
    complete: bool = True
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def table1_row(
    n: int,
    enumerate_braid: bool,
    enumerate_clifford: bool,
    unitary_up_to: int = 2,
    budget: Budget | None = None,
    threads: int = 1,
) -> ReportRow:
    from isingbraid.engine import BudgetExceeded

    row = ReportRow(n, braid_projective_order(n), clifford_projective_order(n))
    if enumerate_braid:
        try:
            if n <= unitary_up_to:
                row.braid_enumerated = braid_closure(n, "unitary-projective", budget=budget, threads=threads).order
                row.braid_method = "unitary-enumeration"
            else:
                sp = braid_closure(n, "symplectic", budget=budget, threads=threads).order
                row.braid_enumerated = 4**n * sp
                row.braid_method = "symplectic-enumeration"
                row.notes.append(f"symplectic closure {sp} x 4^{n} (projective Pauli kernel)")
        except BudgetExceeded as exc:
            row.complete = False
            row.notes.append(f"braid enumeration incomplete: {exc} (partial {exc.partial.size})")
    if enumerate_clifford:
        try:
            sp = clifford_symplectic_closure(n, budget=budget, threads=threads).order
            row.clifford_enumerated = 4**n * sp
            row.clifford_method = "symplectic-enumeration"
        except BudgetExceeded as exc:
            row.complete = False
            row.notes.append(f"clifford enumeration incomplete: {exc} (partial {exc.partial.size})")
    row.agreement = (row.braid_enumerated in (None, row.braid_projective_order)) and (
        row.clifford_enumerated in (None, row.clifford_projective_order)
    )
    return row


def table1(
    n_max: int,
    enumerate_up_to: int = 0,
    unitary_up_to: int = 2,
    budget: Budget | None = None,
    threads: int = 1,
) -> list[ReportRow]:
    if n_max < 1 or enumerate_up_to > n_max or enumerate_up_to < 0:
        raise ValueError("need 0 <= enumerate_up_to <= n_max and n_max >= 1")
    return [
        table1_row(
            n,
            enumerate_braid=n <= enumerate_up_to,
            enumerate_clifford=n <= min(enumerate_up_to, CLIFFORD_ENUM_MAX),
            unitary_up_to=unitary_up_to,
            budget=budget,
            threads=threads,
        )
        for n in range(1, n_max + 1)
    ]


def log10_ratio(n: int) -> float:
    # log of big integers directly; no float overflow
    return math.log10(clifford_projective_order(n)) - math.log10(braid_projective_order(n))


def ratio_series(n_max: int) -> list[tuple[int, float]]:
    if n_max < 1:
        raise ValueError("n_max >= 1")
    out = []
    for n in range(1, n_max + 1):
        r = clifford.order_ratio(n)
        out.append((n, 0.0 if r == 1 else log10_ratio(n)))
    return out


def second_differences(series: list[tuple[int, float]]) -> list[tuple[int, float]]:
    """Centred: f(n+1) - 2 f(n) + f(n-1), reported at n."""
    vals = dict(series)
    return [(n, vals[n + 1] - 2 * vals[n] + vals[n - 1]) for n in sorted(vals) if n - 1 in vals and n + 1 in vals]


@dataclass
class MonodromyReport:
    n: int
    parity: int
    monodromy_order: int
    pauli_order: int
    equal: bool
    generators: dict[str, str]
    product_phases: dict[str, int]

    def to_dict(self) -> dict:
        return asdict(self)


def monodromy_check(n: int, parity: int = 1, budget: Budget | None = None, threads: int = 1) -> MonodromyReport:
    """Close the monodromy generators exactly and compare with the Pauli group."""
    gens = monodromy_generators(n, parity)
    decoded, phases = {}, {}
    for (i, j), a in gens.items():
        p = matrix_to_pauli(a)
        decoded[f"A_{i},{j}"] = str(p) if p is not None else "not-pauli"
        # A_ij against B_i^2 ... B_{j-1}^2, up to a power of i
        prod = squared_product(n, parity, i, j)
        q = matrix_to_pauli(prod)
        phase = -1
        if p is not None and q is not None and p.x == q.x and p.z == q.z:
            phase = (p.m - q.m) % 4
        phases[f"A_{i},{j}"] = phase
    closure = enumerate_closure(list(gens.values()), "unitary-exact", budget, threads=threads, store_elements=True)
    paulis = [pauli_to_matrix(p) for p in pauli_group_elements(n)]
    equal = closure.order == len(paulis) and all(closure.contains(m) for m in paulis)
    return MonodromyReport(n, parity, closure.order, len(paulis), equal, decoded, phases)


@dataclass
class SwapReport:
    n: int
    i: int
    j: int
    route: str
    realizable: bool
    closure_order: int
    expected: bool
    caveat: str

    @property
    def verdict(self) -> str:
        return "realizable" if self.realizable else "not-realizable"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["verdict"] = self.verdict
        d["matches_claim"] = self.realizable == self.expected
        return d


SWAP_CAVEAT = (
    "verdict is modulo global phase; a SWAP dressed by a Pauli or a phase is the same "
    "symplectic element, and since the braid image contains the whole Pauli group the "
    "projective and mod-Pauli verdicts coincide"
)


def swap_test(
    n: int,
    i: int,
    j: int,
    parity: int = 1,
    unitary: bool = False,
    budget: Budget | None = None,
    threads: int = 1,
) -> SwapReport:
    """Is SWAP(i, j) in the image of the braid group?

    Default route: membership of its symplectic image in the symplectic
    closure of the braid generators. ``unitary=True`` instead tests the SWAP
    unitary itself against the projective unitary closure.
    """
    if not 1 <= i < j <= n:
        raise ValueError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")
    if unitary:
        c = braid_closure(n, "unitary-projective", parity, budget, threads)
        hit = c.contains(swap(n, i, j))
        route = "unitary-projective"
    else:
        c = braid_closure(n, "symplectic", parity, budget, threads)
        hit = c.contains(swap_symplectic(n, i, j))
        route = "symplectic"
    return SwapReport(n, i, j, route, hit, c.order, expected=n <= 2, caveat=SWAP_CAVEAT)


def clifford_check(n: int, parity: int = 1, word: BraidWord | None = None) -> list[dict]:
    """Clifford test and symplectic image of each generator, or of one braid word."""
    items: list[tuple[str, UnitaryMatrix]]
    if word is not None:
        items = [(braid.format_braid_word(word) or "identity", braid_word_matrix(word, n, parity))]
    else:
        items = [(f"B_{j}", g) for j, g in enumerate(braid.generators(n, parity), start=1)]
    out = []
    for name, u in items:
        ok = is_clifford(u)
        rec: dict = {"name": name, "clifford": ok}
        if ok:
            img = clifford_to_symplectic(u)
            rec["symplectic"] = img.S.to_bitstrings()
            rec["phases"] = list(img.r)
            rec["sp_check"] = clifford.sp_check(img.S)
        out.append(rec)
    return out
