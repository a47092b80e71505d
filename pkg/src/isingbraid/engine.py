"""Finite group closure by breadth-first search over a generating set.

Elements are handled in batches. Each element gets a 128-bit key made of two
independent 64-bit words ``(h1, h2)``: ``h1`` drives deduplication through a
sorted array, ``h2`` must agree whenever ``h1`` does, otherwise a
:class:`HashCollision` is raised. With ``store_elements=True`` every hit on an
already visited key is also verified element-for-element.

BFS levels are split into fixed-size chunks that may be processed by several
threads; results are merged in chunk order and new elements are sorted by key,
so orders, key sets and discovery ids do not depend on the thread count.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from isingbraid import kernels
from isingbraid.clifford import SymplecticMatrix
from isingbraid.cyclotomic import UnitaryMatrix, _weights, cyc

log = logging.getLogger(__name__)

MODES = ("unitary-projective", "unitary-exact", "symplectic")


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, partial: GroupClosure) -> None:
        super().__init__(message)
        self.partial = partial


class IncompleteClosure(RuntimeError):
    pass


class IncompatibleKind(TypeError):
    pass


class HashCollision(RuntimeError):
    pass


@dataclass(frozen=True)
class Budget:
    max_elements: int | None = None
    max_mem_mb: float | None = None

    @classmethod
    def from_env(cls, max_elements: int | None = None, max_mem_mb: float | None = None) -> Budget:
        if max_mem_mb is None and os.environ.get("ISING_BRAID_BUDGET_MB"):
            max_mem_mb = float(os.environ["ISING_BRAID_BUDGET_MB"])
        return cls(max_elements, max_mem_mb)

    def to_dict(self) -> dict:
        return {"max_elements": self.max_elements, "max_mem_mb": self.max_mem_mb}


# ---------------------------------------------------------------------------
# element kinds


class _UnitaryKind:
    chunk = 4096

    def __init__(self, dim: int, projective: bool) -> None:
        self.dim = dim
        self.projective = projective
        self.be = kernels.impl
        self.w = _weights(dim * dim * 4)

    def encode(self, items: Sequence[UnitaryMatrix]):
        for u in items:
            if not isinstance(u, UnitaryMatrix):
                raise IncompatibleKind(f"expected UnitaryMatrix, got {type(u).__name__}")
            if u.dim != self.dim:
                raise IncompatibleKind(f"dimension {u.dim} != {self.dim}")
            if u.num.dtype == object:
                raise OverflowError("coefficients exceed int64")
        num = np.stack([u.num for u in items]).astype(np.int64)
        k = np.array([u.k for u in items], dtype=np.int64)
        if self.projective:
            num = self.be.projective_canonical_batch(num)
        return num, k

    def identity(self):
        return self.encode([UnitaryMatrix.identity(self.dim)])

    def inverse(self, u: UnitaryMatrix) -> UnitaryMatrix:
        return u.dagger()

    def left_mul(self, g, batch):
        num, k = batch
        return self.be.left_mul_batch(g[0][0], int(g[1][0]), num, k, self.projective)

    def keys(self, batch):
        num, k = batch
        h = self.be.hash_batch(num.reshape(num.shape[0], -1), k, self.w)
        return h[:, 0].copy(), h[:, 1].copy()

    @staticmethod
    def size(batch) -> int:
        return batch[0].shape[0]

    @staticmethod
    def take(batch, idx):
        return batch[0][idx], batch[1][idx]

    @staticmethod
    def concat(batches):
        return (
            np.concatenate([b[0] for b in batches]),
            np.concatenate([b[1] for b in batches]),
        )

    @staticmethod
    def compact(batch):
        num, k = batch
        m = int(np.abs(num).max()) if num.size else 0
        for dt in (np.int8, np.int16, np.int32):
            if m <= np.iinfo(dt).max:
                return num.astype(dt), k.astype(np.int16 if k.size == 0 or k.max() < 2**15 else np.int64)
        return batch

    @staticmethod
    def expand(batch):
        return batch[0].astype(np.int64), batch[1].astype(np.int64)

    @staticmethod
    def equal(a, b) -> np.ndarray:
        F = a[0].shape[0]
        same = np.all(a[0].reshape(F, -1).astype(np.int64) == b[0].reshape(F, -1), axis=1)
        return same & (a[1].astype(np.int64) == b[1])

    @staticmethod
    def nbytes(batch) -> int:
        return batch[0].nbytes + batch[1].nbytes

    def decode(self, batch, i: int) -> UnitaryMatrix:
        return UnitaryMatrix(batch[0][i].astype(np.int64), int(batch[1][i]), reduced=True)

    def scalars(self, batch) -> np.ndarray:
        num = batch[0]
        d = self.dim
        off = num.copy()
        off[:, np.arange(d), np.arange(d)] = 0
        diag = num[:, np.arange(d), np.arange(d)]
        return ~np.any(off.reshape(len(num), -1) != 0, axis=1) & np.all(diag == diag[:, :1], axis=(1, 2))


class _SymplecticKind:
    chunk = 1 << 16

    def __init__(self, n: int) -> None:
        self.n = n
        self.exact_keys = 4 * n * n <= 64
        self.w = _weights(2 * n)

    def encode(self, items: Sequence[SymplecticMatrix]):
        for s in items:
            if not isinstance(s, SymplecticMatrix):
                raise IncompatibleKind(f"expected SymplecticMatrix, got {type(s).__name__}")
            if s.n != self.n:
                raise IncompatibleKind(f"n={s.n} != {self.n}")
        return (np.stack([s.to_rows() for s in items]),)

    def identity(self):
        return self.encode([SymplecticMatrix.identity(self.n)])

    def inverse(self, s: SymplecticMatrix) -> SymplecticMatrix:
        return s.inverse()

    def left_mul(self, g, batch):
        # (G X)[i] = xor of the rows X[l] with G[i, l] = 1
        x = batch[0]
        gb = SymplecticMatrix.from_rows(self.n, g[0][0]).bits
        out = np.zeros_like(x)
        for i in range(2 * self.n):
            for l in np.flatnonzero(gb[i]):
                out[:, i] ^= x[:, l]
        return (out,)

    def keys(self, batch):
        x = batch[0]
        if self.exact_keys:
            shifts = np.arange(2 * self.n, dtype=np.uint64) * np.uint64(2 * self.n)
            h1 = np.bitwise_or.reduce(x << shifts, axis=1)
            return h1, np.zeros_like(h1)
        h = kernels.impl.hash_batch(x.view(np.int64), np.zeros(len(x), dtype=np.int64), self.w)
        return h[:, 0].copy(), h[:, 1].copy()

    @staticmethod
    def size(batch) -> int:
        return batch[0].shape[0]

    @staticmethod
    def take(batch, idx):
        return (batch[0][idx],)

    @staticmethod
    def concat(batches):
        return (np.concatenate([b[0] for b in batches]),)

    @staticmethod
    def compact(batch):
        return batch

    @staticmethod
    def expand(batch):
        return batch

    @staticmethod
    def equal(a, b) -> np.ndarray:
        return np.all(a[0] == b[0], axis=1)

    @staticmethod
    def nbytes(batch) -> int:
        return batch[0].nbytes

    def decode(self, batch, i: int) -> SymplecticMatrix:
        return SymplecticMatrix.from_rows(self.n, batch[0][i])

    def scalars(self, batch) -> np.ndarray:
        return np.zeros(self.size(batch), dtype=bool)


def _kind_for(mode: str, generators: Sequence):
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    g0 = generators[0]
    if mode == "symplectic":
        if not isinstance(g0, SymplecticMatrix):
            raise IncompatibleKind("symplectic mode needs SymplecticMatrix generators")
        return _SymplecticKind(g0.n)
    if not isinstance(g0, UnitaryMatrix):
        raise IncompatibleKind("unitary modes need UnitaryMatrix generators")
    return _UnitaryKind(g0.dim, projective=mode == "unitary-projective")


# ---------------------------------------------------------------------------


@dataclass
class GroupClosure:
    kind: str
    n: int
    generator_count: int
    order: int | None
    complete: bool
    levels: list[int]
    budget: Budget
    h1: np.ndarray = field(repr=False)
    h2: np.ndarray = field(repr=False)
    ids: np.ndarray = field(repr=False)
    store: list | None = field(default=None, repr=False)
    parents: np.ndarray | None = field(default=None, repr=False)
    via: np.ndarray | None = field(default=None, repr=False)
    generator_labels: list = field(default_factory=list, repr=False)
    scalars: list = field(default_factory=list, repr=False)
    _kind: object = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.h1)

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "generator_count": self.generator_count,
            "order": self.order if self.complete else None,
            "levels": list(self.levels),
            "budget": self.budget.to_dict(),
            "complete": self.complete,
        }

    def _lookup(self, element) -> int | None:
        """Discovery id of ``element`` or None."""
        kind = self._kind
        batch = kind.encode([element])
        h1, h2 = kind.keys(batch)
        pos = int(np.searchsorted(self.h1, h1[0]))
        if pos >= len(self.h1) or self.h1[pos] != h1[0]:
            return None
        if self.h2[pos] != h2[0]:
            return None
        eid = int(self.ids[pos])
        if self.store is not None:
            stored = kind.expand(kind.take(self._stored(), np.array([eid])))
            if not kind.equal(stored, batch)[0]:
                raise HashCollision("key matched a different stored element")
        return eid

    def contains(self, element) -> bool:
        if not self.complete:
            raise IncompleteClosure("closure was truncated by its budget")
        return self._lookup(element) is not None

    def _stored(self):
        if self.store is None:
            raise ValueError("elements were not stored; rerun with store_elements=True")
        if len(self.store) > 1:
            self.store = [self._kind.concat(self.store)]
        return self.store[0]

    def element_batch(self):
        """All stored elements as one int64 batch, in discovery order."""
        return self._kind.expand(self._stored())

    def elements(self) -> Iterator:
        batch = self._stored()
        for i in range(self._kind.size(batch)):
            yield self._kind.decode(batch, i)

    def word_of(self, element) -> list:
        """Generator labels ``[g_1, ..., g_t]`` with element = g_1 g_2 ... g_t."""
        if self.parents is None:
            raise ValueError("words were not tracked; rerun with track_words=True")
        eid = self._lookup(element)
        if eid is None:
            raise KeyError("element not in closure")
        word = []
        while eid != 0:
            word.append(self.generator_labels[int(self.via[eid])])
            eid = int(self.parents[eid])
        return word


def contains(closure: GroupClosure, element) -> bool:
    return closure.contains(element)


def scalar_audit(closure: GroupClosure) -> list:
    """Scalar multiples of the identity met during enumeration, as ring elements."""
    if closure.kind == "symplectic":
        raise IncompatibleKind("scalar audit applies to unitary closures")
    return list(closure.scalars)


def _is_phase_power(num: np.ndarray, k: int) -> bool:
    """Whether a diagonal value (4 coefficients over sqrt(2)^k) is some z^t."""
    return k == 0 and int(np.abs(num).sum()) == 1


def enumerate_closure(
    generators: Sequence,
    mode: str = "unitary-projective",
    budget: Budget | None = None,
    *,
    threads: int = 1,
    store_elements: bool = False,
    track_words: bool = False,
    include_inverses: bool = True,
    labels: Sequence | None = None,
) -> GroupClosure:
    """Enumerate the group generated by ``generators``.

    Raises :class:`BudgetExceeded` (carrying the partial closure, whose
    ``order`` is None) when a budget limit is hit.
    """
    if not generators:
        raise ValueError("need at least one generator")
    budget = budget or Budget.from_env()
    kind = _kind_for(mode, generators)
    labels = list(labels) if labels is not None else [(i + 1, 1) for i in range(len(generators))]

    gens = list(generators)
    glabels = list(labels)
    if include_inverses:
        for g, lab in zip(generators, labels):
            gens.append(kind.inverse(g))
            glabels.append((lab[0], -lab[1]) if isinstance(lab, tuple) and len(lab) == 2 else ("inv", lab))
    enc = [kind.encode([g]) for g in gens]
    # drop duplicate generators (e.g. involutions equal to their inverse)
    seen: dict[tuple[int, int], int] = {}
    uniq, ulabels = [], []
    for e, lab in zip(enc, glabels):
        h1, h2 = kind.keys(e)
        key = (int(h1[0]), int(h2[0]))
        if key not in seen:
            seen[key] = len(uniq)
            uniq.append(e)
            ulabels.append(lab)

    ident = kind.identity()
    i1, i2 = kind.keys(ident)
    vis1, vis2, vis_ids = i1, i2, np.zeros(1, dtype=np.int64)
    frontier = kind.compact(ident)
    frontier_ids = np.zeros(1, dtype=np.int64)
    store = [kind.compact(ident)] if store_elements else None
    parents = [np.zeros(1, dtype=np.int64)] if track_words else None
    via = [np.full(1, -1, dtype=np.int64)] if track_words else None
    scalars: list = []
    levels = [1]
    total = 1
    n = generators[0].n if mode == "symplectic" else generators[0].n_qubits

    def _partial(msg: str) -> BudgetExceeded:
        part = GroupClosure(
            mode, n, len(generators), None, False, levels, budget, vis1, vis2, vis_ids,
            store, None, None, ulabels, scalars, kind,
        )
        return BudgetExceeded(msg, part)

    def _expand_chunk(args):
        chunk, cids = args
        chunk = kind.expand(chunk)
        out = []
        for gi, g in enumerate(uniq):
            y = kind.left_mul(g, chunk)
            h1, h2 = kind.keys(y)
            pos = np.searchsorted(vis1, h1)
            posc = np.minimum(pos, len(vis1) - 1)
            hit = vis1[posc] == h1
            if np.any(vis2[posc[hit]] != h2[hit]):
                raise HashCollision("h1 matched a visited key with a different h2")
            if store is not None and hit.any():
                stored = kind.expand(kind.take(stored_all, vis_ids[posc[hit]]))
                if not np.all(kind.equal(stored, kind.take(y, np.flatnonzero(hit)))):
                    raise HashCollision("key matched a different stored element")
            keep = np.flatnonzero(~hit)
            if keep.size:
                out.append(
                    (h1[keep], h2[keep], kind.compact(kind.take(y, keep)), cids[keep],
                     np.full(keep.size, gi, dtype=np.int64))
                )
        return out

    def _dedupe(parts):
        h1 = np.concatenate([p[0] for p in parts])
        h2 = np.concatenate([p[1] for p in parts])
        el = kind.concat([p[2] for p in parts])
        par = np.concatenate([p[3] for p in parts])
        gv = np.concatenate([p[4] for p in parts])
        del parts[:]
        u, first, inv = np.unique(h1, return_index=True, return_inverse=True)
        rep = first[inv.reshape(-1)]
        if np.any(h2 != h2[rep]):
            raise HashCollision("h1 collision inside one BFS level")
        dup = np.flatnonzero(rep != np.arange(len(h1)))
        for s in range(0, len(dup), 1 << 16):
            d = dup[s : s + (1 << 16)]
            if not np.all(kind.equal(kind.take(el, rep[d]), kind.expand(kind.take(el, d)))):
                raise HashCollision("equal keys for different elements inside one BFS level")
        return (u, h2[first], kind.compact(kind.take(el, first)), par[first], gv[first])

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        while kind.size(frontier):
            stored_all = kind.concat(store) if store is not None else None
            if store is not None:
                store = [stored_all]
            F = kind.size(frontier)
            tasks = [
                (kind.take(frontier, slice(s, s + kind.chunk)), frontier_ids[s : s + kind.chunk])
                for s in range(0, F, kind.chunk)
            ]
            acc: list = []
            acc_bytes = 0
            for parts in pool.map(_expand_chunk, tasks):
                acc.extend(parts)
                acc_bytes += sum(kind.nbytes(p[2]) + 40 * len(p[0]) for p in parts)
                if acc_bytes > 256 << 20 and len(acc) > 1:
                    acc = [_dedupe(acc)]
                    acc_bytes = kind.nbytes(acc[0][2]) + 40 * len(acc[0][0])
                if budget.max_mem_mb is not None:
                    used = (
                        24 * len(vis1) + acc_bytes + kind.nbytes(frontier)
                        + (kind.nbytes(stored_all) if stored_all is not None else 0)
                    )
                    if used > budget.max_mem_mb * 2**20:
                        raise _partial(f"memory budget of {budget.max_mem_mb} MB exceeded")
            if not acc:
                break
            new1, new2, new_el, new_par, new_via = _dedupe(acc)
            cnt = len(new1)
            new_ids = np.arange(total, total + cnt, dtype=np.int64)
            total += cnt

            sc = kind.scalars(new_el)
            for i in np.flatnonzero(sc):
                num, kk = kind.expand(kind.take(new_el, np.array([i])))
                value = cyc(*(int(c) for c in num[0, 0, 0]), int(kk[0]))
                if not _is_phase_power(num[0, 0, 0], int(kk[0])):
                    raise AssertionError(f"scalar {value} is not a power of e^(i pi/4)")
                if kind.projective:
                    raise AssertionError("projective closure met a non-identity scalar")
                scalars.append(value)

            merged1 = np.concatenate([vis1, new1])
            order = np.argsort(merged1, kind="stable")
            vis1 = merged1[order]
            vis2 = np.concatenate([vis2, new2])[order]
            vis_ids = np.concatenate([vis_ids, new_ids])[order]
            if store is not None:
                store.append(new_el)
            if track_words:
                parents.append(new_par)
                via.append(new_via)
            frontier, frontier_ids = new_el, new_ids
            levels.append(cnt)
            log.debug("level %d: %d new, %d total", len(levels) - 1, cnt, total)
            if budget.max_elements is not None and total > budget.max_elements:
                raise _partial(f"element budget of {budget.max_elements} exceeded")

    if mode != "symplectic":
        # identity itself is a scalar
        scalars.insert(0, cyc(1))
    return GroupClosure(
        kind=mode,
        n=n,
        generator_count=len(generators),
        order=total,
        complete=True,
        levels=levels,
        budget=budget,
        h1=vis1,
        h2=vis2,
        ids=vis_ids,
        store=store,
        parents=np.concatenate(parents) if track_words else None,
        via=np.concatenate(via) if track_words else None,
        generator_labels=ulabels,
        scalars=scalars,
        _kind=kind,
    )
