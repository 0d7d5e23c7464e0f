"""Generated sublattices of relation lattices.

:func:`close` computes the least set of relations that contains the
generators and is closed under binary meet, binary join of the family and,
optionally, transpose.  It never adds the bottom or the top by itself; both
must arise from non-empty meets and joins.

The worklist is semi-naive: an element is combined with every element already
processed (itself included) exactly once.  Pending elements are processed
smallest first (by pair count), which reaches atoms early when the search only
needs to find them.  The admitted set does not depend on the processing order;
the recorded witnesses do.
"""

from __future__ import annotations

import enum
import heapq
import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._kernels import make_kernel
from .relation import (
    Family,
    GroundMismatchError,
    LatticeError,
    NotAMemberError,
    Relation,
    atoms,
    enumerate_family,
    is_member,
    join,
    meet,
    transpose,
)

DEFAULT_MAX_ELEMENTS = 2_000_000
DEFAULT_MAX_OPS = 10**10
_CHUNK_PAIRS = 1 << 17


class Status(str, enum.Enum):
    COMPLETE = "COMPLETE"
    BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"
    EARLY_EXIT_ATOMS_FOUND = "EARLY_EXIT_ATOMS_FOUND"


@dataclass(frozen=True)
class Budget:
    max_elements: int = DEFAULT_MAX_ELEMENTS
    # counted in lattice operations (one meet, join or transpose each)
    max_ops: int = DEFAULT_MAX_OPS


@dataclass
class ClosureResult:
    family: Family
    with_involution: bool
    elements: list[Relation]
    # id -> (op, parent, parent or None); generators have no entry
    witnesses: dict[int, tuple[str, int, int | None]]
    n_generators: int
    stats: dict
    status: Status
    budget: Budget = field(default_factory=Budget)

    def __post_init__(self):
        self._index = {r: i for i, r in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __contains__(self, r: Relation) -> bool:
        return r in self._index

    def index(self, r: Relation) -> int | None:
        return self._index.get(r)

    @property
    def element_set(self) -> frozenset[Relation]:
        return frozenset(self.elements)

    def replay(self, ids: Iterable[int] | None = None) -> bool:
        """Recompute every witness with the scalar relation operations."""
        ids = sorted(self.witnesses) if ids is None else sorted(ids)
        for i in ids:
            if i < self.n_generators:
                continue
            if _apply(self.family, self.witnesses[i], self.elements) != self.elements[i]:
                return False
        return True

    def derivation(self, targets: Iterable[int]) -> list[tuple[int, str, int, int | None]]:
        """Witness steps needed to rebuild ``targets`` from the generators, in id order."""
        need: set[int] = set()
        stack = [t for t in targets if t >= self.n_generators]
        while stack:
            i = stack.pop()
            if i in need:
                continue
            need.add(i)
            op, p, q = self.witnesses[i]
            for parent in (p, q):
                if parent is not None and parent >= self.n_generators and parent not in need:
                    stack.append(parent)
        return [(i, *self.witnesses[i]) for i in sorted(need)]


def _apply(family: Family, step: tuple[str, int, int | None], elements) -> Relation:
    op, p, q = step
    if op == "meet":
        return meet(elements[p], elements[q])
    if op == "join":
        return join(family, [elements[p], elements[q]])
    if op == "inv":
        return transpose(elements[p])
    raise LatticeError(f"unknown witness op {op!r}")


def replay_steps(
    family: Family,
    generators: Sequence[Relation],
    steps: Iterable[tuple[int, str, int, int | None]],
) -> dict[int, Relation]:
    """Rebuild the elements named by ``steps``; generators get ids ``0..k-1``."""
    family = Family.parse(family)
    known: dict[int, Relation] = dict(enumerate(generators))
    for i, op, p, q in steps:
        if p not in known or (q is not None and q not in known):
            raise LatticeError(f"step {i} refers to an unknown parent")
        known[i] = _apply(family, (op, p, q), known)
    return known


def _validate(generators: Sequence[Relation], family: Family) -> None:
    if not generators:
        raise LatticeError("at least one generator is required")
    n = generators[0].n
    for g in generators:
        if g.n != n:
            raise GroundMismatchError("generators live on different ground sets")
        if not is_member(family, g):
            raise NotAMemberError(f"generator {g!r} is not a member of {family.value}")


def close(
    generators: Sequence[Relation],
    family: Family | str,
    with_involution: bool = False,
    budget: Budget | None = None,
    early_exit: Iterable[Relation] | None = None,
    order_seed: int | None = None,
    priority: str = "size",
) -> ClosureResult:
    """Sublattice generated by ``generators`` in ``family``.

    ``early_exit`` is a set of target relations; the computation stops as soon
    as all of them have been admitted.  ``order_seed`` randomises the
    processing order (used to test schedule independence).
    """
    family = Family.parse(family)
    budget = budget or Budget()
    generators = list(generators)
    _validate(generators, family)
    t0 = time.perf_counter()
    ground = generators[0].ground
    kernel = make_kernel(ground.size)
    rng = random.Random(order_seed) if order_seed is not None else None

    known: dict = {}
    uniq_gens = []
    for g in generators:
        k = kernel.key_list(kernel.encode([g]))[0]
        if k not in known:
            known[k] = len(uniq_gens)
            uniq_gens.append(g)
    store = kernel.encode(uniq_gens)
    n_store = len(uniq_gens)
    witnesses: dict[int, tuple[str, int, int | None]] = {}

    targets = set()
    if early_exit is not None:
        targets = set(kernel.key_list(kernel.encode(list(early_exit)))) - set(known)

    def prio(i, pc):
        if priority == "fifo":
            return (i,)
        tie = rng.random() if rng else i
        return (pc, tie)

    heap = []
    for i, pc in enumerate(kernel.popcount(store).tolist()):
        heapq.heappush(heap, (*prio(i, pc), i))
    processed_ids: list[int] = []
    processed = kernel.empty()
    ops = 0
    passes = 0
    status = Status.COMPLETE

    def admit(arr, origins):
        nonlocal store, n_store
        keys = kernel.keys(arr)
        _, first = np.unique(keys, return_index=True)
        first.sort()
        klist = kernel.key_list(arr[first])
        fresh = []
        for pos, k in zip(first.tolist(), klist):
            if k in known:
                continue
            if n_store >= budget.max_elements:
                return fresh, True
            known[k] = n_store
            witnesses[n_store] = origins(pos)
            targets.discard(k)
            fresh.append(pos)
            n_store += 1
        return fresh, False

    if early_exit is not None and not targets:
        status = Status.EARLY_EXIT_ATOMS_FOUND
        heap = []

    while heap:
        passes += 1
        bsize = max(8, len(processed_ids) // 8)
        if rng is not None:
            bsize = rng.randint(1, bsize)
        batch = [heapq.heappop(heap)[-1] for _ in range(min(bsize, len(heap)))]
        X = kernel.take(store, np.array(batch))
        processed_ids.extend(batch)
        processed = kernel.concat([processed, X])
        Q_ids = np.array(processed_ids)
        new_parts = []
        stop = False

        if with_involution:
            T = kernel.transpose(X)
            ops += len(batch)
            fresh, stop = admit(T, lambda pos: ("inv", batch[pos], None))
            if fresh:
                new_parts.append(kernel.take(T, np.array(fresh)))

        b = len(batch)
        step = max(1, _CHUNK_PAIRS // b)
        for start in range(0, len(Q_ids), step):
            if stop:
                break
            Qc = processed[start : start + step]
            qc = len(Qc)
            cand = kernel.concat([kernel.meet_outer(X, Qc), kernel.join_outer(X, Qc)])
            ops += 2 * b * qc

            def origin(pos, start=start, qc=qc):
                op = "meet" if pos < b * qc else "join"
                local = pos % (b * qc)
                return (op, batch[local // qc], int(Q_ids[start + local % qc]))

            fresh, stop = admit(cand, origin)
            if fresh:
                new_parts.append(kernel.take(cand, np.array(fresh)))
            if early_exit is not None and not targets:
                break
            if ops > budget.max_ops:
                stop = True

        if new_parts:
            new = kernel.concat(new_parts)
            store = kernel.concat([store, new])
            base = len(store) - len(new)
            for off, pc in enumerate(kernel.popcount(new).tolist()):
                heapq.heappush(heap, (*prio(base + off, pc), base + off))
        if early_exit is not None and not targets:
            status = Status.EARLY_EXIT_ATOMS_FOUND
            break
        if stop:
            status = Status.BUDGET_EXHAUSTED
            break

    elements = [Relation(ground, b) for b in kernel.decode_bits(store)]
    stats = {
        "elements": len(elements),
        "passes": passes,
        "ops": ops,
        "elapsed_ms": round(1000 * (time.perf_counter() - t0), 3),
        "kernel": type(kernel).__name__,
        "max_elements": budget.max_elements,
        "max_ops": budget.max_ops,
    }
    return ClosureResult(
        family=family,
        with_involution=with_involution,
        elements=elements,
        witnesses=witnesses,
        n_generators=len(uniq_gens),
        stats=stats,
        status=status,
        budget=budget,
    )


class Answer(str, enum.Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"


@dataclass
class Verdict:
    answer: Answer
    closure: ClosureResult
    method: str  # "atoms" or "enumeration"

    def __bool__(self):
        return self.answer is Answer.YES

    @property
    def target_ids(self) -> list[int]:
        """Ids of the elements a YES certificate has to rebuild."""
        c = self.closure
        if self.method == "enumeration":
            return list(range(len(c)))
        fam_atoms = atoms(c.family, c.elements[0].ground)
        return [c.index(a) for a in fam_atoms]


def generates_whole(
    generators: Sequence[Relation],
    family: Family | str,
    with_involution: bool = False,
    budget: Budget | None = None,
    order_seed: int | None = None,
) -> Verdict:
    """Decide whether ``generators`` generate the whole lattice of ``family``.

    On three or more points the lattices are atomistic and their bottom is a
    meet of two atoms, so containing every atom is enough.  Smaller ground
    sets fall back to comparing with the enumerated family.
    """
    family = Family.parse(family)
    if family is Family.REL:
        raise LatticeError("generation is decided for EQU, QUO and TRAN only")
    generators = list(generators)
    _validate(generators, family)
    ground = generators[0].ground
    if ground.size >= 3:
        targets = atoms(family, ground)
        res = close(generators, family, with_involution, budget, early_exit=targets, order_seed=order_seed)
        if res.status is Status.EARLY_EXIT_ATOMS_FOUND:
            return Verdict(Answer.YES, res, "atoms")
        if res.status is Status.COMPLETE:
            ok = all(a in res for a in targets)
            return Verdict(Answer.YES if ok else Answer.NO, res, "atoms")
        return Verdict(Answer.UNKNOWN, res, "atoms")
    res = close(generators, family, with_involution, budget, order_seed=order_seed)
    if res.status is not Status.COMPLETE:
        return Verdict(Answer.UNKNOWN, res, "enumeration")
    whole = set(enumerate_family(family, ground))
    return Verdict(Answer.YES if res.element_set == whole else Answer.NO, res, "enumeration")


def expand_involution_genset(generators: Sequence[Relation]) -> list[Relation]:
    out: list[Relation] = []
    for g in list(generators) + [transpose(g) for g in generators]:
        if g not in out:
            out.append(g)
    return out


class FamilyTable:
    """Meet/join/transpose tables over an enumerated family (n <= 8).

    Used by the searches, which run thousands of closures inside one small
    lattice; each closure then works on element indices only.
    """

    def __init__(self, family: Family | str, ground, elements: Sequence[Relation] | None = None):
        self.family = Family.parse(family)
        if elements is None:
            elements = list(enumerate_family(self.family, ground))
        self.elements = list(elements)
        self.ground = self.elements[0].ground
        n = self.ground.size
        kernel = make_kernel(n)
        if n > 8:
            raise LatticeError("family tables need n <= 8")
        enc = kernel.encode(self.elements)
        order = np.argsort(enc)
        sorted_enc = enc[order]
        N = len(self.elements)
        dtype = np.int32
        self.meet = np.empty((N, N), dtype=dtype)
        self.join = np.empty((N, N), dtype=dtype)
        step = max(1, (1 << 20) // N)

        def lookup(vals):
            pos = np.searchsorted(sorted_enc, vals)
            pos = np.minimum(pos, N - 1)
            if not np.array_equal(sorted_enc[pos], vals):
                raise LatticeError("element list is not closed under the lattice operations")
            return order[pos]

        for s in range(0, N, step):
            X = enc[s : s + step]
            self.meet[s : s + step] = lookup(kernel.meet_outer(X, enc)).reshape(len(X), N)
            self.join[s : s + step] = lookup(kernel.join_outer(X, enc)).reshape(len(X), N)
        self.inv = lookup(kernel.transpose(enc)).astype(dtype)
        self.index = {r: i for i, r in enumerate(self.elements)}
        self.atom_ids = np.array([self.index[a] for a in atoms(self.family, self.ground)]) if n >= 3 else None

    def __len__(self):
        return len(self.elements)

    def close(self, gen_ids: Sequence[int], with_involution: bool = False, stop_on_atoms: bool = False) -> np.ndarray:
        """Boolean membership mask of the generated sublattice."""
        N = len(self.elements)
        present = np.zeros(N, dtype=bool)
        order = np.empty(N, dtype=np.int64)
        count = 0
        for g in gen_ids:
            if not present[g]:
                present[g] = True
                order[count] = g
                count += 1
        target = None
        if stop_on_atoms and self.atom_ids is not None:
            target = np.zeros(N, dtype=bool)
            target[self.atom_ids] = True
            missing = int(target.sum() - target[present].sum())
            if missing == 0:
                return present
        i = 0
        while i < count:
            x = order[i]
            i += 1
            proc = order[:i]
            parts = [self.meet[x, proc], self.join[x, proc]]
            if with_involution:
                parts.append(self.inv[x : x + 1])
            cand = np.concatenate(parts)
            cand = np.unique(cand[~present[cand]])
            if len(cand):
                present[cand] = True
                order[count : count + len(cand)] = cand
                count += len(cand)
                if target is not None:
                    missing -= int(target[cand].sum())
                    if missing == 0:
                        return present
        return present

    def generates(self, gen_ids: Sequence[int], with_involution: bool = False) -> bool:
        if self.atom_ids is not None:
            present = self.close(gen_ids, with_involution, stop_on_atoms=True)
            return bool(present[self.atom_ids].all())
        return bool(self.close(gen_ids, with_involution).all())
