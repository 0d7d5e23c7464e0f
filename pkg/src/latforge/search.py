"""Exhaustive searches for generating sets.

Candidates are k-subsets of an enumerated family, visited in lexicographic
order of element indices (elements sorted by packed bits).  With symmetry
reduction on, only subsets whose smallest element is the least member of its
orbit are visited.  The group acting is the ground permutations together with
transpose; all of these are lattice automorphisms, so generation is invariant
under them, and every orbit of k-subsets still has a visited member.
"""

from __future__ import annotations

import enum
import hashlib
import itertools
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .closure import Answer, Budget, FamilyTable, generates_whole
from .constructions import Configuration
from .relation import (
    Family,
    GroundSet,
    LatticeError,
    Relation,
    atom,
    enumerate_family,
    is_antisymmetric,
    is_member,
    is_reflexive,
    is_transitive,
    join,
    permute,
    strip_diagonal,
    transpose,
)


class Pattern(str, enum.Enum):
    ANY = "ANY"
    ONE_ONE_TWO = "ONE_ONE_TWO"
    ALL_ANTISYMMETRIC = "ALL_ANTISYMMETRIC"


class Mode(str, enum.Enum):
    FIND_ONE = "FIND_ONE"
    PROVE_NONE = "PROVE_NONE"
    FIND_ALL = "FIND_ALL"


def is_one_one_two(cands: Sequence[Relation]) -> bool:
    """Can the four relations be labelled x1 < x2 with {x1,x3,x4}, {x2,x3,x4} antichains?"""
    cands = list(cands)
    if len(cands) != 4:
        raise LatticeError("the (1+1+2) pattern needs exactly four relations")
    if len(set(cands)) != 4:
        raise LatticeError("the four relations must be distinct")

    def comparable(x, y):
        return x <= y or y <= x

    for x1, x2, x3, x4 in itertools.permutations(cands):
        if not x1 < x2:
            continue
        if any(comparable(p, q) for p, q in itertools.combinations((x1, x3, x4), 2)):
            continue
        if any(comparable(p, q) for p, q in itertools.combinations((x2, x3, x4), 2)):
            continue
        return True
    return False


def one_one_two_labelling(cands: Sequence[Relation]) -> tuple[int, int, int, int] | None:
    """Indices (x1, x2, x3, x4) of a labelling witnessing the pattern, if any."""
    cands = list(cands)
    for perm in itertools.permutations(range(4)):
        x = [cands[i] for i in perm]
        if x[0] < x[1] and not any(
            p <= q or q <= p
            for trio in ((x[0], x[2], x[3]), (x[1], x[2], x[3]))
            for p, q in itertools.combinations(trio, 2)
        ):
            return perm
    return None


def automorphisms(n: int) -> Iterator[tuple[tuple[int, ...], bool]]:
    """Ground permutations, each with and without transpose."""
    for perm in itertools.permutations(range(n)):
        yield perm, False
        yield perm, True


def apply_automorphism(r: Relation, perm: Sequence[int], flip: bool) -> Relation:
    out = permute(r, perm)
    return transpose(out) if flip else out


def orbit_minimal(pool: Sequence[Relation]) -> np.ndarray:
    """Mask of pool members that are the least (by packed bits) in their orbit."""
    if not pool:
        return np.zeros(0, dtype=bool)
    n = pool[0].n
    group = list(automorphisms(n))
    out = np.ones(len(pool), dtype=bool)
    for i, r in enumerate(pool):
        for perm, flip in group:
            if apply_automorphism(r, perm, flip).bits < r.bits:
                out[i] = False
                break
    return out


@dataclass
class SearchSpec:
    family: str
    n: int
    k: int
    pattern: str = Pattern.ANY.value
    with_involution: bool = False
    mode: str = Mode.FIND_ONE.value
    max_candidates: int | None = None
    symmetry_reduction: bool = True
    allow_large: bool = False

    def __post_init__(self):
        self.family = Family.parse(self.family).value
        self.pattern = Pattern(self.pattern).value
        self.mode = Mode(self.mode).value
        if self.k < 1:
            raise LatticeError("k must be at least 1")
        if self.pattern == Pattern.ONE_ONE_TWO.value and self.k != 4:
            raise LatticeError("the (1+1+2) pattern needs k = 4")

    def digest(self) -> str:
        keys = ("family", "n", "k", "pattern", "with_involution", "mode", "symmetry_reduction")
        blob = json.dumps({k: getattr(self, k) for k in keys}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    @classmethod
    def from_dict(cls, d: dict) -> SearchSpec:
        return cls(**d)


@dataclass
class SearchResult:
    spec: SearchSpec
    found: list[list[Relation]]
    examined: int
    counts: dict[str, int]
    complete: bool
    # index of the next candidate to examine; pass back as ``resume`` to continue
    resume_token: int
    pool_size: int
    elapsed_ms: float
    total_unreduced: int

    @property
    def certificate(self) -> dict:
        return {
            "spec": asdict(self.spec),
            "spec_hash": self.spec.digest(),
            "examined": self.examined,
            "complete": self.complete,
            "counts": dict(self.counts),
            "found": len(self.found),
        }


_TABLES: dict[tuple[str, int], FamilyTable] = {}


def family_table(family: Family | str, n: int) -> FamilyTable:
    family = Family.parse(family)
    key = (family.value, n)
    if key not in _TABLES:
        _TABLES[key] = FamilyTable(family, GroundSet(n))
    return _TABLES[key]


def _candidates(pool_size: int, k: int, canon: np.ndarray | None) -> Iterator[tuple[int, ...]]:
    firsts = range(pool_size) if canon is None else np.flatnonzero(canon).tolist()
    for i0 in firsts:
        for rest in itertools.combinations(range(i0 + 1, pool_size), k - 1):
            yield (i0, *rest)


def save_checkpoint(path: str | Path, spec: SearchSpec, last_index: int, counts: dict, found: list) -> None:
    payload = {
        "spec_hash": spec.digest(),
        "spec": asdict(spec),
        "last_candidate_index": last_index,
        "verdict_counts": counts,
        "found": [[sorted(map(list, r.pairs())) for r in s] for s in found],
    }
    tmp = Path(str(path) + ".tmp")
    tmp.write_text(json.dumps(payload, indent=1))
    tmp.replace(path)


def load_checkpoint(path: str | Path, spec: SearchSpec) -> dict:
    data = json.loads(Path(path).read_text())
    if data.get("spec_hash") != spec.digest():
        raise LatticeError("checkpoint belongs to a different search spec")
    return data


def search_generating_sets(
    spec: SearchSpec,
    resume: int | str | Path | None = None,
    checkpoint: str | Path | None = None,
    checkpoint_every: int = 1_000_000,
) -> SearchResult:
    t0 = time.perf_counter()
    family = Family.parse(spec.family)
    table = family_table(family, spec.n) if not spec.allow_large else FamilyTable(
        family, GroundSet(spec.n), list(enumerate_family(family, spec.n, allow_large=True))
    )
    pool_ids = list(range(len(table)))
    if spec.pattern == Pattern.ALL_ANTISYMMETRIC.value:
        pool_ids = [i for i in pool_ids if is_antisymmetric(table.elements[i])]
    pool = [table.elements[i] for i in pool_ids]
    canon = orbit_minimal(pool) if spec.symmetry_reduction else None

    start = 0
    counts = {"YES": 0, "NO": 0}
    found: list[list[Relation]] = []
    if resume is not None:
        if isinstance(resume, int):
            start = resume
        else:
            data = load_checkpoint(resume, spec)
            start = data["last_candidate_index"]
            counts = dict(data["verdict_counts"])
            g = GroundSet(spec.n)
            from .relation import from_pairs

            found = [[from_pairs(g, [tuple(p) for p in r]) for r in s] for s in data.get("found", [])]

    examined = 0
    index = 0
    complete = True
    for index, cand in enumerate(_candidates(len(pool), spec.k, canon)):
        if index < start:
            continue
        if spec.max_candidates is not None and examined >= spec.max_candidates:
            complete = False
            break
        examined += 1
        rels = [pool[i] for i in cand]
        if spec.pattern == Pattern.ONE_ONE_TWO.value and not is_one_one_two(rels):
            counts["SKIPPED"] = counts.get("SKIPPED", 0) + 1
        elif table.generates([pool_ids[i] for i in cand], spec.with_involution):
            counts["YES"] += 1
            found.append(rels)
            if spec.mode == Mode.FIND_ONE.value:
                index += 1
                complete = False
                break
        else:
            counts["NO"] += 1
        if checkpoint is not None and (index + 1) % checkpoint_every == 0:
            save_checkpoint(checkpoint, spec, index + 1, counts, found)
    else:
        index += 1
    if checkpoint is not None:
        save_checkpoint(checkpoint, spec, index, counts, found)
    return SearchResult(
        spec=spec,
        found=found,
        examined=examined,
        counts=counts,
        complete=complete,
        resume_token=index,
        pool_size=len(pool),
        elapsed_ms=round(1000 * (time.perf_counter() - t0), 3),
        total_unreduced=math.comb(len(pool), spec.k),
    )


def orders_to_tran_generators(orderings: Sequence[Relation]) -> list[Relation]:
    """Remove the diagonal from each ordering (reflexive, transitive, antisymmetric)."""
    out = []
    for r in orderings:
        if not (is_reflexive(r) and is_transitive(r)):
            raise LatticeError(f"{r!r} is not a quasiorder")
        if not is_antisymmetric(r):
            raise LatticeError(f"{r!r} is not antisymmetric")
        out.append(strip_diagonal(r))
    return out


@dataclass
class DeltaSearchResult:
    found: list[tuple[tuple[tuple[str, str, str], ...], Relation]]
    examined: int
    unknown: int
    complete: bool
    elapsed_ms: float = 0.0
    details: list[dict] = field(default_factory=list)


def delta_candidates(config: Configuration, max_atoms: int, avoid: Sequence[int] = ()) -> Iterator[tuple]:
    """Distinct non-equivalence QUO-joins of up to ``max_atoms`` quo atoms.

    Vertices in ``avoid`` do not occur in any atom.
    """
    g = config.ground
    verts = [i for i in range(g.size) if i not in set(avoid)]
    pairs = [(a, b) for a in verts for b in verts if a != b]
    seen = set()
    for k in range(1, max_atoms + 1):
        for combo in itertools.combinations(pairs, k):
            d = join(Family.QUO, [atom(Family.QUO, a, b, g) for a, b in combo])
            if d in seen:
                continue
            seen.add(d)
            if is_member(Family.EQU, d):
                continue
            comps = tuple(("QUO", g.label(a), g.label(b)) for a, b in combo)
            yield comps, d


def search_delta(
    config: Configuration,
    max_atoms: int = 2,
    budget: Budget | None = None,
    max_candidates: int | None = None,
    find_all: bool = False,
    avoid: Sequence[int] = (),
    candidates: Sequence[tuple] | None = None,
) -> DeltaSearchResult:
    """Look for a delta with {alpha, beta, gamma, delta} generating Quo(A).

    Only YES verdicts are returned as found; budget-limited closures are
    counted as unknown.
    """
    t0 = time.perf_counter()
    budget = budget or Budget(max_elements=50_000)
    gens = [config.alpha, config.beta, config.gamma]
    it = iter(candidates) if candidates is not None else delta_candidates(config, max_atoms, avoid)
    found, examined, unknown = [], 0, 0
    complete = True
    for comps, d in it:
        if max_candidates is not None and examined >= max_candidates:
            complete = False
            break
        examined += 1
        if not is_member(Family.QUO, d):
            raise LatticeError("delta candidates must be quasiorders")
        v = generates_whole(gens + [d], Family.QUO, budget=budget)
        if v.answer is Answer.YES:
            found.append((comps, d))
            if not find_all:
                complete = False
                break
        elif v.answer is Answer.UNKNOWN:
            unknown += 1
    return DeltaSearchResult(found, examined, unknown, complete, round(1000 * (time.perf_counter() - t0), 3))
