"""Binary relations on a finite ground set, packed into Python integers.

Pair ``(i, j)`` of a relation on ``n`` points lives at bit ``i * n + j``, so
row ``i`` occupies bits ``i*n .. i*n + n - 1``.  For ``n <= 8`` a whole
relation fits in one 64-bit word, which the closure engine exploits.

The four families share one join: the transitive closure of the union.  For
reflexive (and symmetric) inputs this is the join of Quo(A) (and Equ(A)); for
arbitrary relations it is the path join of Rel(A).  Meet is intersection
everywhere.

On a finite ground set every arbitrary join or meet is a finite one, so the
complete-lattice notions used elsewhere in the package reduce to ordinary
finitary generation.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_GROUND = 128

__all__ = [
    "MAX_GROUND",
    "LatticeError",
    "GroundMismatchError",
    "NotAMemberError",
    "FeasibilityError",
    "GroundSet",
    "Relation",
    "Family",
    "diagonal",
    "empty",
    "full",
    "from_pairs",
    "transpose",
    "meet",
    "union",
    "transitive_closure",
    "join",
    "atom",
    "atoms",
    "bottom",
    "top",
    "is_reflexive",
    "is_symmetric",
    "is_transitive",
    "is_member",
    "is_antisymmetric",
    "strip_diagonal",
    "block_of",
    "permute",
    "induced",
    "lift",
    "enumerate_family",
    "brute_force_family",
    "dumps_rel",
    "loads_rel",
]


class LatticeError(ValueError):
    """Base class for invalid operations on relations."""


class GroundMismatchError(LatticeError):
    pass


class NotAMemberError(LatticeError):
    pass


class FeasibilityError(LatticeError):
    """Raised when an exhaustive enumeration would be too large."""


@dataclass(frozen=True)
class GroundSet:
    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise LatticeError(f"ground set size must be a positive integer, got {self.size!r}")
        if self.size > MAX_GROUND:
            raise LatticeError(f"ground set size {self.size} exceeds the cap of {MAX_GROUND}")
        if self.labels is not None:
            labels = tuple(self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != self.size:
                raise LatticeError("labels must have exactly one entry per element")
            if len(set(labels)) != len(labels):
                raise LatticeError("labels must be pairwise distinct")
            for lab in labels:
                if not lab or re.search(r"\s", lab):
                    raise LatticeError(f"invalid label {lab!r}")

    def __len__(self) -> int:
        return self.size

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def index(self, name: str | int) -> int:
        """Resolve a label (or a plain integer / decimal string) to an index."""
        if isinstance(name, int):
            i = name
        elif self.labels is not None and name in self.labels:
            return self.labels.index(name)
        elif str(name).isdigit():
            i = int(name)
        else:
            raise LatticeError(f"unknown vertex {name!r}")
        if not 0 <= i < self.size:
            raise LatticeError(f"index {i} out of range for ground set of size {self.size}")
        return i

    @property
    def row_mask(self) -> int:
        return (1 << self.size) - 1


class Relation:
    """An immutable binary relation on ``ground``."""

    __slots__ = ("ground", "bits")

    def __init__(self, ground: GroundSet | int, bits: int = 0):
        if isinstance(ground, int):
            ground = GroundSet(ground)
        n = ground.size
        if bits < 0 or bits >> (n * n):
            raise LatticeError("relation bits outside the n*n square")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("Relation is immutable")

    @property
    def n(self) -> int:
        return self.ground.size

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.bits == other.bits and self.ground.size == other.ground.size

    def __hash__(self):
        return hash((self.ground.size, self.bits))

    def __contains__(self, pair) -> bool:
        i, j = pair
        return bool(self.bits >> (i * self.n + j) & 1)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs())

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __le__(self, other: Relation) -> bool:
        _check_same(self, other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other: Relation) -> bool:
        return self <= other and self.bits != other.bits

    def __ge__(self, other: Relation) -> bool:
        return other <= self

    def __gt__(self, other: Relation) -> bool:
        return other < self

    def pairs(self) -> list[tuple[int, int]]:
        n, b = self.n, self.bits
        out = []
        while b:
            low = b & -b
            k = low.bit_length() - 1
            out.append(divmod(k, n))
            b ^= low
        return out

    def rows(self) -> list[int]:
        n, mask = self.n, self.ground.row_mask
        return [(self.bits >> (i * n)) & mask for i in range(n)]

    @classmethod
    def from_rows(cls, ground: GroundSet | int, rows: Sequence[int]) -> Relation:
        if isinstance(ground, int):
            ground = GroundSet(ground)
        n = ground.size
        bits = 0
        for i, r in enumerate(rows):
            bits |= r << (i * n)
        return cls(ground, bits)

    def __repr__(self):
        shown = ", ".join(f"({self.ground.label(i)},{self.ground.label(j)})" for i, j in self.pairs())
        return f"Relation(n={self.n}, {{{shown}}})"


def _check_same(*rs: Relation) -> GroundSet:
    g = rs[0].ground
    for r in rs[1:]:
        if r.ground.size != g.size:
            raise GroundMismatchError(f"ground sets differ: {g.size} vs {r.ground.size}")
    return g


def _as_ground(ground: GroundSet | int) -> GroundSet:
    return GroundSet(ground) if isinstance(ground, int) else ground


def _diag_bits(n: int) -> int:
    return sum(1 << (i * n + i) for i in range(n))


def diagonal(ground: GroundSet | int) -> Relation:
    g = _as_ground(ground)
    return Relation(g, _diag_bits(g.size))


def empty(ground: GroundSet | int) -> Relation:
    return Relation(_as_ground(ground), 0)


def full(ground: GroundSet | int) -> Relation:
    g = _as_ground(ground)
    return Relation(g, (1 << (g.size * g.size)) - 1)


def from_pairs(ground: GroundSet | int, pairs: Iterable[tuple[int, int]]) -> Relation:
    g = _as_ground(ground)
    n = g.size
    bits = 0
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise LatticeError(f"pair ({i}, {j}) out of range for n={n}")
        bits |= 1 << (i * n + j)
    return Relation(g, bits)


def transpose(r: Relation) -> Relation:
    n = r.n
    bits = 0
    for i, j in r.pairs():
        bits |= 1 << (j * n + i)
    return Relation(r.ground, bits)


def meet(r: Relation, s: Relation) -> Relation:
    _check_same(r, s)
    return Relation(r.ground, r.bits & s.bits)


def union(rs: Iterable[Relation]) -> Relation:
    rs = list(rs)
    if not rs:
        raise LatticeError("union of an empty list")
    _check_same(*rs)
    bits = 0
    for r in rs:
        bits |= r.bits
    return Relation(rs[0].ground, bits)


def _closure_rows(rows: list[int]) -> list[int]:
    # Warshall over bit rows: after step k, every path through {0..k} is short-cut.
    for k in range(len(rows)):
        bit = 1 << k
        rk = rows[k]
        for i, ri in enumerate(rows):
            if ri & bit:
                rows[i] = ri | rk
    return rows


def transitive_closure(r: Relation) -> Relation:
    return Relation.from_rows(r.ground, _closure_rows(r.rows()))


class Family(enum.Enum):
    EQU = "EQU"
    QUO = "QUO"
    TRAN = "TRAN"
    REL = "REL"

    @classmethod
    def parse(cls, value: str | Family) -> Family:
        if isinstance(value, Family):
            return value
        try:
            return cls[str(value).upper()]
        except KeyError:
            raise LatticeError(f"unknown family {value!r}") from None


def join(family: Family, rs: Sequence[Relation]) -> Relation:
    """Join in ``family``: transitive closure of the union."""
    family = Family.parse(family)
    rs = list(rs)
    if not rs:
        raise LatticeError("join of an empty list")
    _check_same(*rs)
    if family is not Family.REL:
        for r in rs:
            if not is_member(family, r):
                raise NotAMemberError(f"{r!r} is not a member of {family.value}")
    return transitive_closure(union(rs))


def atom(family: Family, a: int, b: int, ground: GroundSet | int) -> Relation:
    """Least member of ``family`` containing the pair ``(a, b)``.

    EQU and QUO atoms carry the full diagonal so that they are members of
    their lattice; TRAN atoms are single pairs (``a == b`` allowed).
    """
    family = Family.parse(family)
    g = _as_ground(ground)
    n = g.size
    if not (0 <= a < n and 0 <= b < n):
        raise LatticeError(f"atom indices ({a}, {b}) out of range for n={n}")
    if family in (Family.EQU, Family.QUO):
        if a == b:
            raise LatticeError(f"{family.value} atoms need two distinct points")
        bits = _diag_bits(n) | 1 << (a * n + b)
        if family is Family.EQU:
            bits |= 1 << (b * n + a)
        return Relation(g, bits)
    if family is Family.TRAN:
        return Relation(g, 1 << (a * n + b))
    raise LatticeError("REL has no atom operation")


def atoms(family: Family, ground: GroundSet | int) -> list[Relation]:
    family = Family.parse(family)
    g = _as_ground(ground)
    n = g.size
    if family is Family.EQU:
        return [atom(family, a, b, g) for a, b in itertools.combinations(range(n), 2)]
    if family is Family.QUO:
        return [atom(family, a, b, g) for a, b in itertools.permutations(range(n), 2)]
    if family is Family.TRAN:
        return [atom(family, a, b, g) for a, b in itertools.product(range(n), repeat=2)]
    raise LatticeError("REL has no atom set")


def bottom(family: Family, ground: GroundSet | int) -> Relation:
    family = Family.parse(family)
    if family in (Family.EQU, Family.QUO):
        return diagonal(ground)
    return empty(ground)


def top(family: Family, ground: GroundSet | int) -> Relation:
    return full(ground)


def is_reflexive(r: Relation) -> bool:
    d = _diag_bits(r.n)
    return r.bits & d == d


def is_symmetric(r: Relation) -> bool:
    return all((j, i) in r for i, j in r.pairs())


def is_transitive(r: Relation) -> bool:
    # Checked from the definition, not via closure: (a,b),(b,c) in r => (a,c) in r.
    rows = r.rows()
    for i, ri in enumerate(rows):
        b = ri
        while b:
            low = b & -b
            j = low.bit_length() - 1
            if rows[j] & ~ri:
                return False
            b ^= low
    return True


def is_member(family: Family, r: Relation) -> bool:
    family = Family.parse(family)
    if family is Family.REL:
        return True
    if family is Family.TRAN:
        return is_transitive(r)
    if not (is_reflexive(r) and is_transitive(r)):
        return False
    return family is Family.QUO or is_symmetric(r)


def is_antisymmetric(r: Relation) -> bool:
    return (r.bits & transpose(r).bits) & ~_diag_bits(r.n) == 0


def strip_diagonal(r: Relation) -> Relation:
    return Relation(r.ground, r.bits & ~_diag_bits(r.n))


def block_of(r: Relation, x: int) -> frozenset[int]:
    """Block of ``x`` in the least equivalence containing the reflexive ``r``."""
    if not is_reflexive(r):
        raise LatticeError("block_of needs a reflexive relation")
    n = r.n
    if not 0 <= x < n:
        raise LatticeError(f"index {x} out of range")
    rows = r.rows()
    cols = transpose(r).rows()
    seen = 1 << x
    frontier = [x]
    while frontier:
        i = frontier.pop()
        nbrs = (rows[i] | cols[i]) & ~seen
        seen |= nbrs
        while nbrs:
            low = nbrs & -nbrs
            frontier.append(low.bit_length() - 1)
            nbrs ^= low
    return frozenset(i for i in range(n) if seen >> i & 1)


def permute(r: Relation, perm: Sequence[int]) -> Relation:
    """Image of ``r`` under the ground permutation ``i -> perm[i]``."""
    n = r.n
    bits = 0
    for i, j in r.pairs():
        bits |= 1 << (perm[i] * n + perm[j])
    return Relation(r.ground, bits)


def induced(r: Relation, points: Sequence[int]) -> Relation:
    """Restriction of ``r`` to ``points``, renumbered ``0..len(points)-1`` in the given order."""
    pos = {p: k for k, p in enumerate(points)}
    if len(pos) != len(points):
        raise LatticeError("points must be distinct")
    labels = tuple(r.ground.label(p) for p in points) if r.ground.labels else None
    g = GroundSet(len(points), labels)
    return from_pairs(g, [(pos[i], pos[j]) for i, j in r.pairs() if i in pos and j in pos])


def lift(r: Relation, points: Sequence[int], ground: GroundSet) -> Relation:
    """Inverse of :func:`induced`: ``r`` placed on ``points`` plus the diagonal of ``ground``."""
    pairs = [(points[i], points[j]) for i, j in r.pairs()]
    return from_pairs(ground, pairs + [(i, i) for i in range(ground.size)])


_FEASIBLE = {Family.QUO: 5, Family.EQU: 5, Family.TRAN: 4, Family.REL: 3}


def enumerate_family(
    family: Family, ground: GroundSet | int, *, allow_large: bool = False
) -> Iterator[Relation]:
    """Yield every member of ``family`` once, in increasing packed-bit order.

    Backtracking over the cells from the most significant bit down; the set of
    forced ones is kept transitively closed, so every branch reaches a leaf.
    """
    family = Family.parse(family)
    g = _as_ground(ground)
    n = g.size
    if n > _FEASIBLE[family] and not allow_large:
        raise FeasibilityError(
            f"enumerating {family.value} on {n} points exceeds the guard "
            f"(n <= {_FEASIBLE[family]}); pass allow_large=True to override"
        )
    if family is Family.REL:
        for bits in range(1 << (n * n)):
            yield Relation(g, bits)
        return

    symmetric = family is Family.EQU
    mask = g.row_mask
    start = _diag_bits(n) if family in (Family.EQU, Family.QUO) else 0

    def close(bits: int) -> int:
        rows = [(bits >> (i * n)) & mask for i in range(n)]
        rows = _closure_rows(rows)
        out = 0
        for i, ri in enumerate(rows):
            out |= ri << (i * n)
        return out

    def mirror(cell: int) -> int:
        i, j = divmod(cell, n)
        return j * n + i

    def rec(cell: int, ones: int, zeros: int) -> Iterator[int]:
        while cell >= 0 and (ones >> cell & 1 or zeros >> cell & 1):
            cell -= 1
        if cell < 0:
            yield ones
            return
        bit = 1 << cell
        # 0 before 1 gives increasing order, since cells go from the top bit down.
        if not ones & bit:
            z = zeros | bit
            if symmetric:
                z |= 1 << mirror(cell)
            yield from rec(cell - 1, ones, z)
        o = ones | bit
        if symmetric:
            o |= 1 << mirror(cell)
        o = close(o)
        if not o & zeros:
            yield from rec(cell - 1, o, zeros)

    for bits in rec(n * n - 1, start, 0):
        yield Relation(g, bits)


def brute_force_family(family: Family, ground: GroundSet | int) -> list[Relation]:
    """Filter all 2^(n^2) relations by the membership predicate."""
    g = _as_ground(ground)
    if g.size > 3:
        raise FeasibilityError("brute-force filtering is limited to n <= 3")
    return [Relation(g, b) for b in range(1 << (g.size * g.size)) if is_member(family, Relation(g, b))]


# -- .rel text format ------------------------------------------------------


def dumps_rel(r: Relation, name: str | None = None) -> str:
    lines = []
    if name:
        lines.append(f"# relation {name}")
    lines.append(f"ground {r.n}")
    if r.ground.labels is not None:
        lines.extend(f"label {i} {lab}" for i, lab in enumerate(r.ground.labels))
    lines.extend(f"pair {i} {j}" for i, j in sorted(r.pairs()))
    return "\n".join(lines) + "\n"


def loads_rel(text: str) -> list[tuple[str | None, Relation]]:
    """Parse a stream of .rel documents; each ``ground`` line starts a new one.

    A ``# relation <name>`` comment immediately before ``ground`` names it.
    """
    docs: list[tuple[str | None, int, dict[int, str], set]] = []
    pending_name = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        m = re.match(r"\s*#\s*relation\s+(\S+)", raw)
        if m:
            pending_name = m.group(1)
            continue
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        try:
            if head == "ground" and len(parts) == 2:
                docs.append((pending_name, int(parts[1]), {}, set()))
                pending_name = None
            elif not docs:
                raise LatticeError(f"line {lineno}: expected 'ground <n>' first")
            elif head == "label" and len(parts) == 3:
                docs[-1][2][int(parts[1])] = parts[2]
            elif head == "pair" and len(parts) == 3:
                docs[-1][3].add((int(parts[1]), int(parts[2])))
            else:
                raise LatticeError(f"line {lineno}: cannot parse {raw!r}")
        except ValueError as exc:
            if isinstance(exc, LatticeError):
                raise
            raise LatticeError(f"line {lineno}: {exc}") from None
    out = []
    for name, n, labels, pairs in docs:
        if labels:
            if sorted(labels) != list(range(n)):
                raise LatticeError("labels must cover every element exactly once")
            g = GroundSet(n, tuple(labels[i] for i in range(n)))
        else:
            g = GroundSet(n)
        out.append((name, from_pairs(g, pairs)))
    return out
