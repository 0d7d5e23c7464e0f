"""Colored-graph configurations and the relations they define.

A configuration is a ground set with labelled vertices and edges colored
``alpha``, ``beta`` or ``gamma``.  Each color defines the equivalence whose
blocks are the connected components of its edges.

Rank-``n`` Zadori configurations have vertices ``a0..an`` and ``b0..b(n-1)``:

* alpha: ``a(i-1) - a(i)`` for ``i = 1..n`` and ``b(j-1) - b(j)`` for ``j = 1..n-1``
* beta: ``a(i) - b(i)`` for ``i = 0..n-1``
* gamma: ``a(i) - b(i-1)`` for ``i = 1..n`` (the 45 degree edges)

Glued and one-point-extended variants take their extra edges as data, since
their full edge sets are not known here.  Those defaults are
conjectural and must be validated with the closure engine.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from .relation import (
    Family,
    GroundSet,
    LatticeError,
    Relation,
    atom,
    block_of,
    diagonal,
    from_pairs,
    is_member,
    join,
    meet,
    transitive_closure,
    transpose,
    union,
)

COLORS = ("alpha", "beta", "gamma")
_COLOR_ALIASES = {"alpha": "alpha", "a": "alpha", "α": "alpha",
                  "beta": "beta", "b": "beta", "β": "beta",
                  "gamma": "gamma", "g": "gamma", "γ": "gamma"}


def _color(c: str) -> str:
    try:
        return _COLOR_ALIASES[c.lower()]
    except KeyError:
        raise LatticeError(f"unknown color {c!r}; expected alpha, beta or gamma") from None


@dataclass(frozen=True)
class Configuration:
    ground: GroundSet
    edges: tuple[tuple[int, int, str], ...]
    kind: str = "zadori"
    ranks: tuple[int, ...] = ()
    conjectural: bool = False
    extension_vertex: int | None = None

    def vertex(self, name: str | int) -> int:
        return self.ground.index(name)

    def color_relation(self, color: str) -> Relation:
        color = _color(color)
        pairs = [(u, v) for u, v, c in self.edges if c == color]
        sym = from_pairs(self.ground, pairs + [(v, u) for u, v in pairs])
        return transitive_closure(union([sym, diagonal(self.ground)]))

    @property
    def alpha(self) -> Relation:
        return self.color_relation("alpha")

    @property
    def beta(self) -> Relation:
        return self.color_relation("beta")

    @property
    def gamma(self) -> Relation:
        return self.color_relation("gamma")

    @property
    def rank(self) -> int:
        return self.ranks[0] if self.ranks else 0

    def generators(self) -> dict[str, Relation]:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma}


def _zadori_edges(n: int, a, b) -> list[tuple[int, int, str]]:
    edges = [(a(i - 1), a(i), "alpha") for i in range(1, n + 1)]
    edges += [(b(j - 1), b(j), "alpha") for j in range(1, n)]
    edges += [(a(i), b(i), "beta") for i in range(n)]
    edges += [(a(i), b(i - 1), "gamma") for i in range(1, n + 1)]
    return edges


def build_zadori(n: int) -> Configuration:
    if not isinstance(n, int) or n < 2:
        raise LatticeError("Zadori configurations are built for rank n >= 2")
    labels = [f"a{i}" for i in range(n + 1)] + [f"b{j}" for j in range(n)]
    edges = _zadori_edges(n, lambda i: i, lambda j: n + 1 + j)
    return Configuration(GroundSet(2 * n + 1, tuple(labels)), tuple(edges), "zadori", (n,))


@dataclass(frozen=True)
class DeltaSpec:
    # (family, u, v) with family EQU or QUO and u, v vertex labels or indices
    components: tuple[tuple[str, str | int, str | int], ...]

    def describe(self) -> str:
        return " + ".join(f"{f.lower()}({u},{v})" for f, u, v in self.components)


def default_delta_spec(config: Configuration) -> DeltaSpec:
    """``equ(a0,an) + equ(b0,b(n-1)) + quo(a2,a4)`` on the first block."""
    n = config.rank
    if n < 4:
        raise LatticeError("the default delta needs rank >= 4 (it uses a4)")
    if config.kind == "glued":
        a = lambda i: f"a0_{i}"
        b = lambda j: f"b0_{j}"
    else:
        a = lambda i: f"a{i}"
        b = lambda j: f"b{j}"
    return DeltaSpec((("EQU", a(0), a(n)), ("EQU", b(0), b(n - 1)), ("QUO", a(2), a(4))))


def build_delta(config: Configuration, spec: DeltaSpec | None = None) -> Relation:
    """QUO-join of the atoms listed in ``spec``."""
    spec = spec or default_delta_spec(config)
    if not spec.components:
        raise LatticeError("a delta spec needs at least one atom")
    parts = []
    for fam, u, v in spec.components:
        fam = Family.parse(fam)
        if fam not in (Family.EQU, Family.QUO):
            raise LatticeError("delta components are EQU or QUO atoms")
        parts.append(atom(fam, config.vertex(u), config.vertex(v), config.ground))
    return join(Family.QUO, parts)


@dataclass(frozen=True)
class GluingSpec:
    blocks: tuple[int, ...]
    extra_edges: tuple[tuple[str, str, str], ...] = ()


def default_gluing(t: int) -> GluingSpec:
    """F_13 glued to F_t by the one documented gamma edge ``(b0_9, a1_11)``.

    Conjectural: the remaining connecting edges are not known.
    """
    return GluingSpec((13, t), (("b0_9", "a1_11", "gamma"),))


def build_glued(spec: GluingSpec) -> Configuration:
    if not spec.blocks:
        raise LatticeError("a gluing needs at least one block")
    labels: list[str] = []
    edges: list[tuple[int, int, str]] = []
    for k, n in enumerate(spec.blocks):
        if n < 2:
            raise LatticeError("glued blocks need rank >= 2")
        base = len(labels)
        labels += [f"a{k}_{i}" for i in range(n + 1)] + [f"b{k}_{j}" for j in range(n)]
        edges += _zadori_edges(n, lambda i, base=base: base + i, lambda j, base=base, n=n: base + n + 1 + j)
    ground = GroundSet(len(labels), tuple(labels))
    for u, v, c in spec.extra_edges:
        edges.append((ground.index(u), ground.index(v), _color(c)))
    return Configuration(ground, tuple(edges), "glued", tuple(spec.blocks), conjectural=bool(spec.extra_edges))


def glued_size(blocks: Sequence[int]) -> int:
    return sum(2 * n + 1 for n in blocks)


def build_one_point_extension(
    config: Configuration, edges: Sequence[tuple[str | int, str]] | None = None
) -> Configuration:
    """Add a vertex ``x`` joined to ``config`` by the given ``(vertex, color)`` edges.

    The default edges ``(a0, beta)`` and ``(an, gamma)`` are a reconstruction.
    """
    if config.kind != "zadori":
        raise LatticeError("one-point extensions start from a Zadori configuration")
    n = config.rank
    if edges is None:
        edges = (("a0", "beta"), (f"a{n}", "gamma"))
    labels = tuple(config.ground.labels) + ("x",)
    ground = GroundSet(config.ground.size + 1, labels)
    x = ground.size - 1
    new_edges = list(config.edges)
    for v, c in edges:
        new_edges.append((ground.index(v), x, _color(c)))
    return Configuration(ground, tuple(new_edges), "extension", config.ranks, conjectural=True, extension_vertex=x)


def quo_prime(eps: Relation, alpha: Relation, delta: Relation) -> Relation:
    """``eps ∧ (alpha ∨ delta)`` in Quo(A)."""
    return meet(eps, join(Family.QUO, [alpha, delta]))


def delta_checks(config: Configuration, delta: Relation) -> dict[str, bool]:
    """Evaluate the identities attached to the delta augmentation of F_n."""
    n = config.rank
    v = config.vertex
    g = config.ground
    al, be, ga = config.alpha, config.beta, config.gamma
    return {
        "delta_in_quo_not_equ": is_member(Family.QUO, delta) and not is_member(Family.EQU, delta),
        "beta_meet_gamma_join_delta": meet(be, join(Family.QUO, [ga, delta]))
        == atom(Family.EQU, v("a0"), v("b0"), g),
        "gamma_meet_beta_join_delta": meet(ga, join(Family.QUO, [be, delta]))
        == atom(Family.EQU, v(f"a{n}"), v(f"b{n - 1}"), g),
        "block_of_a2": block_of(join(Family.QUO, [delta, transpose(delta), ga]), v("a2"))
        == frozenset(v(s) for s in ("b1", "a2", "b3", "a4")),
    }


# -- .cfg text format ------------------------------------------------------


@dataclass
class ConfigFile:
    kind: str = "zadori"
    ranks: list[int] = field(default_factory=list)
    edges: list[tuple[str, str, str]] = field(default_factory=list)
    extend: list[tuple[str, str]] = field(default_factory=list)
    delta: list[tuple[str, str, str]] = field(default_factory=list)

    def build(self) -> tuple[Configuration, Relation | None]:
        if self.kind == "glue":
            config = build_glued(GluingSpec(tuple(self.ranks), tuple(self.edges)))
        else:
            if len(self.ranks) != 1:
                raise LatticeError("'zadori' takes exactly one rank")
            config = build_zadori(self.ranks[0])
            if self.edges:
                g = config.ground
                extra = tuple((g.index(u), g.index(w), _color(c)) for u, w, c in self.edges)
                config = Configuration(g, config.edges + extra, "zadori", config.ranks, conjectural=True)
            if self.extend:
                config = build_one_point_extension(config, self.extend)
        delta = build_delta(config, DeltaSpec(tuple(self.delta))) if self.delta else None
        return config, delta


def loads_cfg(text: str) -> ConfigFile:
    cfg = ConfigFile()
    seen_head = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        try:
            if head in ("zadori", "glue"):
                if seen_head:
                    raise LatticeError("only one 'zadori' or 'glue' line is allowed")
                seen_head = True
                cfg.kind = head
                cfg.ranks = [int(p) for p in parts[1:]]
            elif head == "edge" and len(parts) == 4:
                cfg.edges.append((parts[1], parts[2], _color(parts[3])))
            elif head == "extend" and len(parts) == 3:
                cfg.extend.append((parts[1], _color(parts[2])))
            elif head == "delta" and len(parts) == 5 and parts[1] == "atom":
                cfg.delta.append((parts[2].upper(), parts[3], parts[4]))
            else:
                raise LatticeError(f"cannot parse {raw!r}")
        except ValueError as exc:
            raise LatticeError(f"line {lineno}: {exc}") from None
    if not seen_head:
        raise LatticeError("configuration needs a 'zadori <n>' or 'glue <n1> <n2> ...' line")
    return cfg


def dumps_cfg(cfg: ConfigFile) -> str:
    lines = [f"{cfg.kind} " + " ".join(str(r) for r in cfg.ranks)]
    lines += [f"edge {u} {v} {c}" for u, v, c in cfg.edges]
    lines += [f"extend {v} {c}" for v, c in cfg.extend]
    lines += [f"delta atom {f.lower()} {u} {v}" for f, u, v in cfg.delta]
    return "\n".join(lines) + "\n"
