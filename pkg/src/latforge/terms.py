"""Finitary lattice terms with involution.

Concrete syntax is prefix-only::

    join(t, ...)  meet(t, ...)  inv(t)  v<k>
    equ(i,j)  quo(i,j)  trn(i,j)  diag  empty  all

``render`` emits the canonical form (``", "`` between arguments), and
``parse(render(t)) == t`` for every term.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Sequence, Union

from .relation import (
    Family,
    GroundSet,
    LatticeError,
    Relation,
    atom,
    diagonal,
    empty,
    full,
    is_member,
    join,
    meet,
    strip_diagonal,
    transpose,
)


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Const:
    kind: str  # equ | quo | trn | diag | empty | all
    a: int | None = None
    b: int | None = None


@dataclass(frozen=True)
class Join:
    children: tuple["Term", ...]


@dataclass(frozen=True)
class Meet:
    children: tuple["Term", ...]


@dataclass(frozen=True)
class Inv:
    child: "Term"


Term = Union[Var, Const, Join, Meet, Inv]

_ATOM_KINDS = {"equ": Family.EQU, "quo": Family.QUO, "trn": Family.TRAN}


class TermSyntaxError(LatticeError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def arity(t: Term) -> int:
    if isinstance(t, Var):
        return t.index + 1
    if isinstance(t, Const):
        return 0
    if isinstance(t, Inv):
        return arity(t.child)
    return max(arity(c) for c in t.children)


def depth(t: Term) -> int:
    if isinstance(t, (Var, Const)):
        return 0
    if isinstance(t, Inv):
        return 1 + depth(t.child)
    return 1 + max(depth(c) for c in t.children)


def render(t: Term) -> str:
    if isinstance(t, Var):
        return f"v{t.index}"
    if isinstance(t, Const):
        if t.kind in _ATOM_KINDS:
            return f"{t.kind}({t.a}, {t.b})"
        return t.kind
    if isinstance(t, Inv):
        return f"inv({render(t.child)})"
    name = "join" if isinstance(t, Join) else "meet"
    return f"{name}({', '.join(render(c) for c in t.children)})"


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<num>\d+)|(?P<sym>[(),]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text) - len(text[pos:].lstrip())
            raise TermSyntaxError(f"unexpected character {text[bad]!r}", bad)
        start = m.start(m.lastgroup)
        toks.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


def parse(text: str) -> Term:
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def expect(kind, value=None):
        nonlocal i
        k, v, p = toks[i]
        if k != kind or (value is not None and v != value):
            want = value or kind
            raise TermSyntaxError(f"expected {want!r}, found {v or 'end of input'!r}", p)
        i += 1
        return v, p

    def number():
        v, _ = expect("num")
        return int(v)

    def term() -> Term:
        nonlocal i
        k, v, p = peek()
        if k != "name":
            raise TermSyntaxError(f"expected a term, found {v or 'end of input'!r}", p)
        i += 1
        m = re.fullmatch(r"v(\d+)", v)
        if m:
            return Var(int(m.group(1)))
        if v in ("diag", "empty", "all"):
            return Const(v)
        if v in _ATOM_KINDS:
            expect("sym", "(")
            a = number()
            expect("sym", ",")
            b = number()
            expect("sym", ")")
            return Const(v, a, b)
        if v in ("join", "meet", "inv"):
            expect("sym", "(")
            if peek()[1] == ")":
                raise TermSyntaxError(f"{v}() needs at least one argument", peek()[2])
            children = [term()]
            while peek()[1] == ",":
                i += 1
                children.append(term())
            expect("sym", ")")
            if v == "inv":
                if len(children) != 1:
                    raise TermSyntaxError("inv takes exactly one argument", p)
                return Inv(children[0])
            return (Join if v == "join" else Meet)(tuple(children))
        raise TermSyntaxError(f"unknown symbol {v!r}", p)

    t = term()
    k, v, p = peek()
    if k != "end":
        raise TermSyntaxError(f"trailing input {v!r}", p)
    return t


def evaluate(
    t: Term,
    bindings: Sequence[Relation],
    family: Family | str = Family.REL,
    ground: GroundSet | int | None = None,
) -> Relation:
    """Evaluate bottom-up; joins use the semantics of ``family``."""
    family = Family.parse(family)
    bindings = list(bindings)
    if arity(t) > len(bindings):
        raise LatticeError(f"term has arity {arity(t)} but only {len(bindings)} bindings were given")
    if bindings:
        g = bindings[0].ground
        for b in bindings:
            if b.n != g.size:
                raise LatticeError("bindings live on different ground sets")
            if family is not Family.REL and not is_member(family, b):
                raise LatticeError(f"binding {b!r} is not a member of {family.value}")
    elif ground is not None:
        g = ground if isinstance(ground, GroundSet) else GroundSet(ground)
    else:
        raise LatticeError("a ground set is needed to evaluate a closed term")

    def ev(s: Term) -> Relation:
        if isinstance(s, Var):
            return bindings[s.index]
        if isinstance(s, Const):
            if s.kind == "diag":
                return diagonal(g)
            if s.kind == "empty":
                return empty(g)
            if s.kind == "all":
                return full(g)
            return atom(_ATOM_KINDS[s.kind], s.a, s.b, g)
        if isinstance(s, Inv):
            return transpose(ev(s.child))
        vals = [ev(c) for c in s.children]
        if isinstance(s, Meet):
            out = vals[0]
            for v in vals[1:]:
                out = meet(out, v)
            return out
        return join(family, vals)

    return ev(t)


def strip_eval_commutes(t: Term, bindings: Sequence[Relation]) -> bool:
    """Does removing the diagonal commute with evaluating ``t`` over Rel(A)?"""
    lhs = strip_diagonal(evaluate(t, bindings, Family.REL))
    rhs = strip_diagonal(evaluate(t, [strip_diagonal(b) for b in bindings], Family.REL))
    return lhs == rhs


def random_term(
    rng: random.Random,
    arity: int,
    max_depth: int = 6,
    stop: float = 0.35,
    n: int | None = None,
    const_rate: float = 0.0,
    involution: bool = True,
    max_children: int = 3,
) -> Term:
    """Random term; each node is a leaf with probability ``stop`` (geometric depth).

    Constants appear with probability ``const_rate`` at leaves and need ``n``.
    """

    def leaf() -> Term:
        if n is not None and n >= 2 and rng.random() < const_rate:
            kind = rng.choice(["equ", "quo", "trn", "diag", "empty", "all"])
            if kind in _ATOM_KINDS:
                a, b = rng.sample(range(n), 2)
                return Const(kind, a, b)
            return Const(kind)
        return Var(rng.randrange(arity))

    def node(d: int) -> Term:
        if d >= max_depth or rng.random() < stop:
            return leaf()
        r = rng.random()
        if involution and r < 0.2:
            return Inv(node(d + 1))
        k = rng.randint(1, max_children)
        kids = tuple(node(d + 1) for _ in range(k))
        return Join(kids) if r < 0.6 else Meet(kids)

    return node(0)


def circle_terms(xs: Sequence[int], ys: Sequence[int], kind: str = "quo") -> Term:
    """Meet of the two chain joins around a circle through ``xs`` and ``ys``.

    ``xs`` and ``ys`` both run from ``u`` to ``v``.
    """
    def chain(ps):
        return Join(tuple(Const(kind, ps[i - 1], ps[i]) for i in range(1, len(ps))))

    return Meet((chain(xs), chain(ys)))
