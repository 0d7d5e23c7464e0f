import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from latforge.relation import Family, GroundSet, Relation, from_pairs, transitive_closure

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def relations(draw, n=None, max_n=5):
    n = n if n is not None else draw(st.integers(1, max_n))
    bits = draw(st.integers(0, (1 << (n * n)) - 1))
    return Relation(GroundSet(n), bits)


@st.composite
def members(draw, family, n=None, max_n=5):
    """A member of ``family``: transitive closure of a random relation, made reflexive/symmetric as needed."""
    r = draw(relations(n=n, max_n=max_n))
    pairs = r.pairs()
    fam = Family.parse(family)
    if fam in (Family.EQU, Family.QUO):
        pairs += [(i, i) for i in range(r.n)]
    if fam is Family.EQU:
        pairs += [(j, i) for i, j in pairs]
    return transitive_closure(from_pairs(r.ground, pairs))


@pytest.fixture
def rng():
    return random.Random(20261015)


def mixed_generator_ids(rng, table, count):
    """Index sets into ``table``: half uniform 2..5-subsets, half atom sets with a few atoms swapped out."""
    atom_ids = list(table.atom_ids)
    out = []
    for i in range(count):
        if i % 2 == 0:
            out.append(rng.sample(range(len(table)), rng.randint(2, 5)))
        else:
            keep = rng.sample(atom_ids, len(atom_ids) - rng.randint(0, 3))
            extra = rng.sample(range(len(table)), rng.randint(0, 2))
            out.append(sorted(set(keep + extra)))
    return out


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
