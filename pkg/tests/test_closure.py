import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import members, mixed_generator_ids
from latforge.closure import (
    Answer,
    Budget,
    FamilyTable,
    Status,
    close,
    expand_involution_genset,
    generates_whole,
    replay_steps,
)
from latforge.relation import (
    Family,
    GroundSet,
    LatticeError,
    NotAMemberError,
    atom,
    atoms,
    diagonal,
    enumerate_family,
    from_pairs,
    join,
    meet,
    transpose,
)

FAMILIES = [Family.EQU, Family.QUO, Family.TRAN]


def naive_closure(gens, family, with_involution=False):
    """Pairwise fixpoint with plain sets; the reference for the engine."""
    out = set(gens)
    while True:
        new = set()
        for a in out:
            if with_involution:
                new.add(transpose(a))
            for b in out:
                new.add(meet(a, b))
                new.add(join(family, [a, b]))
        if new <= out:
            return out
        out |= new


def random_gens(rng, family, n, k):
    pool = list(enumerate_family(family, n))
    return rng.sample(pool, k)


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("inv", [False, True])
def test_engine_matches_naive_fixpoint(rng, family, inv):
    for _ in range(15):
        gens = random_gens(rng, family, 3, rng.randint(1, 4))
        assert close(gens, family, inv).element_set == naive_closure(gens, family, inv)


@pytest.mark.parametrize("family", FAMILIES)
def test_schedule_independence(rng, family):
    for _ in range(5):
        gens = random_gens(rng, family, 4, 3)
        ref = close(gens, family).element_set
        for seed in range(10):
            res = close(gens, family, order_seed=seed)
            assert res.element_set == ref
        assert close(gens, family, priority="fifo").element_set == ref


@pytest.mark.parametrize("family", FAMILIES)
def test_witnesses_replay(rng, family):
    for _ in range(10):
        gens = random_gens(rng, family, 4, 3)
        res = close(gens, family, with_involution=rng.random() < 0.5)
        assert res.replay()
        steps = res.derivation(range(len(res)))
        rebuilt = replay_steps(family, res.elements[: res.n_generators], steps)
        assert set(rebuilt.values()) == res.element_set


@given(st.sampled_from(FAMILIES), st.data())
def test_closure_operator_laws(family, data):
    xs = [data.draw(members(family, n=3)) for _ in range(data.draw(st.integers(1, 3)))]
    ys = xs + [data.draw(members(family, n=3))]
    cx = close(xs, family).element_set
    assert set(xs) <= cx
    assert cx <= close(ys, family).element_set
    assert close(list(cx), family).element_set == cx
    for a in cx:
        for b in cx:
            assert meet(a, b) in cx and join(family, [a, b]) in cx


def test_whole_family_from_atoms():
    for family, size in [(Family.EQU, 15), (Family.QUO, 355), (Family.TRAN, 3994)]:
        res = close(atoms(family, 4), family)
        assert len(res) == size and res.status is Status.COMPLETE


@pytest.mark.parametrize("family", FAMILIES)
def test_atom_criterion_agrees_with_full_enumeration(rng, family):
    for n in (3, 4):
        table = FamilyTable(family, GroundSet(n))
        seen = set()
        for ids in mixed_generator_ids(rng, table, 30):
            verdict = generates_whole([table.elements[i] for i in ids], family)
            full = bool(table.close(ids).all())
            assert (verdict.answer is Answer.YES) == full
            seen.add(full)
        assert seen == {True, False}


def test_family_table_matches_engine(rng):
    table = FamilyTable(Family.QUO, GroundSet(4))
    for _ in range(20):
        ids = rng.sample(range(len(table)), 3)
        inv = rng.random() < 0.5
        mask = table.close(ids, with_involution=inv)
        got = {table.elements[i] for i in mask.nonzero()[0]}
        assert got == close([table.elements[i] for i in ids], Family.QUO, inv).element_set


def test_small_grounds_use_enumeration():
    v = generates_whole([diagonal(2), from_pairs(2, [(0, 0), (1, 1), (0, 1)])], Family.QUO)
    assert v.answer is Answer.NO and v.method == "enumeration"
    q = [from_pairs(2, [(0, 0), (1, 1), (0, 1)]), from_pairs(2, [(0, 0), (1, 1), (1, 0)])]
    assert generates_whole(q, Family.QUO).answer is Answer.YES


def test_involution_doubles_generators():
    g = GroundSet(3)
    chain = [atom(Family.QUO, 0, 1, g), atom(Family.QUO, 1, 2, g)]
    assert len(expand_involution_genset(chain)) == 4
    assert generates_whole(chain, Family.QUO).answer is Answer.NO
    assert close(chain, Family.QUO, True).element_set == close(expand_involution_genset(chain), Family.QUO).element_set


def test_budget_yields_unknown_never_no():
    gens = atoms(Family.TRAN, 4)
    partial = close(gens[:8], Family.TRAN, budget=Budget(max_elements=50))
    assert partial.status is Status.BUDGET_EXHAUSTED and len(partial) == 50
    # eight of the ten Equ(5) atoms do generate, but a tiny budget cannot tell
    v = generates_whole(atoms(Family.EQU, 5)[:8], Family.EQU, budget=Budget(max_elements=10))
    assert v.answer is Answer.UNKNOWN
    assert close(gens, Family.TRAN, budget=Budget(max_ops=100)).status is Status.BUDGET_EXHAUSTED


def test_generators_are_validated():
    with pytest.raises(NotAMemberError):
        close([from_pairs(3, [(0, 1)])], Family.QUO)
    with pytest.raises(LatticeError):
        close([], Family.QUO)
    with pytest.raises(LatticeError):
        generates_whole([diagonal(3)], Family.REL)


def test_row_kernel_for_larger_grounds():
    g = GroundSet(12)
    gens = [atom(Family.EQU, i, i + 1, g) for i in range(0, 10, 2)]
    res = close(gens, Family.EQU)
    assert res.stats["kernel"] == "RowKernel"
    assert len(res) == 2**5
    assert res.replay()
