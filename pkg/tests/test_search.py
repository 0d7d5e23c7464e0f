import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import members
from latforge.closure import Answer, generates_whole
from latforge.constructions import build_one_point_extension, build_zadori
from latforge.relation import Family, LatticeError, diagonal, from_pairs, is_member
from latforge.search import (
    Mode,
    Pattern,
    SearchSpec,
    apply_automorphism,
    automorphisms,
    delta_candidates,
    orbit_minimal,
    orders_to_tran_generators,
    search_delta,
    search_generating_sets,
)

FAMILIES = [Family.EQU, Family.QUO, Family.TRAN]


@settings(max_examples=60)
@given(st.sampled_from(FAMILIES), st.integers(3, 4), st.data())
def test_generation_is_invariant_under_automorphisms(family, n, data):
    gens = [data.draw(members(family, n=n)) for _ in range(data.draw(st.integers(2, 4)))]
    perm = data.draw(st.permutations(range(n)))
    flip = data.draw(st.booleans())
    moved = [apply_automorphism(g, perm, flip) for g in gens]
    assert generates_whole(gens, family).answer == generates_whole(moved, family).answer


def test_automorphism_group_size():
    assert len(list(automorphisms(4))) == 48


def test_orbit_minimal_picks_one_per_orbit():
    from latforge.relation import enumerate_family

    pool = list(enumerate_family(Family.QUO, 3))
    mask = orbit_minimal(pool)
    reps = [r for r, m in zip(pool, mask) if m]
    orbits = {frozenset(apply_automorphism(r, p, f) for p, f in automorphisms(3)) for r in pool}
    assert len(reps) == len(orbits)
    assert all(sum(r in o for r in reps) == 1 for o in orbits)


def test_prove_none_quo3_with_and_without_reduction():
    reduced = search_generating_sets(SearchSpec("QUO", 3, 3, mode=Mode.PROVE_NONE.value))
    full = search_generating_sets(SearchSpec("QUO", 3, 3, mode=Mode.PROVE_NONE.value, symmetry_reduction=False))
    assert full.examined == full.total_unreduced == 3654
    assert reduced.examined < full.examined
    assert reduced.complete and full.complete
    assert reduced.counts["YES"] == full.counts["YES"] == 0


def test_find_one_results_replay():
    res = search_generating_sets(SearchSpec("QUO", 3, 4))
    assert len(res.found) == 1 and not res.complete
    assert generates_whole(res.found[0], Family.QUO).answer is Answer.YES
    eq = search_generating_sets(SearchSpec("EQU", 4, 4))
    assert generates_whole(eq.found[0], Family.EQU).answer is Answer.YES


def test_find_all_matches_without_reduction_up_to_orbits():
    spec = dict(family="EQU", n=3, k=2, mode="FIND_ALL")
    full = search_generating_sets(SearchSpec(**spec, symmetry_reduction=False))
    red = search_generating_sets(SearchSpec(**spec))
    assert red.counts["YES"] <= full.counts["YES"]
    assert (red.counts["YES"] > 0) == (full.counts["YES"] > 0)


def test_checkpoint_resume_matches_uninterrupted(tmp_path):
    spec = SearchSpec("QUO", 3, 3, mode=Mode.PROVE_NONE.value, symmetry_reduction=False, max_candidates=1000)
    ck = tmp_path / "scan.json"
    first = search_generating_sets(spec, checkpoint=ck, checkpoint_every=250)
    assert not first.complete and first.resume_token == 1000
    data = json.loads(ck.read_text())
    assert set(data) >= {"spec_hash", "last_candidate_index", "verdict_counts"}
    assert data["last_candidate_index"] == 1000
    spec.max_candidates = None
    rest = search_generating_sets(spec, resume=ck, checkpoint=ck)
    assert rest.complete and rest.examined == 3654 - 1000
    total = rest.counts
    assert total["YES"] + total["NO"] == 3654


def test_resume_rejects_other_specs(tmp_path):
    ck = tmp_path / "scan.json"
    search_generating_sets(SearchSpec("QUO", 3, 2, mode="PROVE_NONE", max_candidates=5), checkpoint=ck)
    with pytest.raises(LatticeError):
        search_generating_sets(SearchSpec("QUO", 3, 3, mode="PROVE_NONE"), resume=ck)


def test_spec_validation():
    with pytest.raises(LatticeError):
        SearchSpec("QUO", 3, 3, pattern=Pattern.ONE_ONE_TWO.value)
    with pytest.raises(LatticeError):
        SearchSpec("QUO", 3, 0)
    with pytest.raises(ValueError):
        SearchSpec("QUO", 3, 2, mode="SOMETIMES")
    assert SearchSpec("quo", 3, 2).digest() == SearchSpec("QUO", 3, 2, max_candidates=9).digest()


def test_antisymmetric_involution_triple():
    res = search_generating_sets(
        SearchSpec("QUO", 3, 3, pattern="ALL_ANTISYMMETRIC", with_involution=True)
    )
    assert res.found
    stripped = orders_to_tran_generators(res.found[0])
    assert generates_whole(stripped, Family.TRAN, with_involution=True).answer is Answer.YES


def test_orders_to_tran_generators_rejects_non_orders():
    with pytest.raises(LatticeError):
        orders_to_tran_generators([from_pairs(2, [(0, 0), (1, 1), (0, 1), (1, 0)])])
    with pytest.raises(LatticeError):
        orders_to_tran_generators([from_pairs(2, [(0, 1)])])


def test_search_delta_on_extension():
    c = build_one_point_extension(build_zadori(2))
    cands = list(delta_candidates(c, 1))
    assert all(not is_member(Family.EQU, d) for _, d in cands)
    assert diagonal(c.ground) not in {d for _, d in cands}
    res = search_delta(c, candidates=[(("diag",), diagonal(c.ground))])
    assert res.found == [] and res.examined == 1
