"""Acceptance gate: one test per criterion, each with its time limit.

Every criterion records a PASS/FAIL line that is printed in the terminal
summary (see conftest).  Run directly with ``python3 tests/test_acceptance.py``
to get the same lines without pytest.
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import mixed_generator_ids  # noqa: E402
from latforge.closure import Answer, FamilyTable, close, generates_whole  # noqa: E402
from latforge.constructions import build_delta, build_zadori, delta_checks  # noqa: E402
from latforge.experiments import (  # noqa: E402
    KNOWN_COUNTS,
    circle_campaign,
    cmd_kulin_check,
    cmd_verify_extension,
    cmd_verify_tran_gen,
    cmd_verify_tran_involution,
    strip_campaign,
    zadori_generators,
)
from latforge.relation import Family, GroundSet, brute_force_family, enumerate_family, join, meet  # noqa: E402
from latforge.report import replay_report  # noqa: E402
from latforge.search import Mode, SearchSpec, search_generating_sets  # noqa: E402

RESULTS: list[str] = []


def _statuses(report) -> dict[str, str]:
    return {v["name"]: v["status"] for v in report.verdicts}


def criterion_1():
    problems = []
    for fam, counts in KNOWN_COUNTS.items():
        for n, want in enumerate(counts, 1):
            got = list(enumerate_family(fam, n))
            if len(got) != want:
                problems.append(f"{fam}({n})={len(got)}")
            if n <= 3 and got != brute_force_family(fam, n):
                problems.append(f"{fam}({n}) brute mismatch")
    return not problems, "counts match, brute filter agrees for n<=3" if not problems else "; ".join(problems)


def criterion_2():
    out = {}
    for n in (2, 3):
        v = generates_whole(zadori_generators(build_zadori(n)), Family.EQU)
        out[n] = (v.answer.value, len(v.closure))
    ok = all(a == "YES" for a, _ in out.values())
    return ok, f"F_2 {out[2][0]} ({out[2][1]} elements), F_3 {out[3][0]} ({out[3][1]} elements)"


def criterion_3():
    r = cmd_kulin_check(3)
    st = _statuses(r)
    ok = st["every_q_generates_quo"] == "PASS" and r.stats["candidates"] == 24
    return ok, f"{r.stats['candidates']} quasiorders, closure sizes {r.tables['closure_sizes']}"


def criterion_4():
    full = search_generating_sets(SearchSpec("QUO", 3, 3, mode=Mode.PROVE_NONE.value, symmetry_reduction=False))
    red = search_generating_sets(SearchSpec("QUO", 3, 3, mode=Mode.PROVE_NONE.value))
    one = search_generating_sets(SearchSpec("QUO", 3, 4))
    replay = bool(one.found) and generates_whole(one.found[0], Family.QUO).answer is Answer.YES
    ok = (
        full.complete and full.examined == 3654 and full.counts["YES"] == 0
        and red.complete and red.counts["YES"] == 0 and replay
    )
    return ok, (f"3-subsets examined {full.examined} (reduced {red.examined}), generating {full.counts['YES']}; "
                f"4-generating set found after {one.examined} candidates")


def criterion_5():
    bad = []
    for n in range(6, 11):
        c = build_zadori(n)
        checks = delta_checks(c, build_delta(c))
        bad += [f"n={n}:{k}" for k, v in checks.items() if not v]
    return not bad, "all four identities hold for n=6..10" if not bad else ", ".join(bad)


def criterion_6():
    res = strip_campaign(10_000, seed=6, n_max=6)
    return res["ok"] == res["instances"], f"{res['ok']}/{res['instances']} instances commute"


def criterion_7():
    res = circle_campaign(1000, seed=7, n_max=8)
    ok = res["quo_ok"] == res["equ_ok"] == res["instances"]
    return ok, f"quo {res['quo_ok']}/{res['instances']}, equ {res['equ_ok']}/{res['instances']}"


def criterion_8():
    out = {}
    for n in (3, 4):
        st = _statuses(cmd_verify_tran_gen(n))
        out[n] = st.get("six_generate_tran", "missing")
        if st.get("loop_identity_all_c") != "PASS":
            out[n] += " (identity failed)"
    return all(v == "PASS" for v in out.values()), f"n=3 {out[3]}, n=4 {out[4]}"


def criterion_9():
    r = cmd_verify_tran_involution(3)
    st = _statuses(r)
    need = ["antisymmetric_involution_triple", "stripped_triple_generates_tran_with_involution",
            "expanded_generates_quo_plainly"]
    ok = all(st.get(k) == "PASS" for k in need) and r.exit_code == 0
    return ok, ", ".join(f"{k}={st.get(k)}" for k in need)


def criterion_10():
    rng = random.Random(10)
    problems = []
    checked = replayed = 0
    for fam in (Family.EQU, Family.QUO, Family.TRAN):
        tables = {n: FamilyTable(fam, GroundSet(n)) for n in (3, 4)}
        answers = set()
        for i in range(200):
            t = tables[3 + i % 2]
            ids = mixed_generator_ids(rng, t, 2)[i % 2]
            gens = [t.elements[j] for j in ids]
            v = generates_whole(gens, fam)
            whole = bool(t.close(ids).all())
            answers.add(whole)
            checked += 1
            if (v.answer is Answer.YES) != whole:
                problems.append(f"{fam.value}: atom criterion disagrees")
            if i % 10 == 0:
                res = close(gens, fam, with_involution=i % 20 == 0)
                replayed += 1
                if not res.replay():
                    problems.append(f"{fam.value}: witness replay failed")
                ref = res.element_set
                for seed in range(10):
                    if close(gens, fam, res.with_involution, order_seed=seed).element_set != ref:
                        problems.append(f"{fam.value}: schedule dependence")
                if close(list(ref), fam).element_set != ref or not set(gens) <= ref:
                    problems.append(f"{fam.value}: closure law")
                sample = rng.sample(sorted(ref, key=lambda r: r.bits), min(len(ref), 30))
                if any(meet(a, b) not in ref or join(fam, [a, b]) not in ref for a in sample for b in sample):
                    problems.append(f"{fam.value}: not closed")
        if answers != {True, False}:
            problems.append(f"{fam.value}: sample saw only one answer")
    detail = f"{checked} generator sets, {replayed} closures replayed and reshuffled 10x"
    return not problems, detail if not problems else "; ".join(sorted(set(problems)))


def criterion_11():
    r = cmd_verify_extension(2)
    witnessed = all(ok for _, ok in replay_report(r.to_dict()))
    verdict = "YES" if r.exit_code == 0 else "UNKNOWN" if r.exit_code == 2 else "CONTRADICTION"
    ok = r.exit_code in (0, 2) and witnessed
    return ok, f"extension F_2+x: {verdict}, exit code {r.exit_code}, witnesses replay {witnessed}"


CRITERIA = {
    1: ("counting oracle", criterion_1, 60),
    2: ("Zadori generation of Equ", criterion_2, 10),
    3: ("Equ plus one quasiorder generates Quo(3)", criterion_3, 10),
    4: ("Quo(3) needs four generators", criterion_4, 300),
    5: ("delta identities n=6..10", criterion_5, 10),
    6: ("diagonal stripping commutes with terms", criterion_6, 120),
    7: ("circle identities", criterion_7, 30),
    8: ("Tran six-generated, n=3,4", criterion_8, 300),
    9: ("Tran three-generated with involution, n=3", criterion_9, 300),
    10: ("engine properties", criterion_10, 600),
    11: ("one-point extension gate", criterion_11, 600),
}


def run_criterion(k: int) -> tuple[bool, str, float]:
    name, fn, limit = CRITERIA[k]
    t0 = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - t0
    in_time = elapsed < limit
    status = "PASS" if ok and in_time else "FAIL"
    timing = f"{elapsed:.2f}s < {limit}s" if in_time else f"{elapsed:.2f}s exceeds {limit}s"
    line = f"criterion {k:2d} {status}: {name}; {detail} [{timing}]"
    RESULTS.append(line)
    print(line)
    return ok and in_time, line, elapsed


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    ok, line, _ = run_criterion(k)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(k)[0] for k in sorted(CRITERIA)]
    sys.exit(0 if all(results) else 1)
