"""Experiment reports and YES-certificate replay.

A report is a JSON document::

    {
      "schema_version": "1.0",
      "experiment": "verify-zadori",
      "tool_version": "...",
      "parameters": {...}, "seed": 0, "input_digests": {...},
      "verdicts": [{"name", "expected", "observed", "status", "provenance", "claim"}],
      "stats": {...}, "budget": {...},
      "witnesses": [{"name", "family", "with_involution", "ground", "labels",
                     "generators", "steps", "target"}],
      "notes": [...], "exit_code": 0
    }

``status`` is PASS, FAIL, UNKNOWN or REFUTED.  ``provenance`` is one of
``oracle``, ``paper-identity`` or ``search-witness``.  ``claim`` says what a
FAIL would contradict: ``theorem`` and ``oracle`` failures are contradictions
(exit code 3); a failed ``conjecture`` is REFUTED and only makes the run
inconclusive (exit code 2), as does any UNKNOWN.

Witness ``steps`` are ``[id, op, parent, parent-or-null]`` with ``op`` in
``meet``, ``join``, ``inv``; generators take ids ``0..k-1``.  Replaying the
steps must produce every atom of the family (``target: "atoms"``) or the whole
enumerated family (``target: "family"``).  Witness ids depend on the worklist
schedule and are not part of the determinism guarantee.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .closure import Verdict, replay_steps
from .relation import Family, GroundSet, LatticeError, atoms, enumerate_family, from_pairs

SCHEMA_VERSION = "1.0"

PROVENANCE = ("oracle", "paper-identity", "search-witness")


@dataclass
class Report:
    experiment: str
    parameters: dict = field(default_factory=dict)
    seed: int | None = None
    verdicts: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    budget: dict = field(default_factory=dict)
    witnesses: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    input_digests: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)

    def check(self, name: str, expected: Any, observed: Any, provenance: str, claim: str = "theorem") -> bool:
        if provenance not in PROVENANCE:
            raise ValueError(f"unknown provenance {provenance!r}")
        ok = expected == observed
        if ok:
            status = "PASS"
        elif observed == "UNKNOWN":
            status = "UNKNOWN"
        elif claim == "conjecture":
            status = "REFUTED"
        else:
            status = "FAIL"
        self.verdicts.append(
            {
                "name": name,
                "expected": _jsonable(expected),
                "observed": _jsonable(observed),
                "status": status,
                "provenance": provenance,
                "claim": claim,
            }
        )
        return ok

    def unknown(self, name: str, detail: str, provenance: str = "search-witness") -> None:
        self.verdicts.append(
            {"name": name, "expected": "YES", "observed": "UNKNOWN", "status": "UNKNOWN",
             "provenance": provenance, "claim": "theorem", "detail": detail}
        )

    def add_witness(self, name: str, verdict: Verdict, generators: Sequence, with_involution: bool) -> None:
        c = verdict.closure
        ground = c.elements[0].ground
        steps = c.derivation(verdict.target_ids)
        self.witnesses.append(
            {
                "name": name,
                "family": c.family.value,
                "with_involution": with_involution,
                "ground": ground.size,
                "labels": list(ground.labels) if ground.labels else None,
                "generators": [sorted(map(list, g.pairs())) for g in c.elements[: c.n_generators]],
                "steps": [list(s) for s in steps],
                "target": "family" if verdict.method == "enumeration" else "atoms",
            }
        )

    def add_digest(self, path: str | Path) -> None:
        data = Path(path).read_bytes()
        self.input_digests[str(path)] = hashlib.sha256(data).hexdigest()

    @property
    def exit_code(self) -> int:
        statuses = {v["status"] for v in self.verdicts}
        if "FAIL" in statuses:
            return 3
        if statuses & {"UNKNOWN", "REFUTED"}:
            return 2
        return 0

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "experiment": self.experiment,
            "tool_version": __version__,
            "parameters": self.parameters,
            "seed": self.seed,
            "input_digests": self.input_digests,
            "verdicts": self.verdicts,
            "stats": self.stats,
            "budget": self.budget,
            "witnesses": self.witnesses,
            "tables": self.tables,
            "notes": self.notes,
            "exit_code": self.exit_code,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def summary_lines(self) -> list[str]:
        lines = [f"[{self.experiment}] " + ", ".join(f"{k}={v}" for k, v in self.parameters.items())]
        for v in self.verdicts:
            lines.append(f"  {v['status']:8s} {v['name']}: expected {v['expected']}, observed {v['observed']}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        lines.append(f"  exit code {self.exit_code}")
        return lines


def _jsonable(x):
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(y) for y in x)
    return str(x)


def replay_witness(w: dict) -> bool:
    """Re-derive a witness with the scalar relation operations and check its target."""
    ground = GroundSet(w["ground"], tuple(w["labels"]) if w.get("labels") else None)
    family = Family.parse(w["family"])
    gens = [from_pairs(ground, [tuple(p) for p in g]) for g in w["generators"]]
    steps = [(int(s[0]), str(s[1]), int(s[2]), None if s[3] is None else int(s[3])) for s in w["steps"]]
    if not w["with_involution"] and any(op == "inv" for _, op, _, _ in steps):
        return False
    known = replay_steps(family, gens, steps)
    got = set(known.values())
    if w["target"] == "atoms":
        if ground.size < 3:
            raise LatticeError("the atom target needs at least three points")
        return all(a in got for a in atoms(family, ground))
    if w["target"] == "family":
        return got == set(enumerate_family(family, ground))
    raise LatticeError(f"unknown witness target {w['target']!r}")


def replay_report(data: dict) -> list[tuple[str, bool]]:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise LatticeError(f"unsupported report schema {data.get('schema_version')!r}")
    return [(w["name"], replay_witness(w)) for w in data.get("witnesses", [])]
