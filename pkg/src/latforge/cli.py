"""``latforge`` command line.

Every subcommand prints a short summary, optionally writes the JSON report
(``--json``) and exits with the report's exit code: 0 when every verdict is as
expected, 2 when something is UNKNOWN or a conjectural default is refuted, 3
on a contradiction.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from . import experiments as ex
from .closure import Budget
from .relation import LatticeError, dumps_rel, loads_rel
from .report import Report
from .search import SearchSpec


def _read_rels(path: str):
    return [r for _, r in loads_rel(Path(path).read_text())]


def _budget(args) -> Budget:
    kw = {}
    if args.budget_elems is not None:
        kw["max_elements"] = args.budget_elems
    if args.budget_ops is not None:
        kw["max_ops"] = args.budget_ops
    return Budget(**kw)


def _emit(report: Report, args) -> int:
    if args.seed is not None and report.seed is None:
        report.seed = args.seed
    for line in report.summary_lines():
        print(line)
    if args.json:
        Path(args.json).write_text(report.dumps())
    if getattr(args, "csv", None):
        Path(args.csv).write_text(ex.counts_csv(report))
    return report.exit_code


def _run(args) -> int:
    cmd = args.command
    seed = args.seed if args.seed is not None else 0
    if cmd == "verify-zadori":
        return _emit(ex.cmd_verify_zadori(args.n, _budget(args)), args)
    if cmd == "verify-delta":
        return _emit(ex.cmd_verify_delta(args.n, _budget(args), atom_search=not args.no_atom_search), args)
    if cmd == "verify-glued":
        text = Path(args.spec).read_text() if args.spec else None
        report = ex.cmd_verify_glued(text, t=args.t, budget=_budget(args), atom_search=args.atom_search)
        if args.spec:
            report.add_digest(args.spec)
        return _emit(report, args)
    if cmd == "verify-extension":
        text = Path(args.spec).read_text() if args.spec else None
        b = _budget(args) if args.budget_elems is not None or args.budget_ops is not None else None
        report = ex.cmd_verify_extension(args.n, text, b, args.max_atoms, args.max_candidates, seed)
        if args.spec:
            report.add_digest(args.spec)
        return _emit(report, args)
    if cmd == "verify-tran":
        return _emit(ex.cmd_verify_tran_gen(args.n, _budget(args)), args)
    if cmd == "verify-tran-inv":
        return _emit(ex.cmd_verify_tran_involution(args.n, _budget(args)), args)
    if cmd == "kulin":
        return _emit(ex.cmd_kulin_check(args.n, args.samples, seed, _budget(args)), args)
    if cmd == "counts":
        return _emit(ex.cmd_counts(args.nmax), args)
    if cmd == "search":
        spec = SearchSpec.from_dict(json.loads(Path(args.spec).read_text()))
        report = ex.cmd_search(spec, resume=args.resume, checkpoint=args.checkpoint or args.resume,
                               checkpoint_every=args.checkpoint_every)
        report.add_digest(args.spec)
        return _emit(report, args)
    if cmd == "closure":
        gens = _read_rels(args.gens)
        report, res = ex.cmd_closure(args.family, gens, args.involution, _budget(args))
        report.add_digest(args.gens)
        if args.out:
            Path(args.out).write_text("".join(dumps_rel(r, f"e{i}") for i, r in enumerate(res.elements)))
            side = [[i, *res.witnesses[i]] for i in sorted(res.witnesses)]
            Path(args.out + ".witness.json").write_text(json.dumps({"stats": report.stats, "witnesses": side}))
        return _emit(report, args)
    if cmd == "eval":
        binds = _read_rels(args.bind) if args.bind else []
        text, out = ex.cmd_eval(args.term, binds, args.family, args.ground)
        print(f"# {text}")
        sys.stdout.write(dumps_rel(out))
        return 0
    if cmd == "replay":
        data = json.loads(Path(args.report).read_text())
        report = ex.cmd_replay(data)
        report.add_digest(args.report)
        return _emit(report, args)
    raise AssertionError(cmd)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the JSON report here")
    common.add_argument("--seed", type=int, help="seed for sampled experiments (default 0)")
    common.add_argument("--budget-elems", type=int, help="closure element cap")
    common.add_argument("--budget-ops", type=int, help="closure lattice-operation cap")

    p = argparse.ArgumentParser(prog="latforge", description="Generating sets of relation lattices.")
    p.add_argument("--version", action="version", version=f"latforge {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-zadori", parents=[common], help="Equ generation by the F_n configuration")
    s.add_argument("--n", type=int, required=True)
    s = sub.add_parser("verify-delta", parents=[common], help="delta identities and Quo atom search")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--no-atom-search", action="store_true")
    s = sub.add_parser("verify-glued", parents=[common], help="glued configuration checks")
    s.add_argument("--spec", help=".cfg file (default: blocks 13 and --t)")
    s.add_argument("--t", type=int, default=16)
    s.add_argument("--atom-search", action="store_true", help="also run the budgeted Quo atom search")
    s = sub.add_parser("verify-extension", parents=[common], help="one-point extension of F_n")
    s.add_argument("--spec", help=".cfg file (default: F_n plus the default extension)")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--max-atoms", type=int, default=2)
    s.add_argument("--max-candidates", type=int, default=200)
    s = sub.add_parser("verify-tran", parents=[common], help="six generators of Tran(n)")
    s.add_argument("--n", type=int, required=True)
    s = sub.add_parser("verify-tran-inv", parents=[common], help="three generators of Tran(n) with involution")
    s.add_argument("--n", type=int, default=3)
    s = sub.add_parser("kulin", parents=[common], help="Equ(n) plus one quasiorder generates Quo(n)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--samples", type=int, default=50)
    s = sub.add_parser("counts", parents=[common], help="family sizes")
    s.add_argument("--nmax", type=int, default=5)
    s.add_argument("--csv", metavar="PATH", help="write the count table as CSV")
    s = sub.add_parser("search", parents=[common], help="exhaustive generating-set search")
    s.add_argument("--spec", required=True, help="JSON search spec")
    s.add_argument("--resume", help="checkpoint file to resume from")
    s.add_argument("--checkpoint", help="checkpoint file to write (default: the --resume file)")
    s.add_argument("--checkpoint-every", type=int, default=1_000_000)
    s = sub.add_parser("closure", parents=[common], help="close a .rel generator stream")
    s.add_argument("--family", required=True)
    s.add_argument("--gens", required=True)
    s.add_argument("--involution", action="store_true")
    s.add_argument("--out", help="write elements as a .rel stream plus a witness sidecar")
    s = sub.add_parser("eval", parents=[common], help="evaluate a term")
    s.add_argument("--term", required=True)
    s.add_argument("--bind", help=".rel stream binding v0, v1, ...")
    s.add_argument("--family", default="REL")
    s.add_argument("--ground", type=int, help="ground size for closed terms")
    s = sub.add_parser("replay", parents=[common], help="re-validate the witnesses of a report")
    s.add_argument("--report", required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (LatticeError, OSError, json.JSONDecodeError) as exc:
        print(f"latforge: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
