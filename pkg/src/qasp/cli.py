"""Command-line interface: ``qasp solve | from-qbf | ground | selftest | gen``."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from pathlib import Path

from . import __version__
from .engine import DEFAULT_BRUTE_FORCE_CAP, brute_force_answer_sets, enumerate_answer_sets
from .errors import QaspError
from .grounder import ground
from .model import Program, QuantifiedProgram, Quantifier, format_interpretation, sorted_atoms
from .parser import dumps_aspq, parse_aspq, parse_program, parse_qdimacs
from .qbf import DEFAULT_QBF_CAP, eval_qbf, qbf_to_aspq, random_qbf
from .quantified import EvalStats, coherent, quantified_answer_sets
from .randprog import random_disjunctive_program, random_normal_program

EXIT_COHERENT = 10
EXIT_INCOHERENT = 20
EXIT_ERROR = 1
EXIT_DISAGREE = 2

JSON_SCHEMA = {
    "type": "object",
    "required": ["coherent", "stats"],
    "additionalProperties": False,
    "properties": {
        "coherent": {"type": "boolean"},
        "models": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
        "stats": {
            "type": "object",
            "required": ["levels", "time_ms"],
            "properties": {
                "levels": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["branches"],
                        "properties": {"branches": {"type": "integer", "minimum": 0}},
                    },
                },
                "time_ms": {"type": "integer", "minimum": 0},
            },
        },
        "trace": {"type": "object"},
    },
}


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with status 1, keeping the exit-code set closed."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def atom_cap(default: int) -> int:
    value = os.environ.get("QASP_ATOM_CAP")
    if not value:
        return default
    try:
        return int(value)
    except ValueError:
        raise QaspError(f"QASP_ATOM_CAP must be an integer, not {value!r}") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise QaspError(f"cannot read {path}: {exc.strerror}") from None


def load(path: str, instance: str | None = None) -> QuantifiedProgram:
    """Parse a ``.qasp`` file, appending the rules of ``instance`` to block 1."""
    qp = parse_aspq(_read(path), path)
    if instance is None:
        return qp
    extra = parse_program(_read(instance), instance)
    (quantifier, first), *rest = qp.blocks
    return QuantifiedProgram(((quantifier, first.union(extra)), *rest), qp.constraint)


# solve ---------------------------------------------------------------------


def cmd_solve(args) -> int:
    qp = load(args.path, args.instance)
    out = sys.stdout
    report: dict = {}
    if args.models is not None:
        limit = args.models or None
        stats = EvalStats()
        start = time.perf_counter()
        models = []
        stream = quantified_answer_sets(qp, stats=stats)
        verdict_printed = False
        for model in stream:
            models.append(model)
            if not args.json and not verdict_printed:
                out.write("COHERENT\n")
                verdict_printed = True
            if not args.json:
                out.write(format_interpretation(model) + "\n")
                out.flush()
            if limit is not None and len(models) >= limit:
                break
        is_coherent = bool(models)
        if not args.json and not verdict_printed:
            out.write("INCOHERENT\n")
        stats.time_ms = int((time.perf_counter() - start) * 1000)
        report["models"] = [[str(a) for a in sorted_atoms(m)] for m in models]
        trace = None
        if args.trace:
            trace = coherent(qp).trace
    else:
        verdict = coherent(qp, parallel=args.parallel)
        is_coherent = verdict.coherent
        stats = verdict.stats
        trace = verdict.trace if args.trace else None
        if not args.json:
            out.write("COHERENT\n" if is_coherent else "INCOHERENT\n")

    if trace is not None and not args.json:
        for line in trace.lines():
            out.write(f"% {line}\n")
    if args.json:
        doc = {
            "coherent": is_coherent,
            "stats": {"levels": [{"branches": b} for b in stats.branches], "time_ms": stats.time_ms},
        }
        if "models" in report:
            doc["models"] = report["models"]
        if trace is not None:
            doc["trace"] = trace.to_dict()
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    return EXIT_COHERENT if is_coherent else EXIT_INCOHERENT


# from-qbf --------------------------------------------------------------------


def cmd_from_qbf(args) -> int:
    qbf = parse_qdimacs(_read(args.path), args.path)
    qp = qbf_to_aspq(qbf)
    sys.stdout.write(dumps_aspq(qp))
    if not args.check:
        return 0
    valid = eval_qbf(qbf, cap=atom_cap(DEFAULT_QBF_CAP))
    solved = coherent(qp).coherent
    if valid != solved:
        sys.stdout.write(f"% DISAGREE: eval_qbf={str(valid).lower()} coherent={str(solved).lower()}\n")
        return EXIT_DISAGREE
    sys.stdout.write(f"% AGREE: {'valid' if valid else 'invalid'}\n")
    return 0


# ground ------------------------------------------------------------------------


def cmd_ground(args) -> int:
    qp = load(args.path)
    sections = [(q.value, p) for q, p in qp.blocks] + [("constraint", qp.constraint)]
    for name, program in sections:
        sys.stdout.write(f"%@{name}\n")
        for rule in ground(program).rules:
            sys.stdout.write(f"{rule}\n")
    return 0


# selftest ------------------------------------------------------------------------


def _sets(sets) -> str:
    return "[" + ", ".join(sorted(format_interpretation(s) for s in sets)) + "]"


def selftest(seed: int, counts=(200, 200, 500), log=None) -> bool:
    """Run the three randomized oracle sweeps; print counterexamples verbatim."""
    log = log or sys.stdout
    cap = atom_cap(DEFAULT_BRUTE_FORCE_CAP)
    qbf_cap = atom_cap(DEFAULT_QBF_CAP)
    n_engine, n_theorem, n_qbf = counts
    ok = True

    rng = random.Random(f"engine:{seed}")
    agree = 0
    for _ in range(n_engine):
        program = random_disjunctive_program(rng)
        g = ground(program)
        found = list(enumerate_answer_sets(g))
        expected = brute_force_answer_sets(g, cap=cap)
        if set(found) == expected and len(found) == len(expected):
            agree += 1
        else:
            ok = False
            log.write(f"engine counterexample:\n{program}\nengine: {_sets(found)}\noracle: {_sets(expected)}\n")

    rng = random.Random(f"theorem1:{seed}")
    agree_t = 0
    for _ in range(n_theorem):
        program = random_normal_program(rng)
        qp = QuantifiedProgram(((Quantifier.EXISTS, program),), Program())
        found = set(quantified_answer_sets(qp))
        expected = brute_force_answer_sets(ground(program), cap=cap)
        if found == expected:
            agree_t += 1
        else:
            ok = False
            log.write(f"theorem1 counterexample:\n{program}\nqas: {_sets(found)}\noracle: {_sets(expected)}\n")

    rng = random.Random(f"qbf:{seed}")
    agree_q = 0
    for _ in range(n_qbf):
        qbf = random_qbf(rng)
        expected = eval_qbf(qbf, cap=qbf_cap)
        got = coherent(qbf_to_aspq(qbf)).coherent
        if got == expected:
            agree_q += 1
        else:
            ok = False
            log.write(f"qbf counterexample: {qbf}\neval_qbf={expected} coherent={got}\n")

    log.write(
        f"engine: {agree}/{n_engine} agree; theorem1: {agree_t}/{n_theorem}; qbf: {agree_q}/{n_qbf}\n"
    )
    return ok


def cmd_selftest(args) -> int:
    return 0 if selftest(args.seed) else EXIT_DISAGREE


# gen -------------------------------------------------------------------------------


def cmd_gen(args) -> int:
    from .corpus import generate

    text, expected, value = generate(args.problem, args.seed, args.size, args.k)
    verdict = "COHERENT" if expected else "INCOHERENT"
    if args.out is None:
        sys.stdout.write(text)
        sys.stderr.write(f"expected: {verdict}\n")
        return 0
    out = Path(args.out)
    out.write_text(text)
    sidecar = {"problem": args.problem, "seed": args.seed, "size": args.size, "expected": verdict, "oracle": value}
    out.with_name(out.name + ".expected").write_text(json.dumps(sidecar, sort_keys=True) + "\n")
    return 0


# entry point -------------------------------------------------------------------------


def _models_arg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("model count must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qasp", description="Answer Set Programming with Quantifiers.")
    parser.add_argument("--version", action="version", version=f"qasp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="decide coherence of a .qasp program")
    p.add_argument("path")
    p.add_argument("instance", nargs="?", help="extra facts appended to the first block")
    p.add_argument(
        "--models",
        nargs="?",
        const=0,
        type=_models_arg,
        metavar="N",
        help="print quantified answer sets (all, or at most N)",
    )
    p.add_argument("--trace", action="store_true", help="print the witness chain")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--parallel", nargs="?", const=True, default=False, type=int, metavar="WORKERS")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("from-qbf", help="translate a QDIMACS (or p dnf) file")
    p.add_argument("path")
    p.add_argument("--check", action="store_true", help="compare eval_qbf with the solver")
    p.set_defaults(func=cmd_from_qbf)

    p = sub.add_parser("ground", help="print each section grounded standalone")
    p.add_argument("path")
    p.set_defaults(func=cmd_ground)

    p = sub.add_parser("selftest", help="randomized oracle sweeps")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("gen", help="generate a corpus instance with its expected verdict")
    p.add_argument("problem", choices=("minmax", "pebbling", "vc"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=3)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--out", default=None, help="write PATH and PATH.expected instead of standard output")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QaspError as exc:
        sys.stderr.write(f"qasp: {exc}\n")
        return EXIT_ERROR
    except (ValueError, RecursionError) as exc:
        sys.stderr.write(f"qasp: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
