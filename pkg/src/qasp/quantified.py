"""Coherence and quantified answer sets of ASP(Q) programs.

Level ``i`` grounds ``P_i ∪ fix(B', M)``, where ``M`` is the answer set
chosen one level up and ``B'`` is the Herbrand base of that level's
combined program, and streams its answer sets.  Existential levels stop at
the first coherent continuation, universal levels at the first incoherent
one.  Only the current answer set of each level is held at any time.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .engine import EngineConfig, Solver
from .errors import EvaluationError
from .grounder import GroundProgram, ground
from .model import (
    AUX_PREFIX,
    Atom,
    Fix,
    HerbrandBase,
    Program,
    QuantifiedProgram,
    Quantifier,
    format_interpretation,
    sorted_atoms,
)

Hook = Callable[..., None]


def strip_aux(atoms) -> frozenset:
    return frozenset(a for a in atoms if not a.is_aux)


def fix(base: HerbrandBase, interpretation) -> Program:
    """Facts for ``interpretation`` and ``:- a.`` for every other atom of ``base``."""
    atoms = frozenset(interpretation)
    if any(name.startswith(AUX_PREFIX) for name, _ in base.signatures):
        raise EvaluationError("fix base must not contain auxiliary atoms")
    outside = [a for a in atoms if a not in base]
    if outside:
        raise EvaluationError(f"interpretation is not drawn from the base: {format_interpretation(outside)}")
    return Program(fixes=(Fix(base, atoms),))


def combine(next_program: Program, prev_base: HerbrandBase, interpretation) -> Program:
    """``next_program ∪ fix(prev_base, interpretation)``."""
    return next_program.union(fix(prev_base, interpretation))


@dataclass
class TraceNode:
    """One level of an evaluation.

    ``quantifier`` is ``None`` for the leaf that checks the constraint
    program.  ``chosen`` is the witness of a coherent existential level or
    the counterexample of an incoherent universal level, and ``child`` is
    the evaluation of the continuation under it.
    """

    level: int
    quantifier: Quantifier | None
    program: GroundProgram
    coherent: bool
    branches: int = 0
    chosen: frozenset | None = None
    child: "TraceNode | None" = None

    @property
    def role(self) -> str | None:
        if self.chosen is None:
            return None
        return "witness" if self.quantifier is Quantifier.EXISTS else "counterexample"

    def chain(self) -> Iterator["TraceNode"]:
        node = self
        while node is not None:
            yield node
            node = node.child

    def to_dict(self) -> dict:
        out: dict = {
            "level": self.level,
            "quantifier": self.quantifier.value if self.quantifier else "constraint",
            "coherent": self.coherent,
            "branches": self.branches,
        }
        if self.chosen is not None:
            out[self.role] = [str(a) for a in sorted_atoms(strip_aux(self.chosen))]
        if self.child is not None:
            out["child"] = self.child.to_dict()
        return out

    def lines(self) -> list[str]:
        out = []
        for node in self.chain():
            if node.quantifier is None:
                out.append(f"level {node.level} constraint: {'coherent' if node.coherent else 'incoherent'}")
                continue
            head = f"level {node.level} {node.quantifier.value}: {node.branches} branch(es)"
            if node.chosen is not None:
                head += f", {node.role} {format_interpretation(strip_aux(node.chosen))}"
            elif node.quantifier is Quantifier.EXISTS:
                head += ", no witness"
            else:
                head += ", no counterexample"
            out.append(head)
        return out


@dataclass
class EvalStats:
    branches: list = field(default_factory=list)  # answer sets explored per level
    time_ms: int = 0

    def count(self, level: int) -> None:
        while len(self.branches) < level:
            self.branches.append(0)
        self.branches[level - 1] += 1


@dataclass
class Verdict:
    coherent: bool
    trace: TraceNode
    stats: EvalStats


class _Evaluator:
    def __init__(self, qp: QuantifiedProgram, short_circuit: bool, hook: Hook | None, config: EngineConfig):
        self.qp = qp
        self.short_circuit = short_circuit
        self.hook = hook
        self.config = config
        self.stats = EvalStats(branches=[0] * len(qp.blocks))

    def emit(self, *event) -> None:
        if self.hook is not None:
            self.hook(*event)

    def evaluate(self, level: int, fixed: Program) -> TraceNode:
        """Evaluate the quantified program from block ``level`` (1-based) under ``fixed``."""
        blocks = self.qp.blocks
        if level > len(blocks):
            g = ground(self.qp.constraint.union(fixed))
            found = next(Solver(g, EngineConfig(limit=1)).answer_sets(), None)
            return TraceNode(level, None, g, found is not None)

        quantifier, program = blocks[level - 1]
        g = ground(program.union(fixed))
        base = g.base.without_aux()
        existential = quantifier is Quantifier.EXISTS
        node = TraceNode(level, quantifier, g, coherent=not existential)
        for answer_set in Solver(g, self.config).answer_sets():
            node.branches += 1
            self.stats.count(level)
            self.emit("branch", level, answer_set)
            child = self.evaluate(level + 1, fix(base, strip_aux(answer_set)))
            if child.coherent == existential and node.chosen is None:
                node.coherent = existential
                node.chosen = answer_set
                node.child = child
                if self.short_circuit:
                    return node
        self.emit("exhausted", level)
        return node


def coherent(
    qp: QuantifiedProgram,
    *,
    short_circuit: bool = True,
    hook: Hook | None = None,
    parallel: bool | int = False,
) -> Verdict:
    """Decide coherence of ``qp``.

    With ``parallel`` the answer sets of the first level are checked in
    worker processes, in ordered batches, so the verdict and the reported
    witness equal the sequential ones.  ``hook(event, level, ...)`` receives
    ``("branch", level, M)`` for every answer set taken from a level and
    ``("exhausted", level)`` when a level's stream runs out.
    """
    start = time.perf_counter()
    evaluator = _Evaluator(qp, short_circuit, hook, EngineConfig())
    if parallel and len(qp.blocks) >= 1:
        workers = parallel if isinstance(parallel, int) and parallel > 1 else (os.cpu_count() or 1)
        trace = _parallel_root(evaluator, workers)
    else:
        trace = evaluator.evaluate(1, Program())
    evaluator.stats.time_ms = int((time.perf_counter() - start) * 1000)
    return Verdict(trace.coherent, trace, evaluator.stats)


def _continuation(args) -> tuple:
    qp, short_circuit, base, answer_set = args
    evaluator = _Evaluator(qp, short_circuit, None, EngineConfig())
    child = evaluator.evaluate(2, fix(base, strip_aux(answer_set)))
    return child, evaluator.stats.branches


def _parallel_root(evaluator: _Evaluator, workers: int) -> TraceNode:
    qp = evaluator.qp
    quantifier, program = qp.blocks[0]
    g = ground(program)
    base = g.base.without_aux()
    existential = quantifier is Quantifier.EXISTS
    node = TraceNode(1, quantifier, g, coherent=not existential)
    stream = Solver(g, evaluator.config).answer_sets()
    batch_size = max(2 * workers, 1)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        while True:
            batch = [m for _, m in zip(range(batch_size), stream)]
            if not batch:
                break
            jobs = [(qp, evaluator.short_circuit, base, m) for m in batch]
            for answer_set, (child, branches) in zip(batch, pool.map(_continuation, jobs)):
                node.branches += 1
                evaluator.stats.count(1)
                for lvl, count in enumerate(branches[1:], start=2):
                    for _ in range(count):
                        evaluator.stats.count(lvl)
                evaluator.emit("branch", 1, answer_set)
                if child.coherent == existential and node.chosen is None:
                    node.coherent = existential
                    node.chosen = answer_set
                    node.child = child
            if node.chosen is not None and evaluator.short_circuit:
                return node
    evaluator.emit("exhausted", 1)
    return node


def quantified_answer_sets(
    qp: QuantifiedProgram, *, hook: Hook | None = None, stats: EvalStats | None = None
) -> Iterator[frozenset]:
    """Stream the answer sets ``M`` of ``P1`` whose continuation is coherent, without auxiliary atoms.

    Branch counts accumulate into ``stats`` when one is given.
    """
    if not qp.is_existential:
        raise EvaluationError("quantified answer sets defined only for existential programs")
    evaluator = _Evaluator(qp, True, hook, EngineConfig())
    if stats is not None:
        stats.branches = evaluator.stats.branches
    program = qp.blocks[0][1]
    g = ground(program)
    base = g.base.without_aux()
    for answer_set in Solver(g, evaluator.config).answer_sets():
        evaluator.stats.count(1)
        evaluator.emit("branch", 1, answer_set)
        visible = strip_aux(answer_set)
        if evaluator.evaluate(2, fix(base, visible)).coherent:
            yield visible
    evaluator.emit("exhausted", 1)


def replay(qp: QuantifiedProgram, trace: TraceNode) -> bool:
    """Re-derive a trace's recorded choices; True when every choice checks out.

    Each recorded answer set must be an answer set of the combined program at
    its level, and the leaf verdict must match a fresh check.
    """
    from .engine import is_answer_set

    fixed = Program()
    blocks = qp.blocks
    for node in trace.chain():
        if node.quantifier is None:
            g = ground(qp.constraint.union(fixed))
            found = next(Solver(g, EngineConfig(limit=1)).answer_sets(), None)
            return (found is not None) == node.coherent
        if node.chosen is None:
            return node.child is None
        g = ground(blocks[node.level - 1][1].union(fixed))
        if not is_answer_set(g, node.chosen):
            return False
        fixed = fix(g.base.without_aux(), strip_aux(node.chosen))
    return True
