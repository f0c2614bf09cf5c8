"""Translation of prenex QBFs into ASP(Q), plus a brute-force QBF evaluator.

Each variable ``x_i`` of block ``j`` contributes the guess pair
``x_i :- not nx_i.`` / ``nx_i :- not x_i.`` to block ``j``.  A CNF matrix
becomes ``ok_j :- σ(l).`` per literal and ``:- not ok_j.`` per clause; a
DNF matrix becomes ``ok_j :- σ(l_1), ..., σ(l_k).`` per cube and the single
constraint ``:- not ok_1, ..., not ok_m.``.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator

from .errors import CapExceeded
from .model import Atom, Disjunction, Literal, Program, QuantifiedProgram, Quantifier, Rule
from .qdimacs import Qbf

DEFAULT_QBF_CAP = 16


def pos_atom(var: int) -> Atom:
    return Atom(f"x{var}")


def neg_atom(var: int) -> Atom:
    return Atom(f"nx{var}")


def ok_atom(index: int) -> Atom:
    return Atom(f"ok{index}")


def sigma(lit: int) -> Atom:
    return pos_atom(lit) if lit > 0 else neg_atom(-lit)


def _rule(head: Atom | None, *body: Literal) -> Rule:
    return Rule(Disjunction(() if head is None else (head,)), tuple(body))


def qbf_to_aspq(qbf: Qbf) -> QuantifiedProgram:
    blocks = []
    for quantifier, variables in qbf.prefix:
        rules = []
        for v in variables:
            rules.append(_rule(pos_atom(v), Literal(neg_atom(v), True)))
            rules.append(_rule(neg_atom(v), Literal(pos_atom(v), True)))
        blocks.append((quantifier, Program(tuple(rules))))

    constraint = []
    if qbf.kind == "cnf":
        for j, clause in enumerate(qbf.matrix, start=1):
            for lit in clause:
                constraint.append(_rule(ok_atom(j), Literal(sigma(lit))))
            constraint.append(_rule(None, Literal(ok_atom(j), True)))
    else:
        for j, cube in enumerate(qbf.matrix, start=1):
            constraint.append(_rule(ok_atom(j), *(Literal(sigma(l)) for l in dict.fromkeys(cube))))
        oks = [Literal(ok_atom(j), True) for j in range(1, len(qbf.matrix) + 1)]
        if not oks:
            # an empty disjunction is false; ok0 is never derived
            oks = [Literal(ok_atom(0), True)]
        constraint.append(_rule(None, *oks))
    return QuantifiedProgram(tuple(blocks), Program(tuple(constraint)))


def _matrix_holds(qbf: Qbf, assignment: dict) -> bool:
    def value(lit: int) -> bool:
        return assignment[abs(lit)] == (lit > 0)

    if qbf.kind == "cnf":
        return all(any(value(l) for l in clause) for clause in qbf.matrix)
    return any(all(value(l) for l in cube) for cube in qbf.matrix)


def eval_qbf(qbf: Qbf, cap: int = DEFAULT_QBF_CAP) -> bool:
    """Truth value of ``qbf`` by expanding every quantifier block."""
    if len(qbf.variables) > cap:
        raise CapExceeded(f"QBF has {len(qbf.variables)} variables; evaluation is capped at {cap}")

    def expand(index: int, assignment: dict) -> bool:
        if index == len(qbf.prefix):
            return _matrix_holds(qbf, assignment)
        quantifier, variables = qbf.prefix[index]
        outcomes = (
            expand(index + 1, {**assignment, **dict(zip(variables, values))})
            for values in itertools.product((False, True), repeat=len(variables))
        )
        return any(outcomes) if quantifier is Quantifier.EXISTS else all(outcomes)

    return expand(0, {})


def random_qbf(
    rng: random.Random,
    *,
    max_vars: int = 8,
    max_blocks: int = 4,
    max_lines: int = 6,
    max_width: int = 3,
    kind: str | None = None,
) -> Qbf:
    """A random prenex QBF with alternating blocks."""
    nvars = rng.randint(1, max_vars)
    nblocks = rng.randint(1, min(max_blocks, nvars))
    cuts = sorted(rng.sample(range(1, nvars), nblocks - 1))
    bounds = [0] + cuts + [nvars]
    first = rng.choice((Quantifier.EXISTS, Quantifier.FORALL))
    other = Quantifier.FORALL if first is Quantifier.EXISTS else Quantifier.EXISTS
    prefix = tuple(
        (first if i % 2 == 0 else other, tuple(range(bounds[i] + 1, bounds[i + 1] + 1))) for i in range(nblocks)
    )
    kind = kind or rng.choice(("cnf", "dnf"))
    matrix = []
    for _ in range(rng.randint(0, max_lines)):
        width = rng.randint(1, min(max_width, nvars))
        variables = rng.sample(range(1, nvars + 1), width)
        matrix.append(tuple(v if rng.random() < 0.5 else -v for v in variables))
    return Qbf(prefix, tuple(matrix), kind)


def _prefixes(nvars: int, max_blocks: int) -> Iterator[tuple]:
    for nblocks in range(1, min(max_blocks, nvars) + 1):
        for cuts in itertools.combinations(range(1, nvars), nblocks - 1):
            bounds = (0,) + cuts + (nvars,)
            blocks = [tuple(range(bounds[i] + 1, bounds[i + 1] + 1)) for i in range(nblocks)]
            for first in (Quantifier.EXISTS, Quantifier.FORALL):
                other = Quantifier.FORALL if first is Quantifier.EXISTS else Quantifier.EXISTS
                yield tuple((first if i % 2 == 0 else other, b) for i, b in enumerate(blocks))


def _clauses(nvars: int) -> list[tuple]:
    """Every nonempty non-tautological clause over ``1..nvars`` (sorted by variable)."""
    out = []
    for width in range(1, nvars + 1):
        for variables in itertools.combinations(range(1, nvars + 1), width):
            for signs in itertools.product((1, -1), repeat=width):
                out.append(tuple(s * v for s, v in zip(signs, variables)))
    return out


def all_small_cnf_qbfs(max_vars: int = 3, max_clauses: int = 3, max_blocks: int = 3) -> Iterator[Qbf]:
    """Every CNF QBF up to the given sizes, modulo variable renaming and clause order.

    Variables are numbered ``1..n`` in prefix order; blocks are contiguous
    and alternate; the matrix is a set of distinct non-tautological clauses.
    """
    for nvars in range(1, max_vars + 1):
        clauses = _clauses(nvars)
        for prefix in _prefixes(nvars, max_blocks):
            for count in range(0, max_clauses + 1):
                for matrix in itertools.combinations(clauses, count):
                    yield Qbf(prefix, matrix, "cnf")


def translation_size(qbf: Qbf) -> tuple[int, int]:
    """(atoms, rules) the translation is expected to stay within."""
    nvars = len(qbf.variables)
    literals = sum(len(line) for line in qbf.matrix)
    lines = len(qbf.matrix)
    return 2 * nvars + lines + 1, 2 * nvars + literals + lines + 1
