"""Prenex QBFs and the QDIMACS interchange format.

DNF matrices use the same line grammar under a ``p dnf <vars> <cubes>``
problem line, one cube per zero-terminated line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError, SourceSpan
from .model import Quantifier


@dataclass(frozen=True)
class Qbf:
    """``Q1 X1 ... Qn Xn . matrix`` with a CNF (clauses) or DNF (cubes) matrix."""

    prefix: tuple  # ((Quantifier, (var, ...)), ...)
    matrix: tuple  # ((lit, ...), ...)
    kind: str = "cnf"

    def __post_init__(self) -> None:
        if self.kind not in ("cnf", "dnf"):
            raise ValueError(f"matrix kind must be 'cnf' or 'dnf', not {self.kind!r}")
        if not self.prefix:
            raise ValueError("QBF prefix must be nonempty")
        seen: set[int] = set()
        for _, block in self.prefix:
            if not block:
                raise ValueError("quantifier blocks must be nonempty")
            for var in block:
                if var <= 0 or var in seen:
                    raise ValueError(f"variable {var} bound twice or not positive")
                seen.add(var)
        for line in self.matrix:
            for lit in line:
                if lit == 0 or abs(lit) not in seen:
                    raise ValueError(f"literal {lit} is not bound by the prefix")

    @property
    def variables(self) -> list[int]:
        return [v for _, block in self.prefix for v in block]

    def __str__(self) -> str:
        prefix = " ".join(f"{q.symbol}{','.join(f'x{v}' for v in vs)}" for q, vs in self.prefix)
        inner, outer = (" ∨ ", " ∧ ") if self.kind == "cnf" else (" ∧ ", " ∨ ")
        lines = [
            "(" + inner.join(("¬" if l < 0 else "") + f"x{abs(l)}" for l in line) + ")" for line in self.matrix
        ]
        return f"{prefix} {outer.join(lines) or ('⊤' if self.kind == 'cnf' else '⊥')}"


def parse_qdimacs(text: str, file: str = "<string>") -> Qbf:
    """Parse QDIMACS (or the ``p dnf`` variant) into a :class:`Qbf`.

    Matrix variables missing from the prefix are bound by an innermost
    existential block, as the QDIMACS standard prescribes.
    """
    kind = None
    nvars = nlines = 0
    prefix: list[tuple[Quantifier, tuple[int, ...]]] = []
    matrix: list[tuple[int, ...]] = []
    bound: set[int] = set()
    problem_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        span = SourceSpan(file, lineno, 1)
        fields = line.split()
        if fields[0] == "p":
            if kind is not None:
                raise ParseError("duplicate problem line", span)
            if len(fields) != 4 or fields[1] not in ("cnf", "dnf"):
                raise ParseError("malformed problem line; expected 'p cnf <vars> <clauses>'", span)
            try:
                nvars, nlines = int(fields[2]), int(fields[3])
            except ValueError:
                raise ParseError("malformed problem line; counts must be integers", span) from None
            if nvars < 0 or nlines < 0:
                raise ParseError("malformed problem line; counts must be non-negative", span)
            kind = fields[1]
            problem_line = lineno
            continue
        if kind is None:
            raise ParseError("missing problem line before content", span)
        if fields[0] in ("a", "e"):
            if matrix:
                raise ParseError("quantifier line after matrix lines", span)
            numbers = _numbers(fields[1:], span, nvars)
            if any(n < 0 for n in numbers):
                raise ParseError("negative variable in quantifier line", span)
            if not numbers:
                raise ParseError("empty quantifier block", span)
            for var in numbers:
                if var in bound:
                    raise ParseError(f"variable {var} quantified twice", span)
                bound.add(var)
            prefix.append((Quantifier.FORALL if fields[0] == "a" else Quantifier.EXISTS, tuple(numbers)))
            continue
        matrix.append(tuple(_numbers(fields, span, nvars)))

    if kind is None:
        raise ParseError("missing problem line", SourceSpan(file, 1, 1))
    if len(matrix) != nlines:
        raise ParseError(
            f"problem line declares {nlines} {'clauses' if kind == 'cnf' else 'cubes'}, found {len(matrix)}",
            SourceSpan(file, problem_line, 1),
        )
    free = sorted({abs(l) for line in matrix for l in line} - bound)
    if free:
        if prefix and prefix[-1][0] is Quantifier.EXISTS:
            prefix[-1] = (Quantifier.EXISTS, prefix[-1][1] + tuple(free))
        else:
            prefix.append((Quantifier.EXISTS, tuple(free)))
    if not prefix:
        # a closed formula without variables still needs one block to translate
        prefix.append((Quantifier.EXISTS, (max(nvars, 1),)))
    return Qbf(tuple(prefix), tuple(matrix), kind)


def _numbers(fields: list[str], span: SourceSpan, nvars: int) -> list[int]:
    if not fields or fields[-1] != "0":
        raise ParseError("line is not zero-terminated", span)
    numbers = []
    for text in fields[:-1]:
        try:
            value = int(text)
        except ValueError:
            raise ParseError(f"expected an integer, found {text!r}", span) from None
        if value == 0:
            raise ParseError("literal 0 inside a line", span)
        if abs(value) > nvars:
            raise ParseError(f"literal {value} out of declared range 1..{nvars}", span)
        numbers.append(value)
    return numbers


def dumps_qdimacs(qbf: Qbf) -> str:
    nvars = max(qbf.variables)
    lines = [f"p {qbf.kind} {nvars} {len(qbf.matrix)}"]
    for quantifier, block in qbf.prefix:
        tag = "a" if quantifier is Quantifier.FORALL else "e"
        lines.append(f"{tag} {' '.join(map(str, block))} 0")
    for line in qbf.matrix:
        lines.append(" ".join(map(str, line + (0,))))
    return "\n".join(lines) + "\n"
