"""Abstract syntax and semantic domains for quantified answer set programs.

Constants are plain Python values: ``int`` for integers and ``str`` for
symbolic constants.  Everything else (variables, arithmetic, atoms, rules)
is an immutable dataclass or named tuple, so programs can be hashed,
compared structurally and shared freely between evaluation branches.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Union

from .errors import NotNormalError

AUX_PREFIX = "_aux_"
COMPARISON_OPS = ("<", "<=", "=", "!=", ">=", ">")
ARITH_OPS = ("+", "-", "*", "/")
INT_MIN = -(2**63)
INT_MAX = 2**63 - 1


@dataclass(frozen=True)
class Variable:
    name: str

    @property
    def anonymous(self) -> bool:
        return self.name.startswith("_")

    def __str__(self) -> str:
        return "_" if self.anonymous else self.name


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        return _format_term(self)


@dataclass(frozen=True)
class Interval:
    """``lo..hi``; only legal as an argument of a fact."""

    lo: "Term"
    hi: "Term"

    def __str__(self) -> str:
        return f"{_format_term(self.lo)}..{_format_term(self.hi)}"


Term = Union[int, str, Variable, BinOp, Interval]
Constant = Union[int, str]

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def _format_term(term: Term) -> str:
    if isinstance(term, BinOp):
        prec = _PRECEDENCE[term.op]
        left = _format_term(term.left)
        right = _format_term(term.right)
        if isinstance(term.left, BinOp) and _PRECEDENCE[term.left.op] < prec:
            left = f"({left})"
        if isinstance(term.right, BinOp) and _PRECEDENCE[term.right.op] <= prec:
            right = f"({right})"
        if right.startswith("-"):
            right = f"({right})"
        return f"{left}{term.op}{right}"
    return str(term)


def constant_key(value: Constant) -> tuple:
    """Total order on constants: integers (numerically) before symbols."""
    if isinstance(value, int):
        return (0, value)
    return (1, value)


def compare_constants(left: Constant, op: str, right: Constant) -> bool:
    a, b = constant_key(left), constant_key(right)
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if op == ">=":
        return a >= b
    if op == ">":
        return a > b
    raise ValueError(f"unknown comparison operator {op!r}")


def term_variables(term: Term) -> Iterator[Variable]:
    if isinstance(term, Variable):
        yield term
    elif isinstance(term, (BinOp, Interval)):
        first, second = (term.left, term.right) if isinstance(term, BinOp) else (term.lo, term.hi)
        yield from term_variables(first)
        yield from term_variables(second)


def term_constants(term: Term) -> Iterator[Constant]:
    if isinstance(term, (int, str)):
        yield term
    elif isinstance(term, BinOp):
        yield from term_constants(term.left)
        yield from term_constants(term.right)
    elif isinstance(term, Interval):
        yield from term_constants(term.lo)
        yield from term_constants(term.hi)


class Atom(NamedTuple):
    predicate: str
    args: tuple = ()

    @property
    def signature(self) -> tuple[str, int]:
        return (self.predicate, len(self.args))

    @property
    def is_aux(self) -> bool:
        return self.predicate.startswith(AUX_PREFIX)

    def is_ground(self) -> bool:
        return all(isinstance(a, (int, str)) for a in self.args)

    def variables(self) -> Iterator[Variable]:
        for arg in self.args:
            yield from term_variables(arg)

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(_format_term(a) for a in self.args)})"

    def __repr__(self) -> str:
        return f"Atom({self})"


def atom_key(atom: Atom) -> tuple:
    """Deterministic enumeration order: predicate name, then arguments."""
    return (atom.predicate, tuple(constant_key(a) for a in atom.args))


def sorted_atoms(atoms: Iterable[Atom]) -> list[Atom]:
    return sorted(atoms, key=atom_key)


def format_interpretation(atoms: Iterable[Atom]) -> str:
    return "{" + ", ".join(str(a) for a in sorted_atoms(atoms)) + "}"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    def __str__(self) -> str:
        return f"not {self.atom}" if self.negated else str(self.atom)


@dataclass(frozen=True)
class Comparison:
    left: Term
    op: str
    right: Term

    def __str__(self) -> str:
        return f"{_format_term(self.left)} {self.op} {_format_term(self.right)}"


@dataclass(frozen=True)
class AggregateElement:
    terms: tuple
    condition: tuple = ()

    def __str__(self) -> str:
        text = ",".join(_format_term(t) for t in self.terms)
        if self.condition:
            text += " : " + ", ".join(str(c) for c in self.condition)
        return text


@dataclass(frozen=True)
class Aggregate:
    """``#count``/``#sum`` literal with a right-hand comparison ``op bound``."""

    function: str
    elements: tuple
    op: str
    bound: Term

    def __str__(self) -> str:
        inner = "; ".join(str(e) for e in self.elements)
        return f"#{self.function} {{ {inner} }} {self.op} {_format_term(self.bound)}"


BodyLiteral = Union[Literal, Comparison, Aggregate]


@dataclass(frozen=True)
class Disjunction:
    atoms: tuple = ()

    def __str__(self) -> str:
        return " | ".join(str(a) for a in self.atoms)


@dataclass(frozen=True)
class ChoiceElement:
    atom: Atom
    condition: tuple = ()

    def __str__(self) -> str:
        if not self.condition:
            return str(self.atom)
        return f"{self.atom} : {', '.join(str(c) for c in self.condition)}"


@dataclass(frozen=True)
class Choice:
    elements: tuple
    lower: Term | None = None
    upper: Term | None = None

    def __str__(self) -> str:
        text = "{ " + "; ".join(str(e) for e in self.elements) + " }"
        if self.lower is not None:
            text = f"{_format_term(self.lower)} {text}"
        if self.upper is not None:
            text = f"{text} {_format_term(self.upper)}"
        return text


Head = Union[Disjunction, Choice]


@dataclass(frozen=True)
class Rule:
    head: Head
    body: tuple = ()

    @property
    def is_constraint(self) -> bool:
        return isinstance(self.head, Disjunction) and not self.head.atoms

    @property
    def is_fact(self) -> bool:
        return isinstance(self.head, Disjunction) and len(self.head.atoms) == 1 and not self.body

    @property
    def is_normal(self) -> bool:
        """Normal after desugaring: choice rules expand into normal rules."""
        return isinstance(self.head, Choice) or len(self.head.atoms) <= 1

    @property
    def is_disjunctive(self) -> bool:
        return isinstance(self.head, Disjunction) and len(self.head.atoms) > 1

    def positive_body(self) -> list[Atom]:
        return [l.atom for l in self.body if isinstance(l, Literal) and not l.negated]

    def negative_body(self) -> list[Atom]:
        return [l.atom for l in self.body if isinstance(l, Literal) and l.negated]

    def atoms(self) -> Iterator[Atom]:
        """Every atom occurring in the rule, including inside aggregates and choices."""
        if isinstance(self.head, Disjunction):
            yield from self.head.atoms
        else:
            for element in self.head.elements:
                yield element.atom
                yield from _literal_atoms(element.condition)
        yield from _literal_atoms(self.body)

    def constants(self) -> Iterator[Constant]:
        for term in _rule_terms(self):
            yield from term_constants(term)

    def variables(self) -> set[Variable]:
        found: set[Variable] = set()
        for term in _rule_terms(self):
            found.update(term_variables(term))
        return found

    def __str__(self) -> str:
        head = str(self.head)
        if not self.body:
            return f"{head}." if head else ":- ."
        body = ", ".join(str(b) for b in self.body)
        return f"{head} :- {body}." if head else f":- {body}."


def _literal_atoms(literals: Iterable[BodyLiteral]) -> Iterator[Atom]:
    for lit in literals:
        if isinstance(lit, Literal):
            yield lit.atom
        elif isinstance(lit, Aggregate):
            for element in lit.elements:
                yield from _literal_atoms(element.condition)


def _literal_terms(literals: Iterable[BodyLiteral]) -> Iterator[Term]:
    for lit in literals:
        if isinstance(lit, Literal):
            yield from lit.atom.args
        elif isinstance(lit, Comparison):
            yield lit.left
            yield lit.right
        else:
            yield lit.bound
            for element in lit.elements:
                yield from element.terms
                yield from _literal_terms(element.condition)


def _rule_terms(rule: Rule) -> Iterator[Term]:
    head = rule.head
    if isinstance(head, Disjunction):
        for atom in head.atoms:
            yield from atom.args
    else:
        for bound in (head.lower, head.upper):
            if bound is not None:
                yield bound
        for element in head.elements:
            yield from element.atom.args
            yield from _literal_terms(element.condition)
    yield from _literal_terms(rule.body)


@dataclass(frozen=True)
class HerbrandBase:
    """All ground atoms over ``signatures`` and ``universe``.

    Kept symbolic: membership is a constant-time test and the atoms are only
    enumerated on demand, since the base of a program with ternary
    predicates easily runs into the thousands.
    """

    signatures: frozenset
    universe: frozenset

    def __contains__(self, atom: object) -> bool:
        if not isinstance(atom, Atom) or atom.signature not in self.signatures:
            return False
        universe = self.universe
        return all(a in universe for a in atom.args)

    def __iter__(self) -> Iterator[Atom]:
        constants = sorted(self.universe, key=constant_key)
        for name, arity in sorted(self.signatures):
            for args in itertools.product(constants, repeat=arity):
                yield Atom(name, args)

    def __len__(self) -> int:
        size = len(self.universe)
        return sum(size**arity for _, arity in self.signatures)

    def constants(self) -> frozenset:
        """Constants that literally occur in atoms of the base."""
        if any(arity > 0 for _, arity in self.signatures):
            return self.universe
        return frozenset()

    def without_aux(self) -> "HerbrandBase":
        sigs = frozenset(s for s in self.signatures if not s[0].startswith(AUX_PREFIX))
        return HerbrandBase(sigs, self.universe)


@dataclass(frozen=True)
class Fix:
    """The facts ``a.`` for ``a`` in ``atoms`` and constraints ``:- a.`` for the rest of ``base``."""

    base: HerbrandBase
    atoms: frozenset

    def rules(self) -> Iterator[Rule]:
        for atom in sorted_atoms(self.atoms):
            yield Rule(Disjunction((atom,)))
        for atom in self.base:
            if atom not in self.atoms:
                yield Rule(Disjunction(()), (Literal(atom),))


@dataclass(frozen=True)
class Program:
    """A finite set of rules, plus symbolic fix components."""

    rules: tuple = ()
    fixes: tuple = ()

    def __post_init__(self) -> None:
        if not isinstance(self.rules, tuple):
            object.__setattr__(self, "rules", tuple(self.rules))
        if not isinstance(self.fixes, tuple):
            object.__setattr__(self, "fixes", tuple(self.fixes))

    def expanded_rules(self) -> Iterator[Rule]:
        yield from self.rules
        for fix in self.fixes:
            yield from fix.rules()

    def union(self, other: "Program") -> "Program":
        return Program(self.rules + other.rules, self.fixes + other.fixes)

    def __len__(self) -> int:
        return len(self.rules)

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.expanded_rules())


class Quantifier(enum.Enum):
    EXISTS = "exists"
    FORALL = "forall"

    @property
    def symbol(self) -> str:
        return "∃" if self is Quantifier.EXISTS else "∀"


@dataclass(frozen=True)
class QuantifiedProgram:
    """``Q1 P1 Q2 P2 ... Qn Pn : C`` with ``n >= 1``."""

    blocks: tuple
    constraint: Program = Program()

    def __post_init__(self) -> None:
        if not isinstance(self.blocks, tuple):
            object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise ValueError("a quantified program needs at least one quantifier block")

    @property
    def is_existential(self) -> bool:
        return self.blocks[0][0] is Quantifier.EXISTS

    @property
    def quantifiers(self) -> tuple:
        return tuple(q for q, _ in self.blocks)

    def is_normal(self) -> bool:
        return all(r.is_normal for _, p in self.blocks for r in p.rules)


def at(program: Program) -> set[tuple[str, int]]:
    """Predicate/arity pairs occurring anywhere in ``program``."""
    found = {atom.signature for rule in program.rules for atom in rule.atoms()}
    for fix in program.fixes:
        found.update(fix.base.signatures)
        found.update(a.signature for a in fix.atoms)
    return found


def program_constants(program: Program) -> set:
    found = {c for rule in program.rules for c in rule.constants()}
    for fix in program.fixes:
        found.update(fix.base.constants())
        for atom in fix.atoms:
            found.update(atom.args)
    return found


def dependency_edges(program: Program) -> set[tuple[tuple, tuple, bool]]:
    """Edges ``(body_pred, head_pred, negative)`` of the predicate dependency graph.

    Choice heads contribute the negative self-loop of their desugared
    complement pair; aggregate elements count as negative dependencies.
    """
    edges: set[tuple[tuple, tuple, bool]] = set()
    for rule in program.rules:
        if isinstance(rule.head, Disjunction):
            heads = [(a.signature, ()) for a in rule.head.atoms]
        else:
            heads = [(e.atom.signature, e.condition) for e in rule.head.elements]
        for head, condition in heads:
            for lit in itertools.chain(rule.body, condition):
                for dep, negative in _literal_dependencies(lit):
                    edges.add((dep, head, negative))
            if isinstance(rule.head, Choice):
                edges.add((head, head, True))
    return edges


def _literal_dependencies(lit: BodyLiteral) -> Iterator[tuple[tuple, bool]]:
    if isinstance(lit, Literal):
        yield lit.atom.signature, lit.negated
    elif isinstance(lit, Aggregate):
        for element in lit.elements:
            for inner in element.condition:
                for dep, _ in _literal_dependencies(inner):
                    yield dep, True


def check_stratified(program: Program) -> bool:
    """True iff no cycle of the predicate dependency graph has a negative edge."""
    for rule in program.rules:
        if rule.is_disjunctive:
            raise NotNormalError(f"stratification is defined for normal programs; rule is disjunctive: {rule}")
    edges = dependency_edges(program)
    succ: dict[tuple, set[tuple]] = {}
    for src, dst, _ in edges:
        succ.setdefault(src, set()).add(dst)

    def reaches(start: tuple, goal: tuple) -> bool:
        seen = {start}
        stack = [start]
        while stack:
            node = stack.pop()
            if node == goal:
                return True
            for nxt in succ.get(node, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return False

    return not any(neg and reaches(dst, src) for src, dst, neg in edges)
