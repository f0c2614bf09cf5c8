"""Herbrand instantiation with desugaring of intervals, choices and arithmetic.

Two instantiation strategies produce programs with the same answer sets:

* ``prune=True`` (default) computes an over-approximation of the derivable
  atoms (a fixpoint that ignores negation and aggregates) and only emits
  rule instances whose positive body lies inside it.  Joins are driven by
  the positive body atoms.
* ``prune=False`` substitutes every variable by every constant of the
  Herbrand universe.  It is exponential in the number of variables and only
  meant as a reference for small programs.

Substitutions always range over the Herbrand universe of the input.
Arithmetic is evaluated after substitution; an instance in which an
arithmetic expression is applied to a symbol is dropped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import GroundingError, SafetyError
from .model import (
    AUX_PREFIX,
    INT_MAX,
    INT_MIN,
    Aggregate,
    AggregateElement,
    Atom,
    BinOp,
    Choice,
    Comparison,
    Disjunction,
    HerbrandBase,
    Interval,
    Literal,
    Program,
    Rule,
    Variable,
    at,
    compare_constants,
    constant_key,
    program_constants,
)
from .safety import global_variables, unsafe_variables

DEFAULT_CONSTANT = "u0"


@dataclass(frozen=True)
class GroundProgram:
    """Variable-free rules with disjunctive heads; aggregates keep ground element lists."""

    rules: tuple
    base: HerbrandBase
    choice_atoms: frozenset = frozenset()
    universe: frozenset = field(default=frozenset(), compare=False)

    def as_program(self) -> Program:
        return Program(self.rules)

    def atoms(self) -> set[Atom]:
        return {a for r in self.rules for a in r.atoms()}

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules)


def complement_atom(atom: Atom) -> Atom:
    return Atom(f"{AUX_PREFIX}not_{atom.predicate}", atom.args)


class _IllFormed(Exception):
    """Arithmetic over a symbol: the instance does not exist."""


def _check_range(value: int) -> int:
    if value < INT_MIN or value > INT_MAX:
        raise GroundingError(f"integer overflow: {value} does not fit in 64 bits")
    return value


def _arith(op: str, a, b) -> int:
    if not isinstance(a, int) or not isinstance(b, int):
        raise _IllFormed
    if op == "+":
        return _check_range(a + b)
    if op == "-":
        return _check_range(a - b)
    if op == "*":
        return _check_range(a * b)
    if b == 0:
        raise GroundingError("division by zero")
    quotient = abs(a) // abs(b)
    return _check_range(quotient if (a < 0) == (b < 0) else -quotient)


def _eval(term, subst: dict):
    if isinstance(term, (int, str)):
        return term
    if isinstance(term, Variable):
        return subst[term]
    if isinstance(term, BinOp):
        return _arith(term.op, _eval(term.left, subst), _eval(term.right, subst))
    raise GroundingError(f"interval {term} is only allowed in facts")


def _eval_atom(atom: Atom, subst: dict) -> Atom:
    return Atom(atom.predicate, tuple(_eval(a, subst) for a in atom.args))


def evaluate_term(term, subst: dict | None = None):
    """Evaluate a ground (after ``subst``) term; raises GroundingError on overflow."""
    try:
        return _eval(term, subst or {})
    except _IllFormed:
        raise GroundingError(f"arithmetic on a non-integer in {term}") from None


def _term_vars(term, out: set) -> None:
    if isinstance(term, Variable):
        out.add(term)
    elif isinstance(term, BinOp):
        _term_vars(term.left, out)
        _term_vars(term.right, out)


def _vars_of(terms: Iterable) -> frozenset:
    out: set = set()
    for t in terms:
        _term_vars(t, out)
    return frozenset(out)


# --------------------------------------------------------------------------
# interval expansion and universe


def _has_interval(term) -> bool:
    if isinstance(term, Interval):
        return True
    if isinstance(term, BinOp):
        return _has_interval(term.left) or _has_interval(term.right)
    return False


def _expand_intervals(rules: Iterable[Rule]) -> list[Rule]:
    out = []
    for rule in rules:
        if isinstance(rule.head, Disjunction) and len(rule.head.atoms) == 1 and not rule.body:
            atom = rule.head.atoms[0]
            if any(_has_interval(a) for a in atom.args):
                choices = []
                for arg in atom.args:
                    if isinstance(arg, Interval):
                        lo, hi = evaluate_term(arg.lo), evaluate_term(arg.hi)
                        if not isinstance(lo, int) or not isinstance(hi, int):
                            raise GroundingError(f"interval bounds must be integers in {rule}")
                        choices.append(range(lo, hi + 1))
                    elif _has_interval(arg):
                        raise GroundingError(f"nested interval in {rule}")
                    else:
                        choices.append((arg,))
                for args in itertools.product(*choices):
                    out.append(Rule(Disjunction((Atom(atom.predicate, tuple(args)),))))
                continue
        for a in rule.atoms():
            if any(_has_interval(t) for t in a.args):
                raise GroundingError(f"intervals are only supported in facts: {rule}")
        out.append(rule)
    return out


def herbrand_universe(program: Program) -> frozenset:
    """Constants of ``program``; ``{u0}`` when there are none."""
    rules = _expand_intervals(program.rules)
    found = program_constants(Program(tuple(rules), program.fixes))
    return frozenset(found) if found else frozenset({DEFAULT_CONSTANT})


def herbrand_base(program: Program) -> HerbrandBase:
    return HerbrandBase(frozenset(at(program)), herbrand_universe(program))


# --------------------------------------------------------------------------
# atom store with per-argument indexes


class _Store:
    def __init__(self) -> None:
        self.atoms: dict[Atom, None] = {}
        self.by_sig: dict[tuple, list[Atom]] = {}
        self.index: dict[tuple, list[Atom]] = {}

    def add(self, atom: Atom) -> bool:
        if atom in self.atoms:
            return False
        self.atoms[atom] = None
        sig = (atom.predicate, len(atom.args))
        self.by_sig.setdefault(sig, []).append(atom)
        for pos, value in enumerate(atom.args):
            self.index.setdefault((sig, pos, value), []).append(atom)
        return True

    def __contains__(self, atom: Atom) -> bool:
        return atom in self.atoms


def _invert(term, value, subst: dict):
    """Solve ``term == value`` for its single unbound variable, if linear."""
    if not isinstance(term, BinOp) or term.op not in ("+", "-") or not isinstance(value, int):
        return None
    left, right = term.left, term.right
    if isinstance(left, Variable) and left not in subst and isinstance(right, int):
        return left, (value - right if term.op == "+" else value + right)
    if term.op == "+" and isinstance(right, Variable) and right not in subst and isinstance(left, int):
        return right, value - left
    return None


class _Pattern:
    """A positive body atom prepared for matching."""

    __slots__ = ("atom", "sig", "vars")

    def __init__(self, atom: Atom):
        self.atom = atom
        self.sig = atom.signature
        self.vars = _vars_of(atom.args)


def _bound_arg(arg, subst: dict):
    """Value of ``arg`` under ``subst`` or ``None`` if it still has free variables."""
    if isinstance(arg, (int, str)):
        return arg
    if isinstance(arg, Variable):
        return subst.get(arg)
    vars_ = set()
    _term_vars(arg, vars_)
    if all(v in subst for v in vars_):
        return _eval(arg, subst)
    return None


class _Matcher:
    def __init__(self, store: _Store, universe: frozenset):
        self.store = store
        self.universe = universe
        self.int_universe = sorted(c for c in universe if isinstance(c, int))

    def unify(self, pattern: _Pattern, atom: Atom, subst: dict) -> dict | None:
        new = dict(subst)
        deferred = []
        for arg, value in zip(pattern.atom.args, atom.args):
            if isinstance(arg, (int, str)):
                if arg != value:
                    return None
            elif isinstance(arg, Variable):
                known = new.get(arg)
                if known is None:
                    if value not in self.universe:
                        return None
                    new[arg] = value
                elif known != value:
                    return None
            else:
                deferred.append((arg, value))
        for arg, value in deferred:
            vars_ = set()
            _term_vars(arg, vars_)
            if all(v in new for v in vars_):
                if _eval(arg, new) != value:
                    return None
                continue
            solved = _invert(arg, value, new)
            if solved is None:
                return None
            var, val = solved
            if val not in self.universe:
                return None
            new[var] = val
            if _eval(arg, new) != value:
                return None
        return new

    def _matchable(self, pattern: _Pattern, subst: dict) -> bool:
        for arg in pattern.atom.args:
            if isinstance(arg, BinOp):
                free = [v for v in _vars_of((arg,)) if v not in subst]
                if len(free) > 1 or (free and _invert(arg, 0, subst) is None):
                    return False
        return True

    def candidates(self, pattern: _Pattern, subst: dict) -> list[Atom]:
        best = None
        for pos, arg in enumerate(pattern.atom.args):
            try:
                value = _bound_arg(arg, subst)
            except _IllFormed:
                return []
            if value is None:
                continue
            bucket = self.store.index.get((pattern.sig, pos, value), ())
            if best is None or len(bucket) < len(best):
                best = bucket
                if not best:
                    return []
        if best is None:
            return self.store.by_sig.get(pattern.sig, [])
        return list(best)

    def match(self, patterns: list[_Pattern], comparisons: list, subst: dict) -> Iterator[dict]:
        """All extensions of ``subst`` matching every pattern against the store."""
        if not patterns:
            if _comparisons_hold(comparisons, subst, final=True):
                yield subst
            return
        # fully bound patterns are membership tests: do them first
        chosen = None
        for i, p in enumerate(patterns):
            if p.vars.issubset(subst.keys()):
                chosen = i
                break
        if chosen is None:
            scored = []
            for i, p in enumerate(patterns):
                if not self._matchable(p, subst):
                    continue
                bound = sum(1 for a in p.atom.args if not isinstance(a, Variable) or a in subst)
                scored.append((-bound, len(self.store.by_sig.get(p.sig, ())), i))
            if not scored:
                # only non-linear arithmetic left: enumerate one variable over the integers
                var = next(v for p in patterns for v in sorted(p.vars, key=lambda v: v.name) if v not in subst)
                for value in self.int_universe:
                    extended = dict(subst)
                    extended[var] = value
                    if _comparisons_hold(comparisons, extended):
                        yield from self.match(patterns, comparisons, extended)
                return
            chosen = min(scored)[2]
        pattern = patterns[chosen]
        rest = patterns[:chosen] + patterns[chosen + 1 :]
        if pattern.vars.issubset(subst.keys()):
            try:
                atom = _eval_atom(pattern.atom, subst)
            except _IllFormed:
                return
            if atom in self.store:
                yield from self.match(rest, comparisons, subst)
            return
        try:
            cands = self.candidates(pattern, subst)
        except _IllFormed:
            return
        for atom in cands:
            try:
                extended = self.unify(pattern, atom, subst)
            except _IllFormed:
                continue
            if extended is None:
                continue
            if not _comparisons_hold(comparisons, extended):
                continue
            yield from self.match(rest, comparisons, extended)


def _comparisons_hold(comparisons: list, subst: dict, final: bool = False) -> bool:
    """Check every comparison whose variables are bound; ill-formed ones fail."""
    for comp, vars_ in comparisons:
        if not vars_.issubset(subst.keys()):
            if final:
                raise GroundingError(f"unbound variable in comparison {comp}")
            continue
        try:
            left = _eval(comp.left, subst)
            right = _eval(comp.right, subst)
        except _IllFormed:
            return False
        if not compare_constants(left, comp.op, right):
            return False
    return True


# --------------------------------------------------------------------------
# rule plans


@dataclass
class _ElementPlan:
    patterns: list
    comparisons: list
    literals: tuple  # non-comparison condition literals, in order
    locals_: list
    source: object


class _RulePlan:
    def __init__(self, rule: Rule):
        if unsafe_variables(rule):
            var = unsafe_variables(rule)[0]
            raise SafetyError(str(var), str(rule))
        self.rule = rule
        self.patterns = [_Pattern(l.atom) for l in rule.body if isinstance(l, Literal) and not l.negated]
        self.comparisons = [(c, _vars_of((c.left, c.right))) for c in rule.body if isinstance(c, Comparison)]
        self.global_vars = global_variables(rule)
        gset = set(self.global_vars)
        self.choice_elements: list[_ElementPlan] = []
        if isinstance(rule.head, Choice):
            for element in rule.head.elements:
                self.choice_elements.append(_element_plan(element, element.condition, gset, element.atom.args))
        self.aggregates: dict[int, list[_ElementPlan]] = {}
        for i, lit in enumerate(rule.body):
            if isinstance(lit, Aggregate):
                self.aggregates[i] = [_element_plan(e, e.condition, gset, e.terms) for e in lit.elements]
        self.body_sigs = {p.sig for p in self.patterns}
        self.element_sigs = {p.sig for element in self.choice_elements for p in element.patterns}


def _element_plan(source, condition: tuple, gset: set, head_terms: Iterable) -> _ElementPlan:
    patterns = [_Pattern(l.atom) for l in condition if isinstance(l, Literal) and not l.negated]
    comparisons = [(c, _vars_of((c.left, c.right))) for c in condition if isinstance(c, Comparison)]
    literals = tuple(l for l in condition if isinstance(l, Literal))
    every = set(_vars_of(head_terms))
    for lit in condition:
        if isinstance(lit, Literal):
            every |= _vars_of(lit.atom.args)
        else:
            every |= _vars_of((lit.left, lit.right))
    locals_ = sorted((v for v in every if v not in gset), key=lambda v: v.name)
    return _ElementPlan(patterns, comparisons, literals, locals_, source)


# --------------------------------------------------------------------------
# grounding


class _Grounder:
    def __init__(self, program: Program, prune: bool):
        self.prune = prune
        self.rules = _expand_intervals(program.rules)
        expanded = Program(tuple(self.rules), program.fixes)
        consts = program_constants(expanded)
        self.universe = frozenset(consts) if consts else frozenset({DEFAULT_CONSTANT})
        self.sorted_universe = sorted(self.universe, key=constant_key)
        self.signatures = set(at(expanded))
        self.fixes = program.fixes
        self.plans = [_RulePlan(r) for r in self.rules]
        self.store = _Store()
        self.matcher = _Matcher(self.store, self.universe)
        self.out: dict[Rule, None] = {}
        self.choice_atoms: dict[Atom, None] = {}

    # substitutions ---------------------------------------------------------
    def substitutions(self, plan: _RulePlan) -> Iterator[dict]:
        if self.prune:
            yield from self.matcher.match(plan.patterns, plan.comparisons, {})
            return
        for values in itertools.product(self.sorted_universe, repeat=len(plan.global_vars)):
            subst = dict(zip(plan.global_vars, values))
            if _comparisons_hold(plan.comparisons, subst, final=True):
                yield subst

    def element_substitutions(self, element: _ElementPlan, subst: dict) -> Iterator[dict]:
        if self.prune:
            yield from self.matcher.match(element.patterns, element.comparisons, subst)
            return
        for values in itertools.product(self.sorted_universe, repeat=len(element.locals_)):
            extended = dict(subst)
            extended.update(zip(element.locals_, values))
            if _comparisons_hold(element.comparisons, extended, final=True):
                yield extended

    # fixpoint over possibly-derivable atoms ---------------------------------
    def saturate(self) -> None:
        """Semi-naive fixpoint: after the first round a rule is only re-matched
        with at least one body atom drawn from the previous round's new atoms."""
        for fix in self.fixes:
            for atom in sorted(fix.atoms, key=_atom_sort_key):
                self.store.add(atom)
        delta = None
        while True:
            fresh: dict[tuple, list[Atom]] = {}
            for plan in self.plans:
                if delta is None or plan.element_sigs & delta.keys():
                    substs = self.substitutions(plan)
                elif plan.body_sigs & delta.keys():
                    substs = self._delta_substitutions(plan, delta)
                else:
                    continue
                for subst in substs:
                    for atom in self._possible_heads(plan, subst):
                        if self.store.add(atom):
                            fresh.setdefault(atom.signature, []).append(atom)
            if not fresh:
                return
            delta = fresh

    def _delta_substitutions(self, plan: _RulePlan, delta: dict) -> Iterator[dict]:
        patterns = plan.patterns
        for i, pattern in enumerate(patterns):
            for atom in delta.get(pattern.sig, ()):
                try:
                    subst = self.matcher.unify(pattern, atom, {})
                except _IllFormed:
                    continue
                if subst is None or not _comparisons_hold(plan.comparisons, subst):
                    continue
                yield from self.matcher.match(patterns[:i] + patterns[i + 1 :], plan.comparisons, subst)

    def _possible_heads(self, plan: _RulePlan, subst: dict) -> Iterator[Atom]:
        head = plan.rule.head
        try:
            if isinstance(head, Disjunction):
                for atom in head.atoms:
                    yield _eval_atom(atom, subst)
            else:
                for element in plan.choice_elements:
                    for ext in self.element_substitutions(element, subst):
                        try:
                            yield _eval_atom(element.source.atom, ext)
                        except _IllFormed:
                            continue
        except _IllFormed:
            return

    # instantiation ---------------------------------------------------------
    def instantiate(self) -> None:
        for plan in self.plans:
            if self.prune and not plan.global_vars and isinstance(plan.rule.head, Disjunction):
                # variable-free rules are kept verbatim so that ground(P) = P
                try:
                    if _comparisons_hold(plan.comparisons, {}, final=True):
                        self._emit(plan, {})
                except _IllFormed:
                    pass
                continue
            for subst in self.substitutions(plan):
                try:
                    self._emit(plan, subst)
                except _IllFormed:
                    continue
        for fix in self.fixes:
            for atom in sorted(fix.atoms, key=_atom_sort_key):
                self._add(Rule(Disjunction((atom,))))
        forbidden_candidates = self.store.atoms if self.prune else _fix_base_atoms(self.fixes)
        for atom in sorted(forbidden_candidates, key=_atom_sort_key):
            if any(atom in fix.base and atom not in fix.atoms for fix in self.fixes):
                self._add(Rule(Disjunction(()), (Literal(atom),)))

    def _add(self, rule: Rule) -> None:
        if len(rule.body) > 1:
            rule = Rule(rule.head, tuple(dict.fromkeys(rule.body)))
        self.out.setdefault(rule, None)

    def _ground_body(self, plan: _RulePlan, subst: dict) -> tuple | None:
        body = []
        for i, lit in enumerate(plan.rule.body):
            if isinstance(lit, Literal):
                body.append(Literal(_eval_atom(lit.atom, subst), lit.negated))
            elif isinstance(lit, Aggregate):
                body.append(self._ground_aggregate(lit, plan.aggregates[i], subst))
        return tuple(body)

    def _ground_aggregate(self, agg: Aggregate, elements: list[_ElementPlan], subst: dict) -> Aggregate:
        ground_elements: dict[AggregateElement, None] = {}
        for element in elements:
            for ext in self.element_substitutions(element, subst):
                try:
                    terms = tuple(_eval(t, ext) for t in element.source.terms)
                    cond = tuple(Literal(_eval_atom(l.atom, ext), l.negated) for l in element.literals)
                except _IllFormed:
                    continue
                if self.prune and any(not l.negated and l.atom not in self.store for l in cond):
                    continue
                ground_elements.setdefault(AggregateElement(terms, cond), None)
        bound = _eval(agg.bound, subst)
        return Aggregate(agg.function, tuple(ground_elements), agg.op, bound)

    def _emit(self, plan: _RulePlan, subst: dict) -> None:
        rule = plan.rule
        body = self._ground_body(plan, subst)
        if isinstance(rule.head, Disjunction):
            head = tuple(dict.fromkeys(_eval_atom(a, subst) for a in rule.head.atoms))
            self._add(Rule(Disjunction(head), body))
            return
        choice = rule.head
        count_elements: dict[AggregateElement, None] = {}
        for element in plan.choice_elements:
            for ext in self.element_substitutions(element, subst):
                try:
                    atom = _eval_atom(element.source.atom, ext)
                    cond = tuple(Literal(_eval_atom(l.atom, ext), l.negated) for l in element.literals)
                except _IllFormed:
                    continue
                if self.prune and any(not l.negated and l.atom not in self.store for l in cond):
                    continue
                aux = complement_atom(atom)
                self.choice_atoms.setdefault(aux, None)
                self._add(Rule(Disjunction((atom,)), body + cond + (Literal(aux, True),)))
                self._add(Rule(Disjunction((aux,)), body + cond + (Literal(atom, True),)))
                key = (atom.predicate,) + atom.args
                count_elements.setdefault(AggregateElement(key, (Literal(atom),) + cond), None)
        elements = tuple(count_elements)
        for bound, op in ((choice.lower, "<"), (choice.upper, ">")):
            if bound is None:
                continue
            value = _eval(bound, subst)
            if not isinstance(value, int):
                raise GroundingError(f"choice bound {value} is not an integer in {rule}")
            self._add(Rule(Disjunction(()), body + (Aggregate("count", elements, op, value),)))

    def result(self) -> GroundProgram:
        rules = tuple(self.out)
        constants = set(self.universe)
        signatures = set(self.signatures)
        for rule in rules:
            for atom in rule.atoms():
                constants.update(atom.args)
                signatures.add(atom.signature)
        base = HerbrandBase(frozenset(signatures), frozenset(constants))
        return GroundProgram(rules, base, frozenset(self.choice_atoms), self.universe)


def _atom_sort_key(atom: Atom) -> tuple:
    return (atom.predicate, tuple(constant_key(a) for a in atom.args))


def _fix_base_atoms(fixes: tuple) -> Iterator[Atom]:
    seen = set()
    for fix in fixes:
        for atom in fix.base:
            if atom not in seen:
                seen.add(atom)
                yield atom


def ground(program: Program, *, prune: bool = True) -> GroundProgram:
    """Instantiate ``program`` over its Herbrand universe."""
    grounder = _Grounder(program, prune)
    if prune:
        grounder.saturate()
    grounder.instantiate()
    return grounder.result()
