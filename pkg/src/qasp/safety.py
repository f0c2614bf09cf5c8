"""Rule safety: every variable must be bound by a positive body atom."""

from __future__ import annotations

from typing import Iterable

from .model import (
    Aggregate,
    Choice,
    Comparison,
    Literal,
    Rule,
    Variable,
    term_variables,
)


def _ordered(found: list[Variable], terms: Iterable) -> None:
    for term in terms:
        for var in term_variables(term):
            if var not in found:
                found.append(var)


def _literal_vars(literals: Iterable, *, positive_only: bool = False, skip_aggregates: bool = True) -> list[Variable]:
    found: list[Variable] = []
    for lit in literals:
        if isinstance(lit, Literal):
            if positive_only and lit.negated:
                continue
            _ordered(found, lit.atom.args)
        elif isinstance(lit, Comparison):
            if not positive_only:
                _ordered(found, (lit.left, lit.right))
        elif isinstance(lit, Aggregate) and not positive_only:
            _ordered(found, (lit.bound,))
            if not skip_aggregates:
                for element in lit.elements:
                    _ordered(found, element.terms)
                    found.extend(v for v in _literal_vars(element.condition) if v not in found)
    return found


def global_variables(rule: Rule) -> list[Variable]:
    """Variables occurring outside every choice/aggregate element, in order of appearance."""
    found: list[Variable] = []
    if isinstance(rule.head, Choice):
        _ordered(found, [b for b in (rule.head.lower, rule.head.upper) if b is not None])
    else:
        for atom in rule.head.atoms:
            _ordered(found, atom.args)
    for var in _literal_vars(rule.body):
        if var not in found:
            found.append(var)
    return found


def unsafe_variables(rule: Rule) -> list[Variable]:
    """Return the unsafe variables of ``rule`` (empty when the rule is safe)."""
    bound = set(_literal_vars(rule.body, positive_only=True))
    glob = global_variables(rule)
    unsafe = [v for v in glob if v not in bound]
    gset = set(glob)

    elements: list[tuple[list, tuple]] = []
    if isinstance(rule.head, Choice):
        for element in rule.head.elements:
            terms: list[Variable] = []
            _ordered(terms, element.atom.args)
            elements.append((terms, element.condition))
    for lit in rule.body:
        if isinstance(lit, Aggregate):
            for element in lit.elements:
                terms = []
                _ordered(terms, element.terms)
                elements.append((terms, element.condition))

    for head_vars, condition in elements:
        local_bound = set(_literal_vars(condition, positive_only=True))
        every = list(head_vars) + [v for v in _literal_vars(condition) if v not in head_vars]
        for var in every:
            if var in gset:
                if var not in bound and var not in unsafe:
                    unsafe.append(var)
            elif var not in local_bound and var not in unsafe:
                unsafe.append(var)
    return unsafe
