import itertools
import random
from pathlib import Path

import pytest

from qasp.model import Aggregate, Literal, atom_key, compare_constants

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

EXAMPLE1 = """\
%@exists
a(1) | a(2).
%@forall
b(1) | b(2) :- a(1).
b(2) :- a(2).
%@constraint
:- b(1), not b(2).
"""


# Definitional answer-set oracle.  Written against the textbook definitions
# only, with no code shared with the engine.


def _agg_ok(agg, interp):
    tuples = {e.terms for e in agg.elements if all((l.atom in interp) != l.negated for l in e.condition)}
    if agg.function == "count":
        value = len(tuples)
    else:
        value = sum(t[0] for t in tuples if isinstance(t[0], int))
    return compare_constants(value, agg.op, agg.bound)


def _body_true(body, interp):
    for lit in body:
        if isinstance(lit, Aggregate):
            if not _agg_ok(lit, interp):
                return False
        elif (lit.atom in interp) == lit.negated:
            return False
    return True


def _sat(rule, interp):
    return not _body_true(rule.body, interp) or any(a in interp for a in rule.head.atoms)


def definitional_answer_sets(rules, atoms):
    """Answer sets of ground ``rules`` by enumerating every subset of ``atoms``."""
    atoms = sorted(set(atoms), key=atom_key)
    constraints = [r for r in rules if r.is_constraint]
    proper = [r for r in rules if not r.is_constraint]
    found = set()
    for mask in range(1 << len(atoms)):
        interp = frozenset(a for i, a in enumerate(atoms) if mask >> i & 1)
        if not all(_sat(r, interp) for r in constraints):
            continue
        reduct = []
        for r in proper:
            if any(isinstance(l, Literal) and l.negated and l.atom in interp for l in r.body):
                continue
            if any(isinstance(l, Aggregate) and not _agg_ok(l, interp) for l in r.body):
                continue
            reduct.append((r.head.atoms, [l.atom for l in r.body if isinstance(l, Literal) and not l.negated]))

        def models(j):
            return all(not all(b in j for b in body) or any(h in j for h in heads) for heads, body in reduct)

        if not models(interp):
            continue
        members = sorted(interp, key=atom_key)
        minimal = True
        for size in range(len(members)):
            for sub in itertools.combinations(members, size):
                if models(frozenset(sub)):
                    minimal = False
                    break
            if not minimal:
                break
        if minimal:
            found.add(interp)
    return found


@pytest.fixture
def rng():
    return random.Random(1234)


# acceptance criteria report one line each in the terminal summary

ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
