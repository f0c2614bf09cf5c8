import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qasp.errors import NotNormalError
from qasp.grounder import ground
from qasp.model import (
    Atom,
    BinOp,
    HerbrandBase,
    Program,
    QuantifiedProgram,
    Quantifier,
    Variable,
    at,
    check_stratified,
    compare_constants,
    format_interpretation,
    sorted_atoms,
)
from qasp.parser import parse_program
from qasp.randprog import random_normal_program


@pytest.mark.parametrize(
    "source, expected",
    [
        ("a :- b.", {("a", 0), ("b", 0)}),
        ("a(1) | a(2).", {("a", 1)}),
        ("", set()),
        ("p(X) :- q(X), #count { Y : r(X,Y) } > 1.", {("p", 1), ("q", 1), ("r", 2)}),
        ("{ s(X) : t(X) } :- u.", {("s", 1), ("t", 1), ("u", 0)}),
    ],
)
def test_at(source, expected):
    assert at(parse_program(source)) == expected


def test_predicate_identity_includes_arity():
    sigs = at(parse_program("onNode(a,1). onNode(a,1,0)."))
    assert sigs == {("onNode", 2), ("onNode", 3)}


@pytest.mark.parametrize(
    "source, stratified",
    [
        ("p :- not q. q.", True),
        ("p :- not p.", False),
        ("ok1 :- x1. ok1 :- nx2. :- not ok1. ok2 :- x2. :- not ok2.", True),
        ("a :- not b. b :- not a.", False),
        ("a :- b. b :- a. c :- not a.", True),
        ("{ p }.", False),
        ("p :- #count { X : q(X) } > 0. q(1) :- p.", False),
    ],
)
def test_check_stratified(source, stratified):
    assert check_stratified(parse_program(source)) is stratified


def test_check_stratified_rejects_disjunction():
    with pytest.raises(NotNormalError):
        check_stratified(parse_program("a | b."))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.randoms(use_true_random=False))
def test_stratification_invariant_under_reordering(seed, shuffler):
    program = random_normal_program(random.Random(seed))
    rules = list(program.rules)
    shuffler.shuffle(rules)
    assert check_stratified(program) == check_stratified(Program(tuple(rules)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_at_of_ground_program_is_atoms_occurring(seed):
    g = ground(random_normal_program(random.Random(seed)))
    assert at(g.as_program()) == {a.signature for a in g.atoms()}


def test_quantified_program_needs_a_block():
    with pytest.raises(ValueError):
        QuantifiedProgram((), Program())


def test_term_printing_keeps_precedence():
    x = Variable("X")
    term = BinOp("*", BinOp("+", x, 1), BinOp("-", 2, x))
    assert str(term) == "(X+1)*(2-X)"


def test_constant_order_puts_integers_first():
    assert compare_constants(10, "<", "a")
    assert compare_constants(-3, "<", 2)
    assert sorted_atoms([Atom("p", ("b",)), Atom("p", (10,)), Atom("p", (2,))]) == [
        Atom("p", (2,)),
        Atom("p", (10,)),
        Atom("p", ("b",)),
    ]
    assert format_interpretation([Atom("b"), Atom("a", (1,))]) == "{a(1), b}"


def test_herbrand_base_is_symbolic():
    base = HerbrandBase(frozenset({("p", 2), ("q", 0)}), frozenset({1, 2, 3}))
    assert len(base) == 10
    assert Atom("p", (1, 3)) in base
    assert Atom("p", (1, 4)) not in base
    assert Atom("q") in base
    assert len(list(base)) == 10


def test_quantifier_symbols():
    assert Quantifier.EXISTS.symbol == "∃"
    assert Quantifier.FORALL.symbol == "∀"
