import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CORPUS, EXAMPLE1
from qasp.errors import ParseError, SafetyError, StratificationError
from qasp.model import (
    Aggregate,
    AggregateElement,
    Atom,
    BinOp,
    Choice,
    ChoiceElement,
    Comparison,
    Disjunction,
    Literal,
    Program,
    QuantifiedProgram,
    Quantifier,
    Rule,
    Variable,
)
from qasp.parser import dumps_aspq, dumps_program, parse_aspq, parse_program, parse_qdimacs
from qasp.qdimacs import Qbf, dumps_qdimacs

E, A = Quantifier.EXISTS, Quantifier.FORALL


def test_two_level_structure():
    qp = parse_aspq(EXAMPLE1)
    assert qp.quantifiers == (E, A)
    (_, p1), (_, p2) = qp.blocks
    assert p1.rules == (Rule(Disjunction((Atom("a", (1,)), Atom("a", (2,))))),)
    assert len(p2.rules) == 2
    assert qp.constraint.rules == (
        Rule(Disjunction(()), (Literal(Atom("b", (1,))), Literal(Atom("b", (2,)), True))),
    )


@pytest.mark.parametrize(
    "text, error, fragment",
    [
        ("%@exists\np(X) :- not q(X).\n%@constraint\n", SafetyError, "X"),
        ("%@constraint\n:- a.\n", ParseError, "empty prefix"),
        ("%@exists\na.\n", ParseError, "missing %@constraint"),
        ("%@exists\na.\n%@constraint\np :- not p.\n", StratificationError, "constraint section not stratified"),
        ("%@exists\na.\n%@constraint\na | b.\n", ParseError, "normal"),
        ("a.\n%@exists\n%@constraint\n", ParseError, "outside of any section"),
        ("%@exists\n%@constraint\n%@forall\n", ParseError, "last section"),
        ("%@exists\na :- b\n%@constraint\n", ParseError, "expected"),
        ("%@sometimes\n", ParseError, "unknown directive"),
        ("%@exists\np(f(1)).\n%@constraint\n", ParseError, "function terms"),
        ("%@exists\n:- #max { X : p(X) } > 1.\n%@constraint\n", ParseError, "#max"),
    ],
)
def test_parse_errors(text, error, fragment):
    with pytest.raises(error) as info:
        parse_aspq(text, "f.qasp")
    assert fragment in str(info.value)


def test_safety_error_names_variable_and_location():
    with pytest.raises(SafetyError) as info:
        parse_aspq("%@exists\nq(1).\np(X, Y) :- q(X), not r(Y).\n%@constraint\n", "f.qasp")
    assert info.value.variable == "Y"
    assert info.value.span.line == 3
    assert str(info.value).startswith("f.qasp:3:1:")


def test_syntax_error_span():
    with pytest.raises(ParseError) as info:
        parse_program("a.\nb :- c d.", "g.lp")
    assert (info.value.span.line, info.value.span.column) == (2, 8)


def test_aggregate_local_variables_must_be_bound():
    with pytest.raises(SafetyError):
        parse_program(":- #count { X : not p(X) } > 1.")
    parse_program(":- #count { X : p(X), not q(X) } > 1.")


def test_surface_forms():
    rules = parse_program(
        "1 { f(X,Y) : setJ(Y) } 1 :- setI(X).\n"
        ":- #sum { N,X : onNode(X,N) } != K, total(K).\n"
        "pebble(0..3).\n"
        "onNode(X,N-2,S) :- onNode(X,N,S-1), move(X,Y,S).\n"
        "ok :- 2 < #count { X : p(X) }, q.\n"
        "setI(X) :- v(X,_,_).\n"
    ).rules
    assert isinstance(rules[0].head, Choice) and rules[0].head.lower == 1 and rules[0].head.upper == 1
    assert rules[1].body[0].function == "sum" and rules[1].body[0].op == "!="
    assert str(rules[2]) == "pebble(0..3)."
    assert rules[3].head.atoms[0].args[1] == BinOp("-", Variable("N"), 2)
    agg = rules[4].body[0]
    assert (agg.op, agg.bound) == (">", 2)
    assert str(rules[5]) == "setI(X) :- v(X,_,_)."


def test_comments_are_ignored():
    qp = parse_aspq("% header\n%@exists\na. % trailing\n%@constraint\n% done\n")
    assert len(qp.blocks[0][1].rules) == 1


def test_directive_must_start_line():
    with pytest.raises(ParseError):
        parse_aspq("%@exists\na. %@forall\n%@constraint\n")


def test_plain_programs_reject_directives():
    with pytest.raises(ParseError):
        parse_program("%@exists\na.")


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.qasp")), ids=lambda p: p.name)
def test_corpus_round_trip(path):
    qp = parse_aspq(path.read_text())
    assert parse_aspq(dumps_aspq(qp)) == qp


# random abstract syntax for the round-trip property

VARS = [Variable(n) for n in ("X", "Y", "Z")]
SYMBOLS = ["a", "b", "c1", "node_x"]
PREDS = [("p", 1), ("q", 2), ("r", 0), ("edge", 2), ("_aux_not_p", 1)]

constants = st.one_of(st.integers(-20, 20), st.sampled_from(SYMBOLS))


@st.composite
def simple_atoms(draw, pool):
    name, arity = draw(st.sampled_from(PREDS))
    args = []
    for _ in range(arity):
        args.append(draw(st.one_of(constants, st.sampled_from(pool)) if pool else constants))
    return Atom(name, tuple(args))


@st.composite
def terms(draw, pool):
    base = draw(st.one_of(constants, st.sampled_from(pool)) if pool else constants)
    if pool and draw(st.booleans()):
        op = draw(st.sampled_from("+-*/"))
        return BinOp(op, draw(st.sampled_from(pool)), draw(st.integers(-5, 5)))
    return base


@st.composite
def rules(draw, allow_choice=True, constraint_only=False):
    pool = draw(st.lists(st.sampled_from(VARS), max_size=3, unique=True))
    body = []
    for var in pool:
        # bind every variable positively
        body.append(Literal(Atom("q", (var, draw(constants)))))
    for _ in range(draw(st.integers(0, 2))):
        body.append(Literal(draw(simple_atoms(pool)), draw(st.booleans())))
    if pool and draw(st.booleans()):
        body.append(Comparison(draw(terms(pool)), draw(st.sampled_from(["<", "<=", "=", "!=", ">", ">="])), draw(terms(pool))))
    if draw(st.booleans()):
        local = Variable("W")
        element = AggregateElement((local,), (Literal(Atom("p", (local,))),))
        body.append(Aggregate(draw(st.sampled_from(["count", "sum"])), (element,), ">=", draw(terms(pool))))
    if constraint_only:
        return Rule(Disjunction(()), tuple(body) or (Literal(Atom("r")),))
    kind = draw(st.integers(0, 2 if allow_choice else 1))
    if kind == 0:
        heads = tuple(dict.fromkeys(draw(st.lists(simple_atoms(pool), min_size=1, max_size=3))))
        return Rule(Disjunction(heads), tuple(body))
    if kind == 1:
        return Rule(Disjunction(()), tuple(body) or (Literal(Atom("r")),))
    local = Variable("V")
    element = ChoiceElement(Atom("p", (local,)), (Literal(Atom("edge", (local, draw(constants)))),))
    lower = draw(st.one_of(st.none(), st.integers(0, 3)))
    upper = draw(st.one_of(st.none(), st.integers(0, 3)))
    return Rule(Choice((element,), lower, upper), tuple(body))


@st.composite
def quantified_programs(draw):
    blocks = []
    for _ in range(draw(st.integers(1, 3))):
        blocks.append((draw(st.sampled_from([E, A])), Program(tuple(draw(st.lists(rules(), max_size=4))))))
    constraint = Program(tuple(draw(st.lists(rules(constraint_only=True), max_size=3))))
    return QuantifiedProgram(tuple(blocks), constraint)


@settings(max_examples=200, deadline=None)
@given(quantified_programs())
def test_round_trip_property(qp):
    text = dumps_aspq(qp)
    assert parse_aspq(text) == qp
    assert dumps_aspq(parse_aspq(text)) == text


@settings(max_examples=100, deadline=None)
@given(st.lists(rules(), max_size=6))
def test_program_round_trip(rule_list):
    program = Program(tuple(rule_list))
    assert parse_program(dumps_program(program)) == program


# QDIMACS


@pytest.mark.parametrize(
    "text, prefix, matrix",
    [
        ("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n", ((A, (1,)), (E, (2,))), ((1, 2), (-1, -2))),
        ("p cnf 1 1\n1 0\n", ((E, (1,)),), ((1,),)),
        ("c comment\np cnf 3 1\na 1 0\n1 -3 2 0\n", ((A, (1,)), (E, (2, 3))), ((1, -3, 2),)),
        ("p cnf 2 1\ne 1 0\n-2 0\n", ((E, (1, 2)),), ((-2,),)),
    ],
)
def test_parse_qdimacs(text, prefix, matrix):
    qbf = parse_qdimacs(text)
    assert qbf.prefix == prefix
    assert qbf.matrix == matrix
    assert qbf.kind == "cnf"


def test_parse_dnf_variant():
    qbf = parse_qdimacs("p dnf 2 1\ne 1 0\na 2 0\n1 -2 0\n")
    assert qbf.kind == "dnf" and qbf.matrix == ((1, -2),)


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("p cnf 2 1\n1 5 0\n", 2, "out of declared range"),
        ("p cnf 2 1\n1 2\n", 2, "zero-terminated"),
        ("p cnf x 1\n1 0\n", 1, "malformed problem line"),
        ("p sat 1 1\n1 0\n", 1, "malformed problem line"),
        ("p cnf 1 1\np cnf 1 1\n1 0\n", 2, "duplicate problem line"),
        ("p cnf 2 2\n1 0\n", 1, "declares 2 clauses"),
        ("1 0\n", 1, "missing problem line"),
        ("p cnf 2 1\n1 0\na 2 0\n", 3, "after matrix"),
        ("p cnf 2 1\ne 1 0\na 1 0\n1 0\n", 3, "quantified twice"),
    ],
)
def test_qdimacs_errors(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse_qdimacs(text, "q.qdimacs")
    assert fragment in str(info.value)
    assert info.value.span.line == line


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_qdimacs_round_trip(seed):
    import random

    from qasp.qbf import random_qbf

    qbf = random_qbf(random.Random(seed))
    assert parse_qdimacs(dumps_qdimacs(qbf)) == qbf


def test_qbf_rejects_unbound_literal():
    with pytest.raises(ValueError):
        Qbf(((E, (1,)),), ((2,),))
