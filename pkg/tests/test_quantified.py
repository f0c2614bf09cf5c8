import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EXAMPLE1, definitional_answer_sets
from qasp.engine import enumerate_answer_sets
from qasp.errors import EvaluationError
from qasp.grounder import ground
from qasp.model import Atom, Disjunction, HerbrandBase, Literal, Program, QuantifiedProgram, Quantifier, Rule, at, check_stratified
from qasp.parser import parse_aspq, parse_program
from qasp.qbf import qbf_to_aspq, random_qbf
from qasp.quantified import EvalStats, coherent, combine, fix, quantified_answer_sets, replay
from qasp.randprog import random_normal_program

E, A = Quantifier.EXISTS, Quantifier.FORALL


def a(name, *args):
    return Atom(name, args)


def rule_strings(program):
    return sorted(str(r) for r in program.expanded_rules())


def answer_sets(program):
    return set(enumerate_answer_sets(ground(program)))


@pytest.fixture
def example():
    return parse_aspq(EXAMPLE1)


def test_fix_over_p1(example):
    base = ground(example.blocks[0][1]).base
    assert rule_strings(fix(base, {a("a", 1)})) == [":- a(2).", "a(1)."]


def test_fix_over_p2_prime(example):
    base1 = ground(example.blocks[0][1]).base
    p2_prime = combine(example.blocks[1][1], base1, {a("a", 1)})
    base2 = ground(p2_prime).base.without_aux()
    assert rule_strings(fix(base2, {a("a", 1), a("b", 1)})) == [":- a(2).", ":- b(2).", "a(1).", "b(1)."]


def test_fix_all_excluded():
    base = HerbrandBase(frozenset({("a", 0)}), frozenset({"u0"}))
    assert rule_strings(fix(base, set())) == [":- a."]


def test_fix_errors():
    base = HerbrandBase(frozenset({("a", 0)}), frozenset({"u0"}))
    with pytest.raises(EvaluationError):
        fix(base, {a("b")})
    with pytest.raises(EvaluationError):
        fix(HerbrandBase(frozenset({("_aux_not_p", 0)}), frozenset({"u0"})), set())


def test_two_level_intermediate_sets(example):
    p1, p2 = example.blocks[0][1], example.blocks[1][1]
    assert answer_sets(p1) == {frozenset({a("a", 1)}), frozenset({a("a", 2)})}
    base1 = ground(p1).base
    p2_prime = combine(p2, base1, {a("a", 1)})
    assert rule_strings(p2_prime) == sorted(str(r) for r in parse_program("b(1) | b(2) :- a(1). b(2) :- a(2). a(1). :- a(2).").rules)
    expected = {frozenset({a("a", 1), a("b", 1)}), frozenset({a("a", 1), a("b", 2)})}
    assert answer_sets(p2_prime) == expected
    base2 = ground(p2_prime).base.without_aux()
    # the constraint fails once b(1) is fixed without b(2)
    assert answer_sets(combine(example.constraint, base2, {a("a", 1), a("b", 1)})) == set()
    assert answer_sets(combine(example.constraint, base2, {a("a", 1), a("b", 2)})) != set()


def test_combine_with_empty_next_reproduces_the_fixed_set(example):
    base = ground(example.blocks[0][1]).base
    for m in ({a("a", 1)}, {a("a", 2)}, set()):
        assert answer_sets(combine(Program(), base, m)) == {frozenset(m)}


def test_two_level_coherent(example):
    verdict = coherent(example)
    assert verdict.coherent
    assert verdict.trace.chosen == frozenset({a("a", 2)})
    assert verdict.trace.role == "witness"
    assert replay(example, verdict.trace)
    assert list(quantified_answer_sets(example)) == [frozenset({a("a", 2)})]


@pytest.mark.parametrize(
    "text, expected",
    [
        ("%@exists\na.\n%@constraint\n", True),
        ("%@forall\na :- not b.\nb :- not a.\n%@constraint\n:- a.\n", False),
        ("%@forall\na :- not b.\nb :- not a.\n%@constraint\n:- a, b.\n", True),
        ("%@exists\na :- not a.\n%@constraint\n", False),
        ("%@forall\na :- not a.\n%@constraint\n:- not zz.\n", True),
    ],
)
def test_coherent_examples(text, expected):
    qp = parse_aspq(text)
    assert coherent(qp).coherent is expected
    assert coherent(qp, short_circuit=False).coherent is expected


def test_counterexample_for_failed_forall():
    qp = parse_aspq("%@forall\na :- not b.\nb :- not a.\n%@constraint\n:- a.\n")
    trace = coherent(qp).trace
    assert trace.role == "counterexample"
    assert trace.chosen == frozenset({a("a")})
    assert trace.to_dict()["counterexample"] == ["a"]


def test_quantified_answer_sets_examples():
    assert list(quantified_answer_sets(parse_aspq("%@exists\na :- not a.\n%@constraint\n"))) == []
    with pytest.raises(EvaluationError) as info:
        list(quantified_answer_sets(parse_aspq("%@forall\na.\n%@constraint\n")))
    assert "quantified answer sets defined only for existential programs" in str(info.value)


def test_choice_complements_are_invisible():
    qp = parse_aspq("%@exists\nn(1..2).\n{ s(X) : n(X) }.\n%@forall\n%@constraint\n:- s(1).\n")
    models = list(quantified_answer_sets(qp))
    assert all(not atom.is_aux for m in models for atom in m)
    assert set(models) == {frozenset({a("n", 1), a("n", 2)}), frozenset({a("n", 1), a("n", 2), a("s", 2)})}


def test_hook_streams_one_answer_set_at_a_time(example):
    events = []
    coherent(example, hook=lambda *e: events.append(e))
    assert events[0] == ("branch", 1, frozenset({a("a", 2)}))
    assert ("branch", 2, frozenset({a("a", 2), a("b", 2)})) in events


def test_stats_count_branches(example):
    verdict = coherent(example)
    assert verdict.stats.branches == [1, 1]
    stats = EvalStats()
    list(quantified_answer_sets(example, stats=stats))
    assert stats.branches[0] == 2


# independent single-level oracle


def _oracle_answer_sets(rules):
    atoms = {x for r in rules for x in r.atoms()}
    return definitional_answer_sets(rules, atoms)


def _oracle_fix(atoms, m):
    return [Rule(Disjunction((x,))) for x in m] + [Rule(Disjunction(()), (Literal(x),)) for x in atoms - m]


def _oracle_single_level(quantifier, program, constraint):
    base = {Atom(name) for name, _ in at(program)}
    results = []
    for m in _oracle_answer_sets(list(program.rules)):
        leaf = _oracle_answer_sets(list(constraint.rules) + _oracle_fix(base, m))
        results.append(bool(leaf))
    return any(results) if quantifier is E else all(results)


def _random_stratified(rng):
    while True:
        c = random_normal_program(rng, max_atoms=6, max_rules=5)
        if check_stratified(c):
            break
    if rng.random() < 0.6:
        atom = Atom(f"p{rng.randint(1, 6)}")
        c = Program(c.rules + (Rule(Disjunction(()), (Literal(atom, rng.random() < 0.5),)),))
    return c


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([E, A]))
def test_single_level_matches_oracle(seed, quantifier):
    rng = random.Random(seed)
    program = random_normal_program(rng, max_atoms=6, max_rules=8)
    constraint = _random_stratified(rng)
    qp = QuantifiedProgram(((quantifier, program),), constraint)
    assert coherent(qp).coherent == _oracle_single_level(quantifier, program, constraint)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**6))
def test_existential_qas_equal_answer_sets(seed):
    program = random_normal_program(random.Random(seed))
    qp = QuantifiedProgram(((E, program),), Program())
    assert set(quantified_answer_sets(qp)) == _oracle_answer_sets(list(program.rules))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_vacuous_forall(seed):
    rng = random.Random(seed)
    program = random_normal_program(rng)
    program = Program(program.rules + (Rule(Disjunction((Atom("dead"),)), (Literal(Atom("dead"), True),)),))
    constraint = _random_stratified(rng)
    assert coherent(QuantifiedProgram(((A, program),), constraint)).coherent
    assert not coherent(QuantifiedProgram(((E, program),), constraint)).coherent


def _random_multilevel(rng):
    if rng.random() < 0.5:
        return qbf_to_aspq(random_qbf(rng, max_vars=5, max_blocks=3))
    blocks = []
    for _ in range(rng.randint(1, 3)):
        blocks.append((rng.choice([E, A]), random_normal_program(rng, max_atoms=4, max_rules=5)))
    return QuantifiedProgram(tuple(blocks), _random_stratified(rng))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_short_circuit_does_not_change_verdict(seed):
    qp = _random_multilevel(random.Random(seed))
    assert coherent(qp).coherent == coherent(qp, short_circuit=False).coherent


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_trace_replay(seed):
    qp = _random_multilevel(random.Random(seed))
    verdict = coherent(qp)
    assert replay(qp, verdict.trace)
    chain = list(verdict.trace.chain())
    if verdict.coherent and qp.is_existential:
        assert chain[0].role == "witness"
    if not verdict.coherent and not qp.is_existential:
        assert chain[0].role == "counterexample"


def test_parallel_matches_sequential():
    rng = random.Random(7)
    programs = [parse_aspq(EXAMPLE1)] + [_random_multilevel(rng) for _ in range(3)]
    for qp in programs:
        sequential = coherent(qp)
        parallel = coherent(qp, parallel=2)
        assert parallel.coherent == sequential.coherent
        assert parallel.trace.chosen == sequential.trace.chosen
