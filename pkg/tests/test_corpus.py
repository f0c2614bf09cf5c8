import json
import random

import pytest

from conftest import CORPUS
from qasp.cli import main
from qasp.corpus import (
    GraphInstance,
    SetSystemInstance,
    encode_minmax_clique,
    encode_pebbling,
    encode_vc_dimension,
    generate,
    minmax_clique_text,
    non_fact_rules,
    oracle_minmax,
    oracle_pebbling,
    oracle_vc,
    pebbling_text,
    random_minmax,
    random_pebbling,
    random_set_system,
    vc_dimension_text,
)
from qasp.corpus.oracles import reachable_target
from qasp.errors import CapExceeded
from qasp.model import Quantifier
from qasp.parser import parse_aspq, parse_program
from qasp.quantified import coherent

E, A = Quantifier.EXISTS, Quantifier.FORALL


def sym(*pairs):
    return {(a, b) for a, b in pairs} | {(b, a) for a, b in pairs}


def clique_instance(edges, k, partition=None, nodes=("a", "b")):
    return GraphInstance(nodes, sym(*edges), partition or {(1, 1): frozenset(nodes)}, k)


# Minmax Clique


def test_minmax_shape():
    qp = encode_minmax_clique(clique_instance([("a", "b")], 2))
    assert qp.quantifiers == (A, E)


@pytest.mark.parametrize("edges, k, expected", [([("a", "b")], 2, True), ([], 2, False), ([], 0, True)])
def test_minmax_examples(edges, k, expected):
    inst = clique_instance(edges, k)
    assert coherent(encode_minmax_clique(inst)).coherent is expected
    assert (oracle_minmax(inst) >= k) is expected


@pytest.mark.parametrize(
    "inst, expected",
    [
        (GraphInstance(("a", "b", "c"), sym(("a", "b"), ("b", "c"), ("a", "c")), {(1, 1): frozenset("abc")}), 3),
        (GraphInstance(("a", "b", "c"), set(), {(1, 1): frozenset("abc")}), 1),
        (GraphInstance(("a", "b", "c"), sym(("a", "b")), {(1, 1): frozenset("ab"), (1, 2): frozenset("c")}), 1),
        (
            GraphInstance(
                ("a", "b", "c", "d"),
                sym(("a", "b"), ("c", "d")),
                {(1, 1): frozenset("a"), (1, 2): frozenset("c"), (2, 1): frozenset("b"), (2, 2): frozenset("d")},
            ),
            1,
        ),
    ],
)
def test_oracle_minmax(inst, expected):
    assert oracle_minmax(inst) == expected


def test_minmax_requires_both_edge_directions():
    inst = GraphInstance(("a", "b"), {("a", "b")}, {(1, 1): frozenset("ab")}, 2)
    assert oracle_minmax(inst) == 1
    assert not coherent(encode_minmax_clique(inst)).coherent


@pytest.mark.parametrize(
    "partition",
    [
        {(1, 1): frozenset("a")},
        {(1, 1): frozenset("ab"), (1, 2): frozenset("b")},
        {(1, 1): frozenset("abz")},
    ],
)
def test_invalid_partitions(partition):
    inst = GraphInstance(("a", "b"), set(), partition, 1)
    with pytest.raises(ValueError):
        encode_minmax_clique(inst)
    with pytest.raises(ValueError):
        oracle_minmax(inst)


def test_edges_must_reference_nodes():
    with pytest.raises(ValueError):
        GraphInstance(("a",), {("a", "b")})


def test_minmax_caps():
    nodes = tuple("abcdefghi")
    with pytest.raises(CapExceeded):
        oracle_minmax(GraphInstance(nodes, set(), {(1, 1): frozenset(nodes)}, 1))


# Pebbling


K2 = ("a", "b")


@pytest.mark.parametrize(
    "inst, expected",
    [
        (GraphInstance(K2, sym(("a", "b")), k=2), True),
        (GraphInstance(K2, sym(("a", "b")), k=1), False),
        (GraphInstance(("a",), set(), k=1), True),
        (GraphInstance(K2, {("a", "b")}, k=3), False),
    ],
)
def test_pebbling_examples(inst, expected):
    assert oracle_pebbling(inst) is expected
    assert coherent(encode_pebbling(inst)).coherent is expected


def test_pebbling_moves():
    path = GraphInstance(K2, {("a", "b")}, k=2)
    assert reachable_target(path, (2, 0), 1)
    assert not reachable_target(GraphInstance(K2, {("a", "b")}, k=1), (1, 0), 1)


def test_pebbling_cycle_value():
    cycle = ("a", "b", "c")
    edges = {("a", "b"), ("b", "c"), ("c", "a")}
    # on a directed 3-cycle the worst case puts every pebble just after the target
    values = [k for k in range(1, 7) if oracle_pebbling(GraphInstance(cycle, edges, k=k))]
    assert values == [k for k in range(values[0], 7)]
    inst = GraphInstance(cycle, edges, k=values[0])
    assert coherent(encode_pebbling(inst)).coherent
    assert not coherent(encode_pebbling(inst.with_k(values[0] - 1))).coherent


@pytest.mark.parametrize("inst", [GraphInstance(K2, set(), k=0), GraphInstance(K2, {("a", "a")}, k=1)])
def test_pebbling_rejects_bad_instances(inst):
    with pytest.raises(ValueError):
        encode_pebbling(inst)


def test_pebbling_caps():
    with pytest.raises(CapExceeded):
        oracle_pebbling(GraphInstance(K2, set(), k=7))


# VC dimension


@pytest.mark.parametrize(
    "inst, expected",
    [
        (SetSystemInstance((1, 2), [set(), {1}, {2}, {1, 2}], 2), True),
        (SetSystemInstance((1, 2), [{1}], 1), False),
        (SetSystemInstance((1, 2), [{1}], 0), True),
        (SetSystemInstance((1, 2, 3), [{1}, {2}, {1, 2}], 0), True),
    ],
)
def test_vc_examples(inst, expected):
    assert coherent(encode_vc_dimension(inst)).coherent is expected
    assert (oracle_vc(inst) >= inst.k) is expected


def test_vc_shape():
    qp = encode_vc_dimension(SetSystemInstance((1,), [{1}], 1))
    assert qp.quantifiers == (E, A, E)


@pytest.mark.parametrize(
    "inst, expected",
    [
        (SetSystemInstance((1, 2, 3), [set(s) for s in ([], [1], [2], [3], [1, 2], [1, 3], [2, 3], [1, 2, 3])]), 3),
        (SetSystemInstance((1, 2), [set()]), 0),
        (SetSystemInstance((1, 2, 3), [{1}, {2}, set(), {1, 2}]), 2),
        (SetSystemInstance((1, 2), []), -1),
    ],
)
def test_oracle_vc(inst, expected):
    assert oracle_vc(inst) == expected


def test_vc_program_c_vocabulary_is_checked():
    inst = SetSystemInstance((1,), [{1}], 1)
    with pytest.raises(ValueError):
        encode_vc_dimension(inst, "true(1) :- inX(1).")
    with pytest.raises(ValueError):
        encode_vc_dimension(inst, parse_program("bound(3). true(1)."))
    assert not coherent(encode_vc_dimension(inst, "true(1).")).coherent
    assert coherent(encode_vc_dimension(inst, "true(1) | other.")).coherent


def test_vc_custom_program_c():
    inst = SetSystemInstance((1, 2), [], 2)
    program_c = "t(1) | t(2) | t(3) | t(4).\ntrue(1) :- t(2).\ntrue(2) :- t(3).\ntrue(1) :- t(4).\ntrue(2) :- t(4).\n"
    assert coherent(encode_vc_dimension(inst, program_c)).coherent


def test_set_system_subsets():
    with pytest.raises(ValueError):
        SetSystemInstance((1,), [{2}])


# instance uniformity


@pytest.mark.parametrize(
    "text_of, draw",
    [
        (minmax_clique_text, lambda rng: random_minmax(rng, rng.randint(2, 6))),
        (pebbling_text, lambda rng: random_pebbling(rng, rng.randint(1, 4))),
        (vc_dimension_text, lambda rng: random_set_system(rng, rng.randint(1, 4))),
    ],
    ids=["minmax", "pebbling", "vc"],
)
def test_encodings_are_instance_uniform(text_of, draw):
    rng = random.Random(11)
    rule_sets = {tuple(non_fact_rules(text_of(draw(rng)))) for _ in range(12)}
    # the set-system program is instance facts plus fixed rules, so only one rule list appears
    assert len(rule_sets) == 1


@pytest.mark.parametrize(
    "problem, seeds, size",
    [("minmax", range(6), 4), ("pebbling", range(4), 2), ("vc", range(6), 3)],
)
def test_generated_instances_agree_with_oracle(problem, seeds, size):
    for seed in seeds:
        text, expected, _ = generate(problem, seed, size)
        assert coherent(parse_aspq(text)).coherent is expected


def test_generate_is_deterministic():
    assert generate("vc", 3, 3) == generate("vc", 3, 3)
    with pytest.raises(ValueError):
        generate("tsp", 0, 3)


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.qasp")), ids=lambda p: p.name)
def test_corpus_expected_verdicts(capsys, path):
    expected = json.loads(path.with_name(path.name + ".expected").read_text())["expected"]
    code = main(["solve", str(path)])
    out = capsys.readouterr().out
    assert out == f"{expected}\n"
    assert code == (10 if expected == "COHERENT" else 20)
