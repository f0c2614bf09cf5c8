"""Seeded random instances within the oracle caps."""

from __future__ import annotations

import random

from .encodings import minmax_clique_text, pebbling_text, vc_dimension_text
from .instances import GraphInstance, SetSystemInstance
from .oracles import oracle_minmax, oracle_pebbling, oracle_vc

PROBLEMS = ("minmax", "pebbling", "vc")


def node_names(n: int) -> tuple:
    return tuple(f"n{i}" for i in range(1, n + 1))


def random_minmax(rng: random.Random, size: int = 5, k: int | None = None) -> GraphInstance:
    """Undirected graph (symmetric pairs) on ``size`` nodes with a random ``I x J`` partition."""
    size = max(2, min(size, 8))
    nodes = node_names(size)
    edges = set()
    density = rng.uniform(0.3, 0.9)
    for i, a in enumerate(nodes):
        for b in nodes[i + 1 :]:
            if rng.random() < density:
                edges.update({(a, b), (b, a)})
    while True:
        rows = rng.randint(1, min(3, size))
        cols = rng.randint(1, min(3, size // rows))
        if cols**rows <= 81 and rows * cols <= size:
            break
    order = list(nodes)
    rng.shuffle(order)
    cells = [(i, j) for i in range(1, rows + 1) for j in range(1, cols + 1)]
    partition = {cell: set() for cell in cells}
    # every cell gets one node so that every index of I and J is used
    for cell, node in zip(cells, order):
        partition[cell].add(node)
    for node in order[len(cells) :]:
        partition[rng.choice(cells)].add(node)
    partition = {cell: frozenset(members) for cell, members in partition.items()}
    if k is None:
        k = rng.randint(0, size)
    return GraphInstance(nodes, frozenset(edges), partition, k)


def random_pebbling(rng: random.Random, size: int = 3, k: int | None = None) -> GraphInstance:
    """Directed graph without self-loops; symmetric pairs appear with some probability."""
    size = max(1, min(size, 5))
    nodes = node_names(size)
    edges = set()
    density = rng.uniform(0.5, 1.0)
    for a in nodes:
        for b in nodes:
            if a != b and rng.random() < density:
                edges.add((a, b))
    if k is None:
        k = rng.randint(max(1, size - 1), max(size, 4))
    return GraphInstance(nodes, frozenset(edges), {}, k)


def random_set_system(rng: random.Random, size: int = 3, k: int | None = None) -> SetSystemInstance:
    size = max(1, min(size, 6))
    universe = tuple(range(1, size + 1))
    count = rng.randint(1, min(8, 1 << size))
    collection = []
    for _ in range(count):
        collection.append(frozenset(x for x in universe if rng.random() < 0.5))
    if k is None:
        k = rng.randint(0, size)
    return SetSystemInstance(universe, tuple(collection), k)


def generate(problem: str, seed: int, size: int, k: int | None = None) -> tuple[str, bool, int | bool]:
    """Program text, expected verdict and oracle value for a generated instance."""
    rng = random.Random(f"{problem}:{seed}:{size}")
    if problem == "minmax":
        inst = random_minmax(rng, size, k)
        value = oracle_minmax(inst)
        return minmax_clique_text(inst), value >= inst.k, value
    if problem == "pebbling":
        inst = random_pebbling(rng, size, k)
        value = oracle_pebbling(inst)
        return pebbling_text(inst), value, value
    if problem == "vc":
        inst = random_set_system(rng, size, k)
        value = oracle_vc(inst)
        return vc_dimension_text(inst), value >= inst.k, value
    raise ValueError(f"unknown problem {problem!r}; expected one of {', '.join(PROBLEMS)}")
