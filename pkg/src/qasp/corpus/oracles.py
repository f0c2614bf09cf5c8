"""Exhaustive oracles for the corpus problems, written from the problem definitions."""

from __future__ import annotations

import itertools
from collections import deque
from math import comb

from ..errors import CapExceeded
from .instances import GraphInstance, SetSystemInstance

MINMAX_CAPS = {"nodes": 8, "functions": 81}
PEBBLING_CAPS = {"nodes": 5, "k": 6}
VC_CAPS = {"universe": 6, "collection": 8}


def _adjacent(inst: GraphInstance, a, b) -> bool:
    return (a, b) in inst.edges and (b, a) in inst.edges


def max_clique(inst: GraphInstance, nodes) -> int:
    nodes = list(nodes)
    for size in range(len(nodes), 0, -1):
        for group in itertools.combinations(nodes, size):
            if all(_adjacent(inst, a, b) for a, b in itertools.combinations(group, 2)):
                return size
    return 0


def oracle_minmax(inst: GraphInstance, caps: dict = MINMAX_CAPS) -> int:
    """``min over f: I -> J`` of the largest clique of the subgraph induced by the cells ``A[i, f(i)]``."""
    inst.validate_partition()
    rows, cols = inst.index_sets
    if len(inst.nodes) > caps["nodes"] or len(cols) ** len(rows) > caps["functions"]:
        raise CapExceeded("minmax clique instance exceeds the oracle caps")
    best = None
    for image in itertools.product(cols, repeat=len(rows)):
        induced = set()
        for i, j in zip(rows, image):
            induced |= set(inst.partition.get((i, j), ()))
        value = max_clique(inst, sorted(induced))
        best = value if best is None else min(best, value)
    return best if best is not None else 0


def _distributions(nodes: int, k: int):
    """All ways to place ``k`` indistinguishable pebbles on ``nodes`` nodes."""
    for bars in itertools.combinations(range(k + nodes - 1), nodes - 1):
        edges = (-1,) + bars + (k + nodes - 1,)
        yield tuple(edges[i + 1] - edges[i] - 1 for i in range(nodes))


def reachable_target(inst: GraphInstance, start: tuple, target: int) -> bool:
    """Breadth-first search over pebble configurations for one with a pebble on ``target``."""
    index = {a: i for i, a in enumerate(inst.nodes)}
    moves = [(index[a], index[b]) for a, b in sorted(inst.edges) if a != b]
    seen = {start}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if state[target] > 0:
            return True
        for a, b in moves:
            if state[a] >= 2:
                nxt = list(state)
                nxt[a] -= 2
                nxt[b] += 1
                nxt = tuple(nxt)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return False


def oracle_pebbling(inst: GraphInstance, caps: dict = PEBBLING_CAPS) -> bool:
    """True iff every distribution of ``k`` pebbles can put a pebble on every target."""
    n = len(inst.nodes)
    if n > caps["nodes"] or inst.k > caps["k"]:
        raise CapExceeded("pebbling instance exceeds the oracle caps")
    if n == 0:
        return True
    for start in _distributions(n, inst.k):
        for target in range(n):
            if not reachable_target(inst, start, target):
                return False
    return True


def distribution_count(nodes: int, k: int) -> int:
    return comb(k + nodes - 1, nodes - 1)


def shattered(inst: SetSystemInstance, subset) -> bool:
    subset = frozenset(subset)
    traces = {s & subset for s in inst.collection}
    return len(traces) == 1 << len(subset)


def oracle_vc(inst: SetSystemInstance, caps: dict = VC_CAPS) -> int:
    """Largest ``|X|`` with ``X`` shattered by the collection; ``-1`` when not even the empty set is."""
    if len(inst.universe) > caps["universe"] or len(inst.collection) > caps["collection"]:
        raise CapExceeded("VC instance exceeds the oracle caps")
    for size in range(len(inst.universe), -1, -1):
        if any(shattered(inst, x) for x in itertools.combinations(inst.universe, size)):
            return size
    return -1
