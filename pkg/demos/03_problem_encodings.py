"""The three corpus problems on tiny instances, next to their exhaustive oracles."""

from qasp import coherent
from qasp.corpus import (
    GraphInstance,
    SetSystemInstance,
    encode_minmax_clique,
    encode_pebbling,
    encode_vc_dimension,
    oracle_minmax,
    oracle_pebbling,
    oracle_vc,
    pebbling_text,
)

# Minmax Clique: I = {1}, J = {1, 2}; f(1) = 2 induces the single node c
g = GraphInstance(
    ("a", "b", "c"),
    {("a", "b"), ("b", "a")},
    {(1, 1): frozenset("ab"), (1, 2): frozenset("c")},
)
print("minmax value:", oracle_minmax(g))
for k in range(4):
    print("  k =", k, coherent(encode_minmax_clique(g.with_k(k))).coherent)

# Pebbling on a two-node digraph with both directions
k2 = GraphInstance(("a", "b"), {("a", "b"), ("b", "a")})
print(pebbling_text(k2.with_k(2)))
for k in (1, 2, 3):
    inst = k2.with_k(k)
    print("pebbling k =", k, "solver", coherent(encode_pebbling(inst)).coherent, "oracle", oracle_pebbling(inst))

# VC dimension of the full power set of {1, 2}
s = SetSystemInstance((1, 2), [(), (1,), (2,), (1, 2)])
print("VC:", oracle_vc(s))
for k in range(3):
    print("  k =", k, coherent(encode_vc_dimension(s.with_k(k))).coherent)
