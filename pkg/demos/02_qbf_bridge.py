"""Translate a QBF into a quantified program and compare against direct expansion."""

import random

from qasp import coherent, dumps_aspq, eval_qbf, parse_qdimacs, qbf_to_aspq
from qasp.qbf import random_qbf

text = """c forall x1 exists x2 . (x1 | x2) & (-x1 | -x2)
p cnf 2 2
a 1 0
e 2 0
1 2 0
-1 -2 0
"""
qbf = parse_qdimacs(text)
print(qbf)
print(dumps_aspq(qbf_to_aspq(qbf)))
print("eval_qbf:", eval_qbf(qbf), " coherent:", coherent(qbf_to_aspq(qbf)).coherent)

rng = random.Random(7)
agree = 0
for _ in range(50):
    f = random_qbf(rng)  # up to 8 variables, 4 alternating blocks
    agree += eval_qbf(f) == coherent(qbf_to_aspq(f)).coherent
print(f"random formulas agreeing: {agree}/50")
