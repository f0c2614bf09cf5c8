"""Walk through a two-level program by hand, then let the evaluator do it."""

from qasp import coherent, combine, enumerate_answer_sets, format_interpretation, ground, parse_aspq
from qasp.quantified import quantified_answer_sets

SOURCE = """
%@exists
a(1) | a(2).
%@forall
b(1) | b(2) :- a(1).
b(2) :- a(2).
%@constraint
:- b(1), not b(2).
"""

qp = parse_aspq(SOURCE)
(q1, p1), (q2, p2) = qp.blocks

g1 = ground(p1)
first = list(enumerate_answer_sets(g1))
print("AS(P1):", [format_interpretation(m) for m in first])

for m1 in first:
    # pin m1 and look at the universal level
    p2_prime = combine(p2, g1.base, m1)
    g2 = ground(p2_prime)
    second = list(enumerate_answer_sets(g2))
    print(" under", format_interpretation(m1), "AS(P2'):", [format_interpretation(m) for m in second])
    for m2 in second:
        c = ground(combine(qp.constraint, g2.base, m2))
        ok = next(enumerate_answer_sets(c), None) is not None
        print("   C with", format_interpretation(m2), "->", "coherent" if ok else "incoherent")

verdict = coherent(qp)
print("verdict:", "COHERENT" if verdict.coherent else "INCOHERENT")
print("\n".join(verdict.trace.lines()))
print("quantified answer sets:", [format_interpretation(m) for m in quantified_answer_sets(qp)])
