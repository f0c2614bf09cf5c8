"""ASP(Q) encodings of Minmax Clique, Pebbling Number and VC Dimension.

Every encoding is a fixed rule text plus instance facts.  Numeric
parameters travel as facts (``bound(k)``, ``total(k)``) so the non-fact
rules are identical across instances of the same problem.
"""

from __future__ import annotations

from ..model import Program, QuantifiedProgram, at
from ..parser import dumps_program, parse_aspq, parse_program
from .instances import GraphInstance, SetSystemInstance

MINMAX_P1 = """\
setI(X) :- v(X,_,_).
setJ(X) :- v(_,X,_).
1 { f(X,Y) : setJ(Y) } 1 :- setI(X).
"""

MINMAX_P2 = """\
inInduced(Z) :- v(X,Y,Z), f(X,Y).
edgeP(X,Y) :- edge(X,Y), inInduced(X), inInduced(Y).
{ inClique(X) : inInduced(X) }.
:- inClique(X), inClique(Y), X != Y, not edgeP(X,Y).
"""

MINMAX_C = """\
:- bound(K), #count { X : inClique(X) } < K.
"""

PEBBLING_P1 = """\
1 { onNode(X,N) : pebble(N) } 1 :- node(X).
:- total(K), #sum { N,X : onNode(X,N) } != K.
1 { target(X) : node(X) } 1.
"""

PEBBLING_P2 = """\
1 { endstep(S) : step(S) } 1.
onNode(X,N,0) :- onNode(X,N).
1 { move(X,Y,S) : edge(X,Y) } 1 :- step(S), endstep(T), 1 <= S, S <= T.
:- move(X,Y,S), onNode(X,N,S-1), N < 2.
affected(X,S) :- move(X,Y,S).
affected(Y,S) :- move(X,Y,S).
onNode(X,N-2,S) :- onNode(X,N,S-1), move(X,Y,S).
onNode(Y,M+1,S) :- onNode(Y,M,S-1), move(X,Y,S).
onNode(X,N,S) :- onNode(X,N,S-1), not affected(X,S).
"""

PEBBLING_C = """\
ok(W) :- onNode(W,N,T), target(W), endstep(T), N > 0.
:- target(W), not ok(W).
"""

VC_P1 = """\
K { inX(X) : inU(X) } :- bound(K).
"""

VC_P2 = """\
{ inS(X) : inX(X) }.
"""

VC_C = """\
inIntersection(X) :- true(X), inX(X).
:- inIntersection(X), not inS(X).
:- not inIntersection(X), inS(X).
"""

SET_SYSTEM_RULES = """\
1 { pick(I) : cset(I) } 1.
true(X) :- pick(I), mem(I,X).
"""

VC_RESERVED = {("inU", 1), ("inX", 1), ("inS", 1), ("bound", 1), ("inIntersection", 1)}


def _facts(lines) -> str:
    return "".join(f"{line}.\n" for line in lines)


def _section(name: str, *parts: str) -> str:
    body = "".join(parts)
    if body and not body.endswith("\n"):
        body += "\n"
    return f"%@{name}\n" + body


def minmax_clique_text(inst: GraphInstance) -> str:
    inst.validate_partition()
    rows, cols = inst.index_sets
    occupied = {idx for (i, j), members in inst.partition.items() if members for idx in (("i", i), ("j", j))}
    for i in rows:
        if ("i", i) not in occupied:
            raise ValueError(f"index {i} of I has no node in any cell")
    for j in cols:
        if ("j", j) not in occupied:
            raise ValueError(f"index {j} of J has no node in any cell")
    facts = [f"node({a})" for a in inst.nodes]
    facts += [f"edge({a},{b})" for a, b in sorted(inst.edges)]
    facts += [f"v({i},{j},{a})" for (i, j), members in sorted(inst.partition.items()) for a in sorted(members)]
    facts.append(f"bound({inst.k})")
    return (
        _section("forall", _facts(facts), MINMAX_P1)
        + _section("exists", MINMAX_P2)
        + _section("constraint", MINMAX_C)
    )


def encode_minmax_clique(inst: GraphInstance) -> QuantifiedProgram:
    """``∀ P1 ∃ P2 : C``, coherent iff the minmax clique value is at least ``k``."""
    return parse_aspq(minmax_clique_text(inst), "<minmax>")


def pebbling_text(inst: GraphInstance) -> str:
    if inst.k < 1:
        raise ValueError("pebbling needs k >= 1")
    if any(a == b for a, b in inst.edges):
        raise ValueError("pebbling graphs must not have self-loops")
    facts = [f"node({a})" for a in inst.nodes]
    facts += [f"edge({a},{b})" for a, b in sorted(inst.edges)]
    facts += [f"pebble(0..{inst.k})", f"total({inst.k})"]
    return (
        _section("forall", _facts(facts), PEBBLING_P1)
        + _section("exists", _facts([f"step(0..{inst.k - 1})"]), PEBBLING_P2)
        + _section("constraint", PEBBLING_C)
    )


def encode_pebbling(inst: GraphInstance) -> QuantifiedProgram:
    """``∀ P1 ∃ P2 : C``, coherent iff every distribution of ``k`` pebbles reaches every target."""
    return parse_aspq(pebbling_text(inst), "<pebbling>")


def set_system_text(inst: SetSystemInstance) -> str:
    """A program whose answer sets' ``true`` extensions are exactly the sets of the collection."""
    facts = [f"cset(s{i})" for i in range(1, len(inst.collection) + 1)]
    for i, members in enumerate(inst.collection, start=1):
        facts += [f"mem(s{i},{x})" for x in sorted(members)]
    return _facts(facts) + SET_SYSTEM_RULES


def vc_dimension_text(inst: SetSystemInstance, program_c: str | None = None) -> str:
    if program_c is None:
        program_c = set_system_text(inst)
    facts = [f"inU({x})" for x in inst.universe] + [f"bound({inst.k})"]
    return (
        _section("exists", _facts(facts), VC_P1)
        + _section("forall", VC_P2)
        + _section("exists", program_c)
        + _section("constraint", VC_C)
    )


def encode_vc_dimension(inst: SetSystemInstance, program_c: Program | str | None = None) -> QuantifiedProgram:
    """``∃ P1 ∀ P2 ∃ P3 : C`` with ``P3`` the program representing the collection."""
    if program_c is None:
        text = set_system_text(inst)
    elif isinstance(program_c, Program):
        text = dumps_program(program_c)
    else:
        text = program_c
    signatures = at(parse_program(text, "<program_C>"))
    overlap = signatures & VC_RESERVED
    if overlap:
        names = ", ".join(f"{n}/{a}" for n, a in sorted(overlap))
        raise ValueError(f"program_C shares vocabulary with P1/P2: {names}")
    return parse_aspq(vc_dimension_text(inst, text), "<vc>")


def non_fact_rules(text: str) -> list[str]:
    """Rule lines other than facts, for instance-uniformity checks."""
    qp = parse_aspq(text)
    out = []
    for _, program in qp.blocks:
        out += [str(r) for r in program.rules if not r.is_fact]
    out += [str(r) for r in qp.constraint.rules if not r.is_fact]
    return out
