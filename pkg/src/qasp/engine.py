"""Answer sets of ground disjunctive programs with #count/#sum aggregates.

The enumerator is a depth-first search over the atoms that occur in some
rule head, in lexicographic order, trying ``false`` before ``true``.  Each
decision is followed by propagation that is sound for answer sets:

* clause propagation on every rule (body true and all heads false is a
  conflict; a single open literal is forced),
* support propagation (a true atom needs a rule whose body is not false
  and whose other head atoms are not true; an atom without any such rule is
  false),
* bound propagation on aggregates (a constraint whose aggregate literal is
  already decided true by the count/sum bounds fails early).

A total assignment is accepted only after an exact stability test: the
Gelfond-Lifschitz reduct must have no model strictly inside the candidate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import CapExceeded, EngineError
from .grounder import GroundProgram
from .model import Aggregate, Atom, Disjunction, Literal, Rule, atom_key, compare_constants

TRUE, FALSE, UNKNOWN = 1, -1, 0
DEFAULT_BRUTE_FORCE_CAP = 20


@dataclass(frozen=True)
class EngineConfig:
    """Search configuration.  Order is lexicographic and polarity false-first."""

    limit: int | None = None


@dataclass
class EngineStats:
    decisions: int = 0
    conflicts: int = 0
    candidates: int = 0
    models: int = 0


# --------------------------------------------------------------------------
# direct semantics on Rule objects


def _check_base(ground: GroundProgram, interpretation: Iterable[Atom]) -> frozenset:
    interp = frozenset(interpretation)
    for atom in interp:
        if atom not in ground.base:
            raise EngineError(f"interpretation atom {atom} is not in the Herbrand base")
    return interp


def aggregate_value(agg: Aggregate, interp) -> int:
    """Value of ``agg`` under ``interp``; distinct tuples contribute once."""
    tuples = set()
    for element in agg.elements:
        if all((l.atom in interp) != l.negated for l in element.condition):
            tuples.add(element.terms)
    if agg.function == "count":
        return len(tuples)
    return sum(t[0] for t in tuples if t and isinstance(t[0], int))


def aggregate_holds(agg: Aggregate, interp) -> bool:
    return compare_constants(aggregate_value(agg, interp), agg.op, agg.bound)


def _body_holds(rule: Rule, interp) -> bool:
    for lit in rule.body:
        if isinstance(lit, Literal):
            if (lit.atom in interp) == lit.negated:
                return False
        elif isinstance(lit, Aggregate):
            if not aggregate_holds(lit, interp):
                return False
        else:
            raise EngineError(f"non-ground literal {lit} in ground program")
    return True


def _satisfies(rule: Rule, interp) -> bool:
    return not _body_holds(rule, interp) or any(a in interp for a in rule.head.atoms)


def is_model(ground: GroundProgram, interpretation: Iterable[Atom]) -> bool:
    """True iff every rule of ``ground`` (constraints included) is satisfied."""
    interp = _check_base(ground, interpretation)
    return all(_satisfies(r, interp) for r in ground.rules)


def _reduct_rules(rules: Iterable[Rule], interp) -> list[Rule]:
    """``H(r) :- B+(r)`` for rules whose negative part holds in ``interp``.

    Aggregates are evaluated against ``interp`` like negative literals,
    which is exact under the engine's restriction on aggregate positions.
    """
    reduct = []
    for rule in rules:
        keep = True
        positive = []
        for lit in rule.body:
            if isinstance(lit, Literal):
                if lit.negated:
                    if lit.atom in interp:
                        keep = False
                        break
                else:
                    positive.append(lit)
            elif not aggregate_holds(lit, interp):
                keep = False
                break
        if keep:
            reduct.append(Rule(rule.head, tuple(positive)))
    return reduct


def gl_reduct(ground: GroundProgram, interpretation: Iterable[Atom]) -> GroundProgram:
    """Gelfond-Lifschitz reduct of a constraint-free ground program."""
    interp = _check_base(ground, interpretation)
    if any(r.is_constraint for r in ground.rules):
        raise EngineError("gl_reduct expects a program without constraints")
    return GroundProgram(tuple(_reduct_rules(ground.rules, interp)), ground.base, ground.choice_atoms, ground.universe)


def _has_proper_submodel(positive_rules: Iterable[tuple], interp: frozenset) -> bool:
    """Search for ``J < interp`` modelling rules given as ``(heads, body)`` atom tuples."""
    ids = {a: i for i, a in enumerate(sorted(interp, key=atom_key))}
    clauses = []
    horn = True
    for heads, body in positive_rules:
        if not all(b in interp for b in body):
            continue
        inside = [ids[h] for h in heads if h in interp]
        if not inside:
            return False  # interp itself is not a model; no submodel question arises
        if len(inside) > 1:
            horn = False
        clauses.append(([ids[b] for b in body], inside))
    if horn:
        derived = _least_model(clauses, len(ids))
        return len(derived) < len(ids)
    cnf = [[-(b + 1) for b in body] + [h + 1 for h in heads] for body, heads in clauses]
    cnf.append([-(i + 1) for i in range(len(ids))])
    return _dpll(cnf, len(ids)) is not None


def _least_model(clauses: list, n: int) -> set:
    waiting: dict[int, list[int]] = {}
    missing = []
    derived: set = set()
    queue = []
    for idx, (body, heads) in enumerate(clauses):
        missing.append(len(set(body)))
        for b in set(body):
            waiting.setdefault(b, []).append(idx)
        if not body:
            queue.append(heads[0])
    while queue:
        atom = queue.pop()
        if atom in derived:
            continue
        derived.add(atom)
        for idx in waiting.get(atom, ()):
            missing[idx] -= 1
            if missing[idx] == 0:
                queue.append(clauses[idx][1][0])
    return derived


def _dpll(cnf: list[list[int]], n: int) -> dict | None:
    """Plain DPLL with unit propagation; returns one model or ``None``."""
    assignment: dict[int, bool] = {}

    def value(lit: int):
        v = assignment.get(abs(lit))
        if v is None:
            return None
        return v if lit > 0 else not v

    def solve() -> bool:
        trail = []
        while True:
            unit = None
            for clause in cnf:
                open_lits = []
                satisfied = False
                for lit in clause:
                    v = value(lit)
                    if v is True:
                        satisfied = True
                        break
                    if v is None:
                        open_lits.append(lit)
                if satisfied:
                    continue
                if not open_lits:
                    for var in trail:
                        del assignment[var]
                    return False
                if len(open_lits) == 1:
                    unit = open_lits[0]
                    break
            if unit is None:
                break
            assignment[abs(unit)] = unit > 0
            trail.append(abs(unit))
        free = next((v for v in range(1, n + 1) if v not in assignment), None)
        if free is None:
            return True
        for choice in (False, True):
            assignment[free] = choice
            if solve():
                return True
            del assignment[free]
        for var in trail:
            del assignment[var]
        return False

    return dict(assignment) if solve() else None


def is_answer_set(ground: GroundProgram, interpretation: Iterable[Atom]) -> bool:
    """``I`` is a minimal model of the reduct of ``P`` minus constraints and satisfies the constraints."""
    interp = _check_base(ground, interpretation)
    constraints = [r for r in ground.rules if r.is_constraint]
    rules = [r for r in ground.rules if not r.is_constraint]
    if not all(_satisfies(r, interp) for r in constraints):
        return False
    reduct = _reduct_rules(rules, interp)
    if not all(_satisfies(r, interp) for r in reduct):
        return False
    return not _has_proper_submodel([(r.head.atoms, tuple(l.atom for l in r.body)) for r in reduct], interp)


def minimal_models(ground: GroundProgram) -> list[frozenset]:
    """All subset-minimal models of a positive, constraint-free program."""
    for rule in ground.rules:
        if rule.is_constraint:
            raise EngineError("minimal_models expects a constraint-free program")
        if any(not isinstance(l, Literal) or l.negated for l in rule.body):
            raise EngineError(f"minimal_models expects a positive program; offending rule: {rule}")
    atoms = sorted(ground.atoms(), key=atom_key)
    ids = {a: i for i, a in enumerate(atoms)}
    cnf = [[-(ids[l.atom] + 1) for l in r.body] + [ids[h] + 1 for h in r.head.atoms] for r in ground.rules]
    pairs = [(r.head.atoms, tuple(l.atom for l in r.body)) for r in ground.rules]
    found = []
    # enumerate models by blocking each one found
    while True:
        model = _dpll(cnf, len(atoms))
        if model is None:
            break
        interp = frozenset(atoms[v - 1] for v, val in model.items() if val)
        # shrink to a minimal model below it
        while True:
            smaller = _shrink(pairs, interp)
            if smaller is None:
                break
            interp = smaller
        if interp not in found:
            found.append(interp)
        # block every model that contains this minimal one
        cnf.append([-(ids[a] + 1) for a in interp])
        if not interp:
            break
    return sorted(found, key=lambda m: sorted(atom_key(a) for a in m))


def _shrink(pairs: list, interp: frozenset) -> frozenset | None:
    ids = {a: i for i, a in enumerate(sorted(interp, key=atom_key))}
    atoms = sorted(interp, key=atom_key)
    cnf = []
    for heads, body in pairs:
        if not all(b in interp for b in body):
            continue
        cnf.append([-(ids[b] + 1) for b in body] + [ids[h] + 1 for h in heads if h in interp])
    cnf.append([-(i + 1) for i in range(len(ids))])
    model = _dpll(cnf, len(ids))
    if model is None:
        return None
    return frozenset(atoms[v - 1] for v, val in model.items() if val)


# --------------------------------------------------------------------------
# compiled search


class _Agg:
    __slots__ = ("function", "groups", "op", "bound", "atoms")

    def __init__(self, function, groups, op, bound):
        self.function = function
        self.groups = groups  # [(weight, [(pos_ids, neg_ids), ...]), ...]
        self.op = op
        self.bound = bound
        self.atoms = {a for _, elems in groups for pos, neg in elems for a in itertools.chain(pos, neg)}


class _Rule:
    __slots__ = ("heads", "pos", "neg", "aggs")

    def __init__(self, heads, pos, neg, aggs):
        self.heads = heads
        self.pos = pos
        self.neg = neg
        self.aggs = aggs


def _bound_key(bound):
    return bound if isinstance(bound, int) else float("inf")


def _compare_range(lo: int, hi: int, op: str, bound) -> int:
    if not isinstance(bound, int):
        # integers precede every symbol
        return TRUE if op in ("<", "<=", "!=") else FALSE
    if op == "<":
        return TRUE if hi < bound else FALSE if lo >= bound else UNKNOWN
    if op == "<=":
        return TRUE if hi <= bound else FALSE if lo > bound else UNKNOWN
    if op == ">":
        return TRUE if lo > bound else FALSE if hi <= bound else UNKNOWN
    if op == ">=":
        return TRUE if lo >= bound else FALSE if hi < bound else UNKNOWN
    if op == "=":
        if lo == hi == bound:
            return TRUE
        return FALSE if bound < lo or bound > hi else UNKNOWN
    if op == "!=":
        if lo == hi == bound:
            return FALSE
        return TRUE if bound < lo or bound > hi else UNKNOWN
    raise EngineError(f"unknown comparison {op}")


class Solver:
    """Compiled form of a ground program; :meth:`answer_sets` is a lazy generator."""

    def __init__(self, ground: GroundProgram, config: EngineConfig = EngineConfig()):
        self.ground = ground
        self.config = config
        self.stats = EngineStats()
        self._compile()

    # compilation -----------------------------------------------------------
    def _compile(self) -> None:
        head_atoms: set[Atom] = set()
        for rule in self.ground.rules:
            if not isinstance(rule.head, Disjunction):
                raise EngineError(f"choice head in ground program: {rule}")
            head_atoms.update(rule.head.atoms)
        self.atoms = sorted(head_atoms, key=atom_key)
        ids = {a: i for i, a in enumerate(self.atoms)}
        self.ids = ids
        n = len(self.atoms)
        self.rules: list[_Rule] = []
        self.inconsistent = False
        aggregate_rules = []
        for rule in self.ground.rules:
            compiled = self._compile_rule(rule, ids)
            if compiled is None:
                continue
            if compiled.aggs and compiled.heads:
                aggregate_rules.append(rule)
            if not compiled.heads and not compiled.pos and not compiled.neg and not compiled.aggs:
                self.inconsistent = True
            self.rules.append(compiled)
        if aggregate_rules:
            _check_aggregate_positions(self.ground.rules, aggregate_rules)

        self.touch: list[list[int]] = [[] for _ in range(n)]
        self.support: list[list[int]] = [[] for _ in range(n)]
        for idx, r in enumerate(self.rules):
            seen = set(r.heads) | set(r.pos) | set(r.neg)
            for agg in r.aggs:
                seen |= agg.atoms
            for a in seen:
                self.touch[a].append(idx)
            for h in r.heads:
                self.support[h].append(idx)

    def _compile_rule(self, rule: Rule, ids: dict) -> _Rule | None:
        pos, neg, aggs = [], [], []
        for lit in rule.body:
            if isinstance(lit, Literal):
                i = ids.get(lit.atom)
                if lit.negated:
                    if i is not None:
                        neg.append(i)
                elif i is None:
                    return None  # never true in an answer set
                else:
                    pos.append(i)
            elif isinstance(lit, Aggregate):
                agg = self._compile_aggregate(lit, ids)
                if agg is True:
                    continue
                if agg is False:
                    return None
                aggs.append(agg)
            else:
                raise EngineError(f"non-ground literal {lit}")
        heads = [ids[a] for a in rule.head.atoms]
        return _Rule(heads, pos, neg, aggs)

    def _compile_aggregate(self, agg: Aggregate, ids: dict):
        groups: dict[tuple, list] = {}
        for element in agg.elements:
            pos, neg = [], []
            dead = False
            for lit in element.condition:
                i = ids.get(lit.atom)
                if lit.negated:
                    if i is not None:
                        neg.append(i)
                elif i is None:
                    dead = True
                    break
                else:
                    pos.append(i)
            if dead:
                continue
            groups.setdefault(element.terms, []).append((pos, neg))
        compiled_groups = []
        for terms, elems in groups.items():
            if agg.function == "sum":
                if not terms or not isinstance(terms[0], int):
                    continue
                weight = terms[0]
            else:
                weight = 1
            compiled_groups.append((weight, elems))
        compiled = _Agg(agg.function, compiled_groups, agg.op, agg.bound)
        if not compiled.atoms:
            value = sum(w for w, _ in compiled_groups)
            return compare_constants(value, agg.op, agg.bound)
        return compiled

    # three-valued evaluation ------------------------------------------------
    def _agg_status(self, agg: _Agg) -> int:
        vals = self.vals
        lo = hi = 0
        for weight, elems in agg.groups:
            status = FALSE
            for pos, neg in elems:
                s = TRUE
                for a in pos:
                    v = vals[a]
                    if v == FALSE:
                        s = FALSE
                        break
                    if v == UNKNOWN:
                        s = UNKNOWN
                if s != FALSE:
                    for a in neg:
                        v = vals[a]
                        if v == TRUE:
                            s = FALSE
                            break
                        if v == UNKNOWN:
                            s = UNKNOWN
                if s == TRUE:
                    status = TRUE
                    break
                if s == UNKNOWN:
                    status = UNKNOWN
            if status == TRUE:
                lo += weight
                hi += weight
            elif status == UNKNOWN:
                if weight > 0:
                    hi += weight
                else:
                    lo += weight
        return _compare_range(lo, hi, agg.op, agg.bound)

    # assignment --------------------------------------------------------------
    def _assign(self, atom: int, value: int) -> bool:
        current = self.vals[atom]
        if current == value:
            return True
        if current != UNKNOWN:
            return False
        self.vals[atom] = value
        self.trail.append(atom)
        self.queue.append(atom)
        return True

    def _check_rule(self, r: _Rule) -> bool:
        vals = self.vals
        open_lit = None
        n_open = 0
        for a in r.pos:
            v = vals[a]
            if v == FALSE:
                return True
            if v == UNKNOWN:
                n_open += 1
                open_lit = (a, FALSE)
        for a in r.neg:
            v = vals[a]
            if v == TRUE:
                return True
            if v == UNKNOWN:
                n_open += 1
                open_lit = (a, TRUE)
        for agg in r.aggs:
            s = self._agg_status(agg)
            if s == FALSE:
                return True
            if s == UNKNOWN:
                n_open += 1
                open_lit = None
        open_head = None
        n_heads = 0
        for h in r.heads:
            v = vals[h]
            if v == TRUE:
                return True
            if v == UNKNOWN:
                n_heads += 1
                open_head = h
        if n_open == 0:
            if n_heads == 0:
                return False
            if n_heads == 1:
                return self._assign(open_head, TRUE)
        elif n_open == 1 and n_heads == 0 and open_lit is not None:
            return self._assign(open_lit[0], open_lit[1])
        return True

    def _support_candidate(self, r: _Rule, atom: int) -> bool:
        vals = self.vals
        for a in r.pos:
            if vals[a] == FALSE:
                return False
        for a in r.neg:
            if vals[a] == TRUE:
                return False
        for h in r.heads:
            if h != atom and vals[h] == TRUE:
                return False
        for agg in r.aggs:
            if self._agg_status(agg) == FALSE:
                return False
        return True

    def _check_support(self, atom: int) -> bool:
        value = self.vals[atom]
        if value == FALSE:
            return True
        candidate = None
        count = 0
        for idx in self.support[atom]:
            r = self.rules[idx]
            if self._support_candidate(r, atom):
                count += 1
                candidate = r
                if count > 1:
                    return True
        if count == 0:
            return self._assign(atom, FALSE)
        if value == TRUE:
            for a in candidate.pos:
                if not self._assign(a, TRUE):
                    return False
            for a in candidate.neg:
                if not self._assign(a, FALSE):
                    return False
            for h in candidate.heads:
                if h != atom and not self._assign(h, FALSE):
                    return False
        return True

    def _propagate(self) -> bool:
        queue = self.queue
        rules = self.rules
        while queue:
            atom = queue.pop()
            pending_support = {atom}
            for idx in self.touch[atom]:
                r = rules[idx]
                if not self._check_rule(r):
                    queue.clear()
                    return False
                pending_support.update(r.heads)
            for a in pending_support:
                if not self._check_support(a):
                    queue.clear()
                    return False
        return True

    def _initial(self) -> bool:
        if self.inconsistent:
            return False
        for r in self.rules:
            if not self._check_rule(r):
                return False
        for a in range(len(self.atoms)):
            if not self._check_support(a):
                return False
        return self._propagate()

    def _undo(self, mark: int) -> None:
        trail, vals = self.trail, self.vals
        while len(trail) > mark:
            vals[trail.pop()] = UNKNOWN

    # stability ------------------------------------------------------------------
    def _stable(self) -> bool:
        vals = self.vals
        true_ids = [i for i, v in enumerate(vals) if v == TRUE]
        interp = set(true_ids)
        clauses = []
        horn = True
        for r in self.rules:
            if not r.heads:
                continue
            if any(vals[a] == TRUE for a in r.neg):
                continue
            if any(self._agg_status(agg) != TRUE for agg in r.aggs):
                continue
            if any(vals[a] != TRUE for a in r.pos):
                continue
            inside = [h for h in r.heads if vals[h] == TRUE]
            if not inside:
                return False
            if len(inside) > 1:
                horn = False
            clauses.append((r.pos, inside))
        if horn:
            derived: set = set()
            waiting: dict[int, list[int]] = {}
            missing = []
            queue = []
            for idx, (body, heads) in enumerate(clauses):
                distinct = set(body)
                missing.append(len(distinct))
                for b in distinct:
                    waiting.setdefault(b, []).append(idx)
                if not distinct:
                    queue.append(heads[0])
            while queue:
                atom = queue.pop()
                if atom in derived:
                    continue
                derived.add(atom)
                for idx in waiting.get(atom, ()):
                    missing[idx] -= 1
                    if missing[idx] == 0:
                        queue.append(clauses[idx][1][0])
            return derived == interp
        local = {a: i for i, a in enumerate(true_ids)}
        cnf = [[-(local[b] + 1) for b in body] + [local[h] + 1 for h in heads] for body, heads in clauses]
        cnf.append([-(i + 1) for i in range(len(true_ids))])
        return _dpll(cnf, len(true_ids)) is None

    # search ---------------------------------------------------------------------
    def answer_sets(self) -> Iterator[frozenset]:
        """Lazily yield every answer set once, in lexicographic false-first order."""
        n = len(self.atoms)
        self.vals = [UNKNOWN] * n
        self.trail: list[int] = []
        self.queue: list[int] = []
        limit = self.config.limit
        if not self._initial():
            self.stats.conflicts += 1
            return
        stack: list[tuple[int, int, int]] = []  # (atom, trail mark, value)
        pos = 0
        vals = self.vals
        while True:
            while pos < n and vals[pos] != UNKNOWN:
                pos += 1
            if pos == n:
                self.stats.candidates += 1
                if self._stable():
                    self.stats.models += 1
                    yield frozenset(self.atoms[i] for i in range(n) if vals[i] == TRUE)
                    if limit is not None and self.stats.models >= limit:
                        return
                pos = self._backtrack(stack)
                if pos < 0:
                    return
                continue
            self.stats.decisions += 1
            stack.append((pos, len(self.trail), FALSE))
            self._assign(pos, FALSE)
            if not self._propagate():
                self.stats.conflicts += 1
                pos = self._backtrack(stack)
                if pos < 0:
                    return

    def _backtrack(self, stack: list) -> int:
        while stack:
            atom, mark, value = stack.pop()
            self._undo(mark)
            if value == FALSE:
                self.stats.decisions += 1
                stack.append((atom, mark, TRUE))
                self._assign(atom, TRUE)
                if self._propagate():
                    return atom
                self.stats.conflicts += 1
        return -1


def _check_aggregate_positions(all_rules: Iterable[Rule], aggregate_rules: list[Rule]) -> None:
    """Aggregates in rule bodies must not depend on the heads of those rules."""
    succ: dict[tuple, set] = {}
    for rule in all_rules:
        heads = [a.signature for a in rule.head.atoms]
        for lit in rule.body:
            deps = []
            if isinstance(lit, Literal):
                deps.append(lit.atom.signature)
            elif isinstance(lit, Aggregate):
                deps.extend(l.atom.signature for e in lit.elements for l in e.condition)
            for d in deps:
                succ.setdefault(d, set()).update(heads)
    for rule in aggregate_rules:
        inside = {l.atom.signature for lit in rule.body if isinstance(lit, Aggregate) for e in lit.elements for l in e.condition}
        stack = [a.signature for a in rule.head.atoms]
        seen = set(stack)
        while stack:
            node = stack.pop()
            if node in inside:
                raise EngineError(f"aggregate depends recursively on the head of its rule: {rule}")
            for nxt in succ.get(node, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)


def enumerate_answer_sets(ground: GroundProgram, config: EngineConfig = EngineConfig()) -> Iterator[frozenset]:
    return Solver(ground, config).answer_sets()


def is_coherent(ground: GroundProgram) -> bool:
    return next(enumerate_answer_sets(ground, EngineConfig(limit=1)), None) is not None


def brute_force_answer_sets(ground: GroundProgram, cap: int = DEFAULT_BRUTE_FORCE_CAP) -> set[frozenset]:
    """All answer sets by testing every subset of the Herbrand base with :func:`is_answer_set`."""
    base = sorted(ground.base, key=atom_key)
    if len(base) > cap:
        raise CapExceeded(f"Herbrand base has {len(base)} atoms; brute force is capped at {cap}")
    found = set()
    for mask in range(1 << len(base)):
        interp = frozenset(a for i, a in enumerate(base) if mask >> i & 1)
        if is_answer_set(ground, interp):
            found.add(interp)
    return found
