"""Seeded random ground programs for oracle sweeps."""

from __future__ import annotations

import random

from .model import Atom, Disjunction, Literal, Program, Rule


def _atoms(n: int) -> list[Atom]:
    return [Atom(f"p{i}") for i in range(1, n + 1)]


def _body(rng: random.Random, atoms: list[Atom], max_len: int, neg_rate: float) -> tuple:
    size = rng.randint(0, min(max_len, len(atoms)))
    return tuple(Literal(a, rng.random() < neg_rate) for a in rng.sample(atoms, size))


def random_normal_program(
    rng: random.Random, max_atoms: int = 8, max_rules: int = 12, neg_rate: float = 0.4
) -> Program:
    """Constraint-free normal program over propositional atoms ``p1..pn``."""
    atoms = _atoms(rng.randint(1, max_atoms))
    rules = []
    for _ in range(rng.randint(0, max_rules)):
        rules.append(Rule(Disjunction((rng.choice(atoms),)), _body(rng, atoms, 3, neg_rate)))
    return Program(tuple(rules))


def random_disjunctive_program(
    rng: random.Random, max_atoms: int = 12, max_rules: int = 14, neg_rate: float = 0.35
) -> Program:
    """Disjunctive rules plus occasional constraints, facts and incoherent loops."""
    atoms = _atoms(rng.randint(1, max_atoms))
    rules = []
    for _ in range(rng.randint(0, max_rules)):
        kind = rng.random()
        if kind < 0.15:
            body = _body(rng, atoms, 3, 0.5) or (Literal(rng.choice(atoms)),)
            rules.append(Rule(Disjunction(()), body))
            continue
        width = 1 if kind < 0.6 or len(atoms) < 2 else rng.randint(2, min(3, len(atoms)))
        head = tuple(dict.fromkeys(rng.sample(atoms, width)))
        rules.append(Rule(Disjunction(head), _body(rng, atoms, 3, neg_rate)))
    return Program(tuple(rules))

