"""Regenerate the .qasp files under corpus/ (hand-written files are kept)."""

import json
import random
from pathlib import Path

from qasp.corpus import generate
from qasp.parser import dumps_aspq
from qasp.qbf import eval_qbf, qbf_to_aspq, random_qbf
from qasp.qdimacs import dumps_qdimacs

ROOT = Path(__file__).resolve().parent.parent / "corpus"

# problem -> (seeds, size) kept small so every file solves in well under a second
PLAN = {"minmax": [(s, 4) for s in range(4)], "pebbling": [(0, 2), (1, 2), (2, 3), (3, 3)], "vc": [(s, 3) for s in range(4)]}


def write(name, text, sidecar):
    (ROOT / name).write_text(text)
    (ROOT / f"{name}.expected").write_text(json.dumps(sidecar, sort_keys=True) + "\n")


for problem, runs in PLAN.items():
    for seed, size in runs:
        text, expected, value = generate(problem, seed, size)
        verdict = "COHERENT" if expected else "INCOHERENT"
        write(f"{problem}-s{seed}.qasp", text, {"problem": problem, "seed": seed, "size": size, "expected": verdict, "oracle": value})

rng = random.Random("corpus-qbf")
for i, (kind, valid) in enumerate([("cnf", True), ("cnf", False), ("dnf", True), ("dnf", False)]):
    # draw until the formula has the wanted truth value, for a mixed corpus
    qbf = random_qbf(rng, max_vars=5, max_blocks=3, kind=kind)
    while eval_qbf(qbf) != valid:
        qbf = random_qbf(rng, max_vars=5, max_blocks=3, kind=kind)
    verdict = "COHERENT" if valid else "INCOHERENT"
    header = f"% translation of {qbf}\n"
    write(f"qbf-{kind}-{i}.qasp", header + dumps_aspq(qbf_to_aspq(qbf)), {"problem": "qbf", "expected": verdict})
    (ROOT / f"qbf-{kind}-{i}.qdimacs").write_text(dumps_qdimacs(qbf))

HAND = {"example1": "COHERENT", "exists_fact": "COHERENT", "forall_guess": "INCOHERENT", "budget": "COHERENT"}
for name, verdict in HAND.items():
    (ROOT / f"{name}.qasp.expected").write_text(json.dumps({"problem": "hand", "expected": verdict}, sort_keys=True) + "\n")

print(sorted(p.name for p in ROOT.glob("*.qasp")))
