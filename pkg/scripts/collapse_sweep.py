#!/usr/bin/env python3
"""Sweep threshold entailment against classical entailment.

Enumerates one representative per semantic class of formulas over a small
atom set, forms every hypothesis set of size <= 2, and compares the
conjunctive threshold entailment with classical entailment at several
threshold pairs.  The two relations are expected to coincide everywhere.
"""

import argparse
import itertools
import time
from fractions import Fraction

from pplogic import pqentail, prop


def semantic_class_pool(atom_indices, rounds=3):
    scope = frozenset(atom_indices)
    seen = {}

    def add(f):
        key = prop._models_mask(f, scope)
        if key not in seen:
            seen[key] = f

    for i in sorted(atom_indices):
        add(prop.Atom(i))
    for _ in range(rounds):
        current = list(seen.values())
        for f in current:
            add(prop.Not(f))
        for a in current:
            for b in current:
                add(prop.Implies(a, b))
                add(prop.conj(a, b))
                add(prop.disj(a, b))
    return list(seen.values())


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--atoms", type=int, default=2, help="number of atoms (default 2)")
    parser.add_argument(
        "--thresholds",
        default="1/1:1/1,3/4:1/2,1/2:1/2,1/10:1/10",
        help="comma-separated p:q pairs",
    )
    args = parser.parse_args()

    pool = semantic_class_pool(range(1, args.atoms + 1))
    hypothesis_sets = (
        [()] + [(a,) for a in pool] + [tuple(c) for c in itertools.combinations(pool, 2)]
    )
    pairs = [
        pqentail.ThresholdPair(Fraction(p), Fraction(q))
        for p, q in (part.split(":") for part in args.thresholds.split(","))
    ]
    print(f"{len(pool)} formula classes, {len(hypothesis_sets)} hypothesis sets")
    grand_total = grand_disagree = 0
    for t in pairs:
        start = time.perf_counter()
        total = entailments = disagreements = 0
        for deltas in hypothesis_sets:
            for alpha in pool:
                classical, threshold = pqentail.collapse_check(list(deltas), alpha, t)
                total += 1
                entailments += classical
                disagreements += classical != threshold
        elapsed = time.perf_counter() - start
        print(
            f"p={t.p} q={t.q}: {total} instances, {entailments} entail, "
            f"{disagreements} disagreements ({elapsed:.1f}s)"
        )
        grand_total += total
        grand_disagree += disagreements
    print(f"total: {grand_total} instances, {grand_disagree} disagreements")
    return 1 if grand_disagree else 0


if __name__ == "__main__":
    raise SystemExit(main())
