"""Shared generators for randomized and pool-based tests."""

from __future__ import annotations

import random
from fractions import Fraction

from pplogic import prop, stochval


def random_formula(rng: random.Random, atom_indices, depth: int) -> prop.PropFormula:
    """A random desugared formula of connective depth at most ``depth``."""
    if depth == 0 or rng.random() < 0.25:
        return prop.Atom(rng.choice(list(atom_indices)))
    pick = rng.randrange(5)
    if pick == 0:
        return prop.Not(random_formula(rng, atom_indices, depth - 1))
    a = random_formula(rng, atom_indices, depth - 1)
    b = random_formula(rng, atom_indices, depth - 1)
    if pick == 1:
        return prop.Implies(a, b)
    if pick == 2:
        return prop.conj(a, b)
    if pick == 3:
        return prop.disj(a, b)
    return prop.iff(a, b)


def random_valuation(rng: random.Random, carrier, max_numerator: int = 8) -> stochval.StochasticValuation:
    """A random exact joint over the carrier: integer weights, normalized."""
    carrier = frozenset(carrier)
    n = 1 << len(carrier)
    weights = [rng.randrange(0, max_numerator + 1) for _ in range(n)]
    if not any(weights):
        weights[rng.randrange(n)] = 1
    total = sum(weights)
    joint = stochval.FinDist.from_masks(
        carrier, {m: Fraction(w, total) for m, w in enumerate(weights) if w}
    )
    return stochval.StochasticValuation(carrier, joint)


def semantic_class_pool(atom_indices, rounds: int = 3) -> list:
    """One representative per semantic class reachable by formulas of
    connective depth <= rounds over the given atoms (first reached wins)."""
    scope = frozenset(atom_indices)
    seen: dict = {}

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
