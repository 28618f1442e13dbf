"""Threshold entailment between classical formulas under stochastic
valuations, decided by exact linear feasibility over the joint-distribution
polytope.

Two notions are implemented.  The hypothesis-wise form requires every
hypothesis separately to reach probability p; the conjunctive form
requires the single conjunction of the hypotheses to reach p.  Only the
conjunctive form behaves like a consequence relation, and for valid
threshold pairs (0 < q <= p <= 1) it coincides with classical entailment.

Quantification over all stochastic valuations reduces to joints over the
union scope A of the formulas involved: each formula's probability depends
only on the marginal over A, and every distribution on A is the marginal
of some carrier-A valuation.  For a finite hypothesis set the conjunctive
form may take the whole set as its finite witness subset: the conjunction
of more hypotheses entails the conjunction of fewer, so probability
monotonicity shrinks the constraint region as the subset grows, and any
witnessing subset implies the full set witnesses too.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Tuple

from . import prop, rcof, stochval

ZERO = Fraction(0)
ONE = Fraction(1)


class InvalidThresholds(ValueError):
    """Threshold pair outside 0 < q <= p <= 1."""


@dataclass(frozen=True)
class ThresholdPair:
    p: Fraction
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))
        if not (ZERO < self.q <= self.p <= ONE):
            raise InvalidThresholds(f"need 0 < q <= p <= 1, got p={self.p}, q={self.q}")


def p_satisfies(V: stochval.StochasticValuation, alpha: prop.PropFormula, p) -> bool:
    """Whether ``alpha`` reaches probability at least ``p`` under V."""
    p = Fraction(p)
    if not (ZERO <= p <= ONE):
        raise ValueError(f"threshold {p} outside [0,1]")
    return stochval.prob(V, alpha) >= p


def find_refuting_valuation(
    deltas: Iterable[prop.PropFormula],
    alpha: prop.PropFormula,
    p,
    q,
    cap: int = prop.DEFAULT_SCOPE_CAP,
) -> Optional[stochval.StochasticValuation]:
    """A valuation giving every hypothesis probability >= p and the
    conclusion probability < q, or None when no such valuation exists.

    Feasibility of {simplex constraints, sum of hypothesis-model masses
    >= p per hypothesis, sum of conclusion-model masses < q} is decided
    exactly; a feasible point is returned as a carrier-A valuation.
    """
    deltas = list(deltas)
    p, q = Fraction(p), Fraction(q)
    for value, name in ((p, "p"), (q, "q")):
        if not (ZERO <= value <= ONE):
            raise ValueError(f"threshold {name}={value} outside [0,1]")
    A = prop.atoms_of(alpha)
    for d in deltas:
        A = A | prop.atoms_of(d)
    prop._check_enumerable(A, cap)
    n = 1 << len(A)
    atoms = []
    # simplex: y_m >= 0, sum y_m = 1   (variable m is the mass of subset m)
    for m in range(n):
        atoms.append(rcof.LinearAtom.make({m: Fraction(-1)}, ZERO, rcof.REL_LE))
    atoms.append(rcof.LinearAtom.make({m: ONE for m in range(n)}, -ONE, rcof.REL_EQ))
    for d in deltas:
        bits = prop._models_mask(d, A)
        coeffs = {m: -ONE for m in range(n) if bits >> m & 1}
        atoms.append(rcof.LinearAtom.make(coeffs, p, rcof.REL_LE))  # p - sum <= 0
    bits = prop._models_mask(alpha, A)
    coeffs = {m: ONE for m in range(n) if bits >> m & 1}
    atoms.append(rcof.LinearAtom.make(coeffs, -q, rcof.REL_LT))  # sum - q < 0
    values = rcof.fm_feasible(atoms)
    if values is None:
        return None
    joint = stochval.FinDist.from_masks(A, {m: values.get(m, ZERO) for m in range(n)})
    return stochval.StochasticValuation(A, joint)


def hailperin_entails(
    deltas: Iterable[prop.PropFormula],
    alpha: prop.PropFormula,
    p,
    q,
    cap: int = prop.DEFAULT_SCOPE_CAP,
) -> bool:
    """Hypothesis-wise threshold entailment: every valuation giving each
    hypothesis probability >= p gives the conclusion probability >= q.

    Any p, q in [0,1] are accepted.
    """
    return find_refuting_valuation(deltas, alpha, p, q, cap) is None


def pq_entails(
    deltas: Iterable[prop.PropFormula],
    alpha: prop.PropFormula,
    thresholds: ThresholdPair,
    cap: int = prop.DEFAULT_SCOPE_CAP,
) -> bool:
    """Conjunctive threshold entailment at a valid threshold pair.

    The hypotheses are conjoined (empty set: the constant-true formula)
    and the single conjunction must reach p for the conclusion to owe q.
    """
    conjunction = prop.conj_all(sorted(set(deltas), key=prop.to_text))
    return hailperin_entails([conjunction], alpha, thresholds.p, thresholds.q, cap)


def collapse_check(
    deltas: Iterable[prop.PropFormula],
    alpha: prop.PropFormula,
    thresholds: ThresholdPair,
    cap: int = prop.DEFAULT_SCOPE_CAP,
) -> Tuple[bool, bool]:
    """Classical entailment next to threshold entailment; the two must agree."""
    deltas = list(deltas)
    return (
        prop.entails_c(deltas, alpha, cap),
        pq_entails(deltas, alpha, thresholds, cap),
    )
