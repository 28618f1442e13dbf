"""Workbench for probabilistic propositional logic.

Exact formula probabilities under finite-carrier stochastic valuations,
threshold entailment by linear feasibility, a validity decision procedure
over real closed ordered fields, and a Hilbert-style proof checker.
"""

from .config import Config
from .prop import (
    Atom,
    Implies,
    Not,
    PropFormula,
    Valuation,
    atoms_of,
    conj,
    disj,
    dnf,
    entails_c,
    evaluate,
    iff,
    models_over,
    parse,
    phi,
    to_text,
)
from .stochval import (
    FinDist,
    StochasticValuation,
    check_adams,
    check_consistency,
    induced_from_valuation,
    marginal,
    prob,
    psv,
    svp,
)
from .pqentail import ThresholdPair, collapse_check, hailperin_entails, p_satisfies, pq_entails
from .ppl import PplAtom, PplFormula, PplImplies, build_Q, ppl_sat, translate
from .rcof import Assignment, Decision, classify, decide, decide_universal_linear, emit_smtlib
from .validity import decide_validity, valuation_from_assignment
from .calculus import (
    Derivation,
    check_derivation,
    check_rr,
    check_taut,
    mp_star,
    parse_script,
    taut_star,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
