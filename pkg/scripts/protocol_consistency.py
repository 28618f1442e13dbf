#!/usr/bin/env python3
"""Consistency check for a probability-logic theory file.

Reads one formula per line (# comments allowed), then decides whether the
conjunction of the theory implies a certainly-false statement.  If that
implication is refutable, the refuting valuation is a model of the whole
theory: it is printed and every axiom is re-checked against it.
"""

import argparse
import sys
from pathlib import Path

from pplogic import ppl, prop, rcof, stochval, validity


def load_theory(path: Path):
    formulas = []
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            formulas.append(ppl.parse(line))
    return formulas


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    default = Path(__file__).resolve().parent.parent / "fixtures" / "oblivious_transfer.ppl"
    parser.add_argument("theory", nargs="?", default=str(default), help="theory file")
    args = parser.parse_args()

    formulas = load_theory(Path(args.theory))
    print(f"theory: {args.theory} ({len(formulas)} axioms)")
    query = ppl.PplImplies(ppl.pand_all(formulas), ppl.PplAtom(prop.BOTTOM, "=", rcof.ONE))
    decision = validity.decide_validity(query)
    if decision.status == rcof.VALID:
        print("theory is INCONSISTENT: it implies a certainly-false statement")
        return 1
    if decision.status == rcof.UNSUPPORTED:
        print(f"undecided: {decision.reason}")
        return 2
    print("theory is consistent; witness model:")
    V = validity.valuation_from_assignment(decision.witness, validity.ppl_scope(query))
    print(" ", stochval.dist_to_json(V.joint))
    for f in formulas:
        ok = ppl.ppl_sat(V, decision.witness, f)
        print(f"  {'ok ' if ok else 'BAD'} {ppl.to_text(f)}")
        if not ok:
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
