"""Rational torsion and reduction types over a box of rank-2 Drinfeld modules.

Enumerates phi_T = T + g tau + Delta tau^2 with g, Delta polynomials of degree
<= --max-deg, tabulates the torsion structure A/m x A/n, and counts reduction
types at the primes of degree <= --prime-deg.

    python scripts/torsion_survey.py --max-deg 2
"""

import argparse
from collections import Counter
from dataclasses import dataclass

from drinfeld_tree.checks import rank2_family
from drinfeld_tree.drinfeld import ReductionType, reduction_type, torsion_module
from drinfeld_tree.ideals import IdealA, primes_of_degree, valuation


@dataclass
class Config:
    q: int = 2
    max_deg: int = 2
    prime_deg: int = 3


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--max-deg", type=int, default=2)
    ap.add_argument("--prime-deg", type=int, default=3)
    cfg = Config(**vars(ap.parse_args()))

    fam = rank2_family(cfg.max_deg, cfg.q)
    shapes: Counter = Counter()
    budget = 0
    for phi in fam:
        tm = torsion_module(phi)
        budget += tm.budget_exceeded
        shapes[(str(tm.m.gen), str(tm.n.gen))] += 1
    print(f"{len(fam)} modules, {budget} hit the search budget")
    print("m\tn\tcount")
    for (m, n), k in sorted(shapes.items(), key=lambda t: (-t[1], t[0])):
        print(f"{m}\t{n}\t{k}")

    print("\nprime\tordinary\tsupersingular\tbad")
    for d in range(1, cfg.prime_deg + 1):
        for p in primes_of_degree(cfg.q, d):
            P = IdealA(p)
            c = Counter()
            for phi in fam:
                if valuation(phi.delta, P) > 0:
                    c[ReductionType.BAD] += 1
                else:
                    c[reduction_type(phi, P)] += 1
            print(f"{p}\t{c[ReductionType.ORDINARY]}\t{c[ReductionType.SUPERSINGULAR]}\t{c[ReductionType.BAD]}")


if __name__ == "__main__":
    main()
