"""Index of the Eisenstein ideal in the Hecke algebra for prime levels.

The last column is (q^d - 1)/(q - 1) for odd d and (q^d - 1)/(q^2 - 1) for
even d, printed next to the computed index for comparison only.  Degree 5
takes about a minute per prime.

    python scripts/eisenstein_indices.py --max-deg 4
"""

import argparse
import time
from dataclasses import dataclass

from drinfeld_tree.harmonic import eisenstein_index
from drinfeld_tree.ideals import IdealA, primes_of_degree
from drinfeld_tree.quotient import build_quotient_graph


@dataclass
class Config:
    q: int = 2
    min_deg: int = 3
    max_deg: int = 4
    degree_bound: int | None = None
    limit: int = 0  # primes per degree; 0 means all


def guess(q: int, d: int) -> int:
    return (q**d - 1) // (q - 1) if d % 2 else (q**d - 1) // (q * q - 1)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--min-deg", type=int, default=3)
    ap.add_argument("--max-deg", type=int, default=4)
    ap.add_argument("--degree-bound", type=int, default=None)
    ap.add_argument("--limit", type=int, default=0)
    cfg = Config(**vars(ap.parse_args()))
    print("p\tbetti\tindex\tcyclic\tstable\tsecs\tcompare")
    for d in range(cfg.min_deg, cfg.max_deg + 1):
        primes = primes_of_degree(cfg.q, d)
        if cfg.limit:
            primes = primes[:cfg.limit]
        for p in primes:
            t0 = time.perf_counter()
            G = build_quotient_graph(IdealA(p))
            if G.betti == 0:
                print(f"{p}\t0\t-\t-\t-\t-\t{guess(cfg.q, d)}")
                continue
            rep = eisenstein_index(G, cfg.degree_bound)
            idx = rep.index if rep.index is not None else "inf"
            print(f"{p}\t{G.betti}\t{idx}\t{rep.cyclic}\t{rep.stable}\t"
                  f"{time.perf_counter() - t0:.1f}\t{guess(cfg.q, d)}", flush=True)


if __name__ == "__main__":
    main()
