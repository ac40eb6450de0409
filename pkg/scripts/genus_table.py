"""Betti numbers and cusp data of Gamma_0(p) \\ T for all primes p of small degree.

    python scripts/genus_table.py --q 2 --max-deg 5
"""

import argparse
import time
from dataclasses import dataclass

from drinfeld_tree.ideals import IdealA, primes_of_degree
from drinfeld_tree.quotient import build_quotient_graph


@dataclass
class Config:
    q: int = 2
    min_deg: int = 1
    max_deg: int = 5
    extra_depth: int = 2


def genus_rows(cfg: Config):
    for d in range(cfg.min_deg, cfg.max_deg + 1):
        for p in primes_of_degree(cfg.q, d):
            t0 = time.perf_counter()
            G = build_quotient_graph(IdealA(p), cfg.extra_depth)
            fv, fe = G.finite_part()
            w = G.vertices[G.w_vertex].stab_order if G.w_vertex is not None else "-"
            yield dict(deg=d, p=str(p), betti=G.betti, cusps=len(G.half_lines), fin_v=len(fv), fin_e=len(fe),
                       w_stab=w, secs=round(time.perf_counter() - t0, 2))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--min-deg", type=int, default=1)
    ap.add_argument("--max-deg", type=int, default=5)
    ap.add_argument("--extra-depth", type=int, default=2)
    cfg = Config(**vars(ap.parse_args()))
    cols = ["deg", "p", "betti", "cusps", "fin_v", "fin_e", "w_stab", "secs"]
    print("\t".join(cols))
    for row in genus_rows(cfg):
        print("\t".join(str(row[c]) for c in cols))


if __name__ == "__main__":
    main()
