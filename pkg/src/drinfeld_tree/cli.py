"""Command-line front end.

Exit status: 0 success, 2 parse error, 3 precondition violated, 4 internal
invariant failed (the invariant is named on stderr).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvariantError, ParseError, PreconditionError

ENV_PREFIX = "DRINFELD_TREE_"


@dataclass
class RunConfig:
    subcommand: str
    q: int = 2
    seed: int = 0
    output: str | None = None
    fmt: str = "json"
    ideal: str | None = None
    level: str | None = None
    prime: str | None = None
    a: str | None = None
    b: str | None = None
    g: str | None = None
    delta: str | None = None
    extra_depth: int = 2
    degree_bound: int | None = None
    deg_bound: int | None = None
    denom_bound: int | None = None
    max_iter: int = 64
    suite: str = "paper"
    criteria: list = field(default_factory=list)

    def validate(self) -> None:
        if self.q < 2:
            raise PreconditionError("q must be at least 2")
        for name in ("extra_depth", "max_iter"):
            if getattr(self, name) < 0:
                raise PreconditionError(f"{name} must be non-negative")
        for name in ("degree_bound", "deg_bound", "denom_bound"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise PreconditionError(f"{name} must be positive")


def _env_int(name: str, default):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise PreconditionError(f"{ENV_PREFIX + name} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="drinfeld-tree", description=__doc__.splitlines()[0])
    p.add_argument("--q", type=int, default=None, help="field size (default 2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", help="write the artifact here instead of stdout")
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("quotient-graph")
    s.add_argument("--ideal", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--dot", action="store_const", const="dot", dest="fmt")
    g.add_argument("--json", action="store_const", const="json", dest="fmt")
    s.add_argument("--extra-depth", type=int, default=None)

    s = sub.add_parser("hecke-matrix")
    s.add_argument("--level", required=True)
    s.add_argument("--prime", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--csv", action="store_const", const="csv", dest="fmt")
    g.add_argument("--json", action="store_const", const="json", dest="fmt")

    s = sub.add_parser("winding")
    s.add_argument("--level", required=True)
    s.add_argument("--prime", required=True)

    s = sub.add_parser("modular-symbol")
    s.add_argument("--level", required=True)
    s.add_argument("--a", required=True, help="cusp, e.g. 0, 1/T or inf")
    s.add_argument("--b", required=True)

    s = sub.add_parser("eisenstein-index")
    s.add_argument("--level", required=True)
    s.add_argument("--degree-bound", type=int, default=None)

    s = sub.add_parser("torsion")
    s.add_argument("--g", required=True)
    s.add_argument("--delta", required=True)
    s.add_argument("--deg-bound", type=int, default=None)
    s.add_argument("--denom-bound", type=int, default=None)
    s.add_argument("--max-iter", type=int, default=None)

    for name in ("reduction-type", "newton"):
        s = sub.add_parser(name)
        s.add_argument("--g", required=True)
        s.add_argument("--delta", required=True)
        s.add_argument("--prime", required=True)

    s = sub.add_parser("verify")
    s.add_argument("--suite", default="paper", choices=["paper"])
    s.add_argument("--criterion", type=int, action="append", default=[], dest="criteria")
    return p


def config_from_args(argv: Sequence[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    d = vars(ns)
    cfg = RunConfig(subcommand=d["subcommand"])
    cfg.q = d["q"] if d.get("q") is not None else _env_int("Q", 2)
    cfg.seed = d["seed"]
    cfg.output = d.get("output")
    for key in ("ideal", "level", "prime", "a", "b", "g", "delta", "suite"):
        if d.get(key) is not None:
            setattr(cfg, key, d[key])
    cfg.criteria = d.get("criteria") or []
    if d.get("fmt"):
        cfg.fmt = d["fmt"]
    elif cfg.subcommand == "hecke-matrix":
        cfg.fmt = "csv"
    cfg.extra_depth = d.get("extra_depth") if d.get("extra_depth") is not None else _env_int("EXTRA_DEPTH", 2)
    cfg.degree_bound = d.get("degree_bound") if d.get("degree_bound") is not None else _env_int("DEGREE_BOUND", None)
    cfg.deg_bound = d.get("deg_bound") if d.get("deg_bound") is not None else _env_int("DEG_BOUND", None)
    cfg.denom_bound = d.get("denom_bound") if d.get("denom_bound") is not None else _env_int("DENOM_BOUND", None)
    cfg.max_iter = d.get("max_iter") if d.get("max_iter") is not None else _env_int("MAX_ITER", 64)
    return cfg


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _module(cfg: RunConfig):
    from .drinfeld import DrinfeldModule
    from .parse import parse_ratfn

    return DrinfeldModule(parse_ratfn(cfg.g, cfg.q), parse_ratfn(cfg.delta, cfg.q))


def _ideal(text: str, q: int):
    from .ideals import IdealA
    from .parse import parse_poly

    return IdealA(parse_poly(text, q))


def _prime(text: str, q: int):
    P = _ideal(text, q)
    if P.deg < 1 or not P.is_prime:
        raise PreconditionError(f"{text} does not generate a prime ideal")
    return P


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one subcommand; returns (exit status, artifact text)."""
    cfg.validate()
    random.seed(cfg.seed)
    from . import harmonic as H
    from .quotient import build_quotient_graph

    sc = cfg.subcommand
    if sc == "quotient-graph":
        G = build_quotient_graph(_ideal(cfg.ideal, cfg.q), cfg.extra_depth)
        return 0, (G.to_dot() if cfg.fmt == "dot" else G.to_json() + "\n")

    if sc == "hecke-matrix":
        level = _ideal(cfg.level, cfg.q)
        qq = _prime(cfg.prime, cfg.q)
        H.hecke_coset_reps(qq, level)  # precondition: q does not divide the level
        M = H.hecke_matrix(qq, build_quotient_graph(level, cfg.extra_depth))
        if cfg.fmt == "csv":
            return 0, M.to_csv()
        return 0, _dump({"level": str(level.gen), "prime": str(qq.gen), "matrix": M.matrix})

    if sc == "winding":
        level = _ideal(cfg.level, cfg.q)
        qq = _prime(cfg.prime, cfg.q)
        G = build_quotient_graph(level, cfg.extra_depth)
        H.hecke_coset_reps(qq, level)
        w = H.winding_image(qq, G)
        obj = w.to_json_obj()
        obj["h1_coordinates"] = H.h1_basis(G).coordinates(w) if G.betti else []
        return 0, _dump(obj)

    if sc == "modular-symbol":
        G = build_quotient_graph(_ideal(cfg.level, cfg.q), cfg.extra_depth)
        a, b = H.parse_cusp(cfg.a, cfg.q), H.parse_cusp(cfg.b, cfg.q)
        c = H.modular_symbol(a, b, G)
        obj = c.to_json_obj()
        obj["a"], obj["b"] = str(a), str(b)
        return 0, _dump(obj)

    if sc == "eisenstein-index":
        G = build_quotient_graph(_ideal(cfg.level, cfg.q), cfg.extra_depth)
        rep = H.eisenstein_index(G, cfg.degree_bound)
        return 0, _dump(rep.to_json_obj())

    if sc == "torsion":
        from .drinfeld import torsion_module

        tm = torsion_module(_module(cfg), cfg.deg_bound, cfg.denom_bound, cfg.max_iter)
        return 0, _dump({
            "m": str(tm.m.gen), "n": str(tm.n.gen), "order": tm.order,
            "points": sorted(str(x) for x in tm.points),
            "generators": [str(x) for x in tm.generators],
            "budget_exceeded": tm.budget_exceeded,
            "required_deg_bound": tm.required_deg_bound,
            "required_denom_bound": tm.required_denom_bound,
            "notes": list(tm.notes),
        })

    if sc == "reduction-type":
        from .drinfeld import reduction_type

        return 0, reduction_type(_module(cfg), _prime(cfg.prime, cfg.q)) + "\n"

    if sc == "newton":
        from .drinfeld import newton_slopes

        npoly = newton_slopes(_module(cfg), _prime(cfg.prime, cfg.q))
        return 0, _dump({"slopes": [[str(s), m] for s, m in npoly.slopes],
                         "points": [list(p) for p in npoly.points]})

    if sc == "verify":
        from .checks import run_suite

        lines, failed = [], []
        for name, results, secs in run_suite(cfg.suite, cfg.criteria or None):
            # timings go to stderr so the artifact itself is reproducible
            print(f"{name}: {secs:.2f}s", file=sys.stderr)
            lines.append(f"# {name}")
            for r in results:
                lines.append(r.line())
                if not r.ok:
                    failed.append(r.name)
        lines.append(f"# {len(failed)} failed")
        text = "\n".join(lines) + "\n"
        if failed:
            raise _SuiteFailed(text, failed)
        return 0, text

    raise PreconditionError(f"unknown subcommand {sc}")


class _SuiteFailed(InvariantError):
    def __init__(self, text: str, failed: list):
        self.text = text
        super().__init__(failed[0], f"{len(failed)} check(s) failed")


def _emit(cfg: RunConfig | None, text: str) -> None:
    if cfg is not None and cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    cfg = None
    try:
        cfg = config_from_args(argv)
        status, text = run(cfg)
        _emit(cfg, text)
        return status
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except _SuiteFailed as exc:
        _emit(cfg, exc.text)
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except InvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (PreconditionError, ValueError, ZeroDivisionError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
