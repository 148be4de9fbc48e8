"""Command-line entry point.

    epselim normalize -e "exists x. P(x)" --trace
    epselim check-confluence --count 1000 --size 12 --seed 42
    epselim ars-check system.ars --source 0
    epselim stats --max-n 8
    epselim graph -e "exists x. exists y. R(x, y)"

Exit codes: 0 ok, 1 parse or usage error, 2 fuse exceeded, 3 confluence
violation, 4 a theorem condition fails, 5 conditions hold but the
conclusion fails.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from typing import Optional, TextIO

from .ars import ArsError, check_klop_theorem, format_ars, parse_ars, reachable_set
from .fuzz import FuzzConfig, check_formula, run_fuzz, shrink, summary_table
from .generate import GeneratorConfig, nested_existentials
from .lengths import derivation_length_stats
from .strategy import (
    BoundExceeded, DerivationTrace, Fuse, FuseExceeded, Strategy, normalize, reduction_graph,
)
from .textio import ParseError, parse_formula, print_formula, read_corpus

EXIT_OK, EXIT_PARSE, EXIT_FUSE, EXIT_CONFLUENCE, EXIT_CONDITION, EXIT_FALSIFIED = range(6)

TRACE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["start", "steps", "final", "stats"],
    "additionalProperties": False,
    "properties": {
        "start": {"type": "string"},
        "final": {"type": "string"},
        "strategy": {"type": "string"},
        "steps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["pos", "kind", "q", "binder", "after"],
                "additionalProperties": False,
                "properties": {
                    "pos": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "kind": {"enum": ["step0", "step1"]},
                    "q": {"enum": ["exists", "forall"]},
                    "binder": {"type": "string"},
                    "after": {"type": "string"},
                    "redexes": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["pos", "kind", "q", "binder"],
                            "properties": {
                                "pos": {"type": "array", "items": {"type": "integer"}},
                                "kind": {"enum": ["step0", "step1"]},
                                "q": {"enum": ["exists", "forall"]},
                                "binder": {"type": "string"},
                            },
                        },
                    },
                },
            },
        },
        "stats": {
            "type": "object",
            "required": ["steps", "quantifiers", "epsCount", "epsDepth"],
            "properties": {
                "steps": {"type": "integer", "minimum": 0},
                "quantifiers": {"type": "integer", "minimum": 0},
                "epsCount": {"type": "integer", "minimum": 0},
                "epsDepth": {"type": "integer", "minimum": 0},
            },
        },
    },
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    strategy: str = "innermost"
    seed: Optional[int] = None
    fuse: Fuse = Fuse()
    expr: Optional[str] = None
    path: Optional[str] = None
    format: str = "text"
    trace: bool = False

    def __post_init__(self):
        if self.command in ("normalize", "graph") and (self.expr is None) == (self.path is None):
            raise ValueError("give exactly one of -e EXPR or -f FILE")
        if self.strategy == "random" and self.seed is None:
            raise ValueError("--strategy random needs --seed")
        if self.seed is not None and not 0 <= self.seed < 1 << 64:
            raise ValueError("--seed must be an unsigned 64-bit integer")

    def strategy_obj(self) -> Strategy:
        return Strategy(self.strategy, self.seed if self.strategy == "random" else None)

    def formulas(self) -> list:
        if self.expr is not None:
            return [parse_formula(self.expr)]
        with open(self.path, encoding="utf-8") as fh:
            return read_corpus(fh.read())


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _input_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("-e", dest="expr", metavar="EXPR", help="formula given inline")
    g.add_argument("-f", dest="path", metavar="FILE", help="corpus file, one formula per line")


def _generator_args(p: argparse.ArgumentParser) -> None:
    d = GeneratorConfig()
    p.add_argument("--size", type=int, default=d.size_bound, help="formula size bound")
    p.add_argument("--max-depth", type=int, default=d.max_depth)
    p.add_argument("--max-quantifiers", type=int, default=d.max_quantifiers)
    p.add_argument("--quantifier-prob", type=float, default=d.quantifier_prob)
    p.add_argument("--vacuous-prob", type=float, default=d.vacuous_prob)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="epselim", description="Quantifier elimination by epsilon terms.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("normalize", help="rewrite formulas to quantifier-free normal form")
    _input_args(p)
    p.add_argument("--strategy", choices=["innermost", "outermost", "random", "parallel"],
                   default="innermost")
    p.add_argument("--seed", type=int)
    p.add_argument("--fuse", type=int, default=Fuse().max_steps, metavar="N",
                   help="abort after N steps")
    p.add_argument("--fuse-nodes", type=int, default=Fuse().max_nodes, metavar="N",
                   help="abort once a formula has more than N nodes")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("check-confluence", help="fuzz all strategies on a seeded corpus")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--random-runs", type=int, default=5)
    p.add_argument("--graph-bound", type=int, default=5000)
    p.add_argument("--fuse", type=int, default=Fuse().max_steps, metavar="N")
    p.add_argument("--per-formula", action="store_true", help="print one line per formula")
    _generator_args(p)

    p = sub.add_parser("ars-check", help="check the theorem conditions on a finite ARS")
    p.add_argument("file")
    p.add_argument("--source", type=int, default=0, help="node a")
    p.add_argument("--nf", type=int, help="normal form a' (default: the unique one reachable)")

    p = sub.add_parser("stats", help="derivation lengths on nested existentials")
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--literal-up-to", type=int, default=4,
                   help="cross-check against literal runs up to this n")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("graph", help="export the full reduction graph as a finite ARS")
    _input_args(p)
    p.add_argument("--bound", type=int, default=5000)
    p.add_argument("--annotate", action="store_true", help="add '# id: formula' comments")
    return ap


# -- normalize ---------------------------------------------------------------------

def _redex_json(r) -> dict:
    return {"pos": list(r.pos), "kind": r.kind.value, "q": r.q.value, "binder": r.var}


def trace_json(t: DerivationTrace, strategy: Optional[Strategy] = None) -> dict:
    steps = []
    for s in t.steps:
        d = _redex_json(s.redex)
        d["after"] = print_formula(s.after)
        if len(s.redexes) > 1:
            d["redexes"] = [_redex_json(r) for r in s.redexes]
        steps.append(d)
    doc = {
        "start": print_formula(t.start),
        "steps": steps,
        "final": print_formula(t.final),
        "stats": {
            "steps": t.step_count,
            "quantifiers": t.start.n_quant,
            "epsCount": t.final.n_eps,
            "epsDepth": t.final.eps_depth,
        },
    }
    if strategy is not None:
        doc["strategy"] = str(strategy)
    return doc


def trace_lines(t: DerivationTrace) -> list[str]:
    out = []
    for k, s in enumerate(t.steps, 1):
        where = " ".join(f"{list(r.pos)}" for r in s.redexes)
        binders = ", ".join(f"{r.q} {r.var}" for r in s.redexes)
        out.append(f"step {k}: {s.kind} at {where} quantifier {binders} -> {print_formula(s.after)}")
    return out


def cmd_normalize(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    try:
        formulas = cfg.formulas()
    except ParseError as exc:
        print(f"parse error: {exc}", file=err)
        return EXIT_PARSE
    strategy = cfg.strategy_obj()
    docs = []
    for f in formulas:
        try:
            t = normalize(f, strategy, cfg.fuse)
        except FuseExceeded as exc:
            print(f"fuse exceeded on {print_formula(f)}: {exc}", file=err)
            print("this contradicts termination; trace prefix follows", file=err)
            for line in trace_lines(exc.trace)[:20]:
                print(f"  {line}", file=err)
            return EXIT_FUSE
        if cfg.format == "json":
            docs.append(trace_json(t, strategy))
            continue
        if cfg.trace:
            print(f"start: {print_formula(f)}", file=out)
            for line in trace_lines(t):
                print(line, file=out)
        print(print_formula(t.final), file=out)
        if cfg.trace:
            print(f"steps: {t.step_count}", file=out)
    if cfg.format == "json":
        json.dump(docs[0] if cfg.expr is not None else docs, out, indent=2)
        out.write("\n")
    return EXIT_OK


# -- check-confluence ----------------------------------------------------------------

def cmd_check_confluence(args, out: TextIO, err: TextIO) -> int:
    gen = replace(GeneratorConfig(), size_bound=args.size, max_depth=args.max_depth,
                  max_quantifiers=args.max_quantifiers,
                  quantifier_prob=args.quantifier_prob, vacuous_prob=args.vacuous_prob)
    cfg = FuzzConfig(count=args.count, seed=args.seed, random_runs=args.random_runs,
                     graph_bound=args.graph_bound, fuse=Fuse(max_steps=args.fuse), generator=gen)

    def progress(rep):
        if args.per_formula:
            print(rep.line(), file=out)

    reports = run_fuzz(cfg, progress)
    for line in summary_table(reports):
        print(line, file=out)
    bad = [r for r in reports if not r.ok]
    if not bad:
        return EXIT_OK
    first = bad[0]
    small = shrink(first.formula, lambda g: not check_formula(g, cfg, first.index).ok)
    print(f"violation in formula #{first.index}: {print_formula(first.formula)}", file=out)
    for v in first.violations:
        print(f"  {v}", file=out)
    print(f"minimized: {print_formula(small)}", file=out)
    for v in check_formula(small, cfg, first.index).violations:
        print(f"  {v}", file=out)
    return EXIT_CONFLUENCE


# -- ars-check -----------------------------------------------------------------------

def cmd_ars_check(args, out: TextIO, err: TextIO) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            sys_ = parse_ars(fh.read())
        a_prime = args.nf
        if a_prime is None:
            s0, s1 = sys_.masks()
            if not 0 <= args.source < sys_.size:
                raise ArsError(f"node {args.source} not in carrier")
            nfs = sorted(v for v in reachable_set(sys_, args.source) if not (s0[v] | s1[v]))
            if len(nfs) != 1:
                raise ArsError(f"{len(nfs)} normal forms reachable from {args.source}; pass --nf")
            a_prime = nfs[0]
        rep = check_klop_theorem(sys_, args.source, a_prime)
    except (ArsError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    for line in rep.lines():
        print(line, file=out)
    if rep.violates_theorem:
        print("THEOREM FALSIFIED: all conditions hold but the conclusion fails", file=err)
        return EXIT_FALSIFIED
    if not rep.applicable:
        return EXIT_CONDITION
    return EXIT_OK


# -- stats / graph -------------------------------------------------------------------

def cmd_stats(args, out: TextIO, err: TextIO) -> int:
    rows = derivation_length_stats(nested_existentials, args.max_n, args.literal_up_to)
    if args.format == "json":
        json.dump([r.__dict__ for r in rows], out, indent=2)
        out.write("\n")
        return EXIT_OK
    print(f"{'n':>2} {'strategy':<9} {'epsDepth':>8}  steps", file=out)
    for r in rows:
        print(f"{r.n:>2} {r.strategy:<9} {r.eps_depth:>8}  {r.steps}", file=out)
    return EXIT_OK


def cmd_graph(cfg: RunConfig, args, out: TextIO, err: TextIO) -> int:
    try:
        formulas = cfg.formulas()
    except ParseError as exc:
        print(f"parse error: {exc}", file=err)
        return EXIT_PARSE
    for f in formulas:
        try:
            g = reduction_graph(f, args.bound)
        except BoundExceeded as exc:
            print(f"error: {exc}", file=err)
            return EXIT_PARSE
        if args.annotate:
            for i, node in enumerate(g.nodes):
                print(f"# {i}: {print_formula(node)}", file=out)
        out.write(format_ars(g.to_ars()))
    return EXIT_OK


def main(argv: Optional[list[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "normalize":
            cfg = RunConfig("normalize", args.strategy, args.seed,
                            Fuse(args.fuse, args.fuse_nodes), args.expr, args.path,
                            args.format, args.trace)
            return cmd_normalize(cfg, out, err)
        if args.command == "graph":
            cfg = RunConfig("graph", expr=args.expr, path=args.path)
            return cmd_graph(cfg, args, out, err)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    if args.command == "check-confluence":
        return cmd_check_confluence(args, out, err)
    if args.command == "ars-check":
        return cmd_ars_check(args, out, err)
    return cmd_stats(args, out, err)


if __name__ == "__main__":
    sys.exit(main())
