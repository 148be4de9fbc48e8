"""Fuzz unique normal forms, termination and eps-count monotonicity over a
generated corpus, then shrink any failing formula.

    python scripts/confluence_fuzz.py --count 1000 --seed 42
"""
import argparse
import sys
import time
from dataclasses import dataclass

from epselim.fuzz import FuzzConfig, check_formula, run_fuzz, shrink, summary_table
from epselim.generate import GeneratorConfig
from epselim.textio import print_formula


@dataclass
class FuzzRun:
    fuzz: FuzzConfig
    show_failures: int = 5


def parse_args(argv=None) -> FuzzRun:
    d, g = FuzzConfig(), GeneratorConfig()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=d.count)
    ap.add_argument("--seed", type=int, default=d.seed)
    ap.add_argument("--random-runs", type=int, default=d.random_runs)
    ap.add_argument("--graph-bound", type=int, default=d.graph_bound)
    ap.add_argument("--max-quantifiers", type=int, default=g.max_quantifiers)
    ap.add_argument("--show-failures", type=int, default=5)
    a = ap.parse_args(argv)
    gen = GeneratorConfig(max_quantifiers=a.max_quantifiers)
    return FuzzRun(FuzzConfig(count=a.count, seed=a.seed, random_runs=a.random_runs,
                              graph_bound=a.graph_bound, generator=gen), a.show_failures)


def main(argv=None) -> int:
    run = parse_args(argv)
    t0 = time.perf_counter()
    reports = run_fuzz(run.fuzz)
    for line in summary_table(reports):
        print(line)
    failed = [r for r in reports if not r.ok]
    print(f"# {time.perf_counter() - t0:.1f} s", file=sys.stderr)

    for r in failed[:run.show_failures]:
        def still_fails(g, i=r.index):
            return not check_formula(g, run.fuzz, i).ok
        small = shrink(r.formula, still_fails)
        print(f"failure #{r.index}: {r.line()}")
        print(f"  shrunk to: {print_formula(small)}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
