"""Search small abstract reduction systems for witnesses that each of the
four hypotheses of the bridging theorem is needed, and sweep all systems
up to a size for counterexamples to the theorem itself.

    python scripts/necessity_search.py --max-nodes 4 --samples 20000
    python scripts/necessity_search.py --sweep --sweep-nodes 4 --sweep-edges 10
"""
import argparse
import time
from dataclasses import dataclass

from epselim.ars import exhaustive_soundness, format_ars, search_hypothesis_necessity


@dataclass
class SearchConfig:
    max_nodes: int = 4
    samples: int = 20_000
    seed: int = 0
    sweep: bool = False
    sweep_nodes: int = 4
    sweep_edges: int = 10


def main(argv=None) -> int:
    d = SearchConfig()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-nodes", type=int, default=d.max_nodes)
    ap.add_argument("--samples", type=int, default=d.samples)
    ap.add_argument("--seed", type=int, default=d.seed)
    ap.add_argument("--sweep", action="store_true")
    ap.add_argument("--sweep-nodes", type=int, default=d.sweep_nodes)
    ap.add_argument("--sweep-edges", type=int, default=d.sweep_edges)
    cfg = SearchConfig(**vars(ap.parse_args(argv)))

    t0 = time.perf_counter()
    found = search_hypothesis_necessity(cfg.max_nodes, cfg.samples, cfg.seed)
    print(f"witnesses for {len(found)} of 15 proper subsets ({time.perf_counter() - t0:.1f} s)")
    for held in sorted(found, key=lambda s: (len(s), sorted(s))):
        w = found[held]
        edges = format_ars(w.system).strip().replace("\n", "; ")
        print(f"  holds {sorted(held)!s:<12} a={w.a} a'={w.a_prime}  {edges}")

    if cfg.sweep:
        t0 = time.perf_counter()
        s = exhaustive_soundness(cfg.sweep_nodes, cfg.sweep_edges)
        print(f"sweep: {s.systems} systems, {s.applicable} satisfy all conditions, "
              f"{len(s.violations)} violations, {len(s.r0_empty_disagreements)} "
              f"disagreements on r0 empty ({time.perf_counter() - t0:.0f} s)")
        return 1 if s.violations or s.r0_empty_disagreements else 0
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
