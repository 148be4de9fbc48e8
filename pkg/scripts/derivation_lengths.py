"""Innermost vs outermost derivation lengths on the nested-existential family.

    python scripts/derivation_lengths.py --max-n 8 --literal-up-to 4 --csv lengths.csv
"""
import argparse
import csv
import sys
import time
from dataclasses import asdict, dataclass, fields

from epselim.generate import nested_existentials
from epselim.lengths import LengthRow, derivation_length_stats


@dataclass
class LengthsConfig:
    max_n: int = 8
    literal_up_to: int = 4   # also normalize literally and compare, up to this n
    csv: str = ""


def _digits(k: int) -> str:
    s = str(k)
    return s if len(s) <= 18 else f"{s[:6]}...e{len(s) - 1}"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=LengthsConfig.max_n)
    ap.add_argument("--literal-up-to", type=int, default=LengthsConfig.literal_up_to)
    ap.add_argument("--csv", default="")
    cfg = LengthsConfig(**vars(ap.parse_args(argv)))

    t0 = time.perf_counter()
    rows = derivation_length_stats(nested_existentials, cfg.max_n, cfg.literal_up_to)
    print(f"{'n':>2} {'strategy':>9} {'steps':>22} {'eps depth':>9} {'eps count':>22}")
    for r in rows:
        print(f"{r.n:>2} {r.strategy:>9} {_digits(r.steps):>22} {r.eps_depth:>9} {_digits(r.eps_count):>22}")
    print(f"# {time.perf_counter() - t0:.2f} s", file=sys.stderr)

    if cfg.csv:
        with open(cfg.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, [f.name for f in fields(LengthRow)])
            w.writeheader()
            w.writerows(asdict(r) for r in rows)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
