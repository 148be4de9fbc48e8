"""Cross-strategy fuzzing: unique normal forms, exact innermost length,
acyclic reduction graphs, epsilon-count monotonicity, and greedy shrinking
of counterexamples."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .generate import GeneratorConfig, corpus
from .rewrite import RuleKind
from .strategy import (
    INNERMOST, OUTERMOST, PARALLEL, BoundExceeded, DerivationTrace, Fuse,
    FuseExceeded, SplitMix64, Strategy, normalize, random_strategy, reduction_graph,
)
from .syntax import Bin, Formula, Not, Quant, alpha_eq, positions, replace_at
from .textio import print_formula

__all__ = [
    "FuzzConfig", "FormulaReport", "strategies_for", "check_formula", "run_fuzz",
    "eps_monotonicity_violations", "shrink", "summary_table",
]


@dataclass(frozen=True)
class FuzzConfig:
    count: int = 1000
    seed: int = 42
    random_runs: int = 5
    graph_bound: int = 5000
    fuse: Fuse = Fuse()
    generator: GeneratorConfig = GeneratorConfig()


@dataclass
class FormulaReport:
    index: int
    formula: Formula
    quantifiers: int
    steps: dict[str, int] = field(default_factory=dict)
    graph_nodes: Optional[int] = None   # None when the graph exceeded the bound
    shortest: Optional[int] = None
    longest: Optional[int] = None
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def line(self) -> str:
        steps = " ".join(f"{k}={v}" for k, v in self.steps.items())
        graph = "-" if self.graph_nodes is None else (
            f"{self.graph_nodes} nodes, paths {self.shortest}..{self.longest}")
        return f"#{self.index} q={self.quantifiers} {steps} graph: {graph}"


def strategies_for(index: int, cfg: FuzzConfig) -> list[Strategy]:
    """The fixed strategies plus `random_runs` seeded random ones per formula."""
    rng = SplitMix64(cfg.seed * 0x100000001B3 + index)
    return [INNERMOST, OUTERMOST, PARALLEL] + [
        random_strategy(rng.next()) for _ in range(cfg.random_runs)]


def eps_monotonicity_violations(trace: DerivationTrace) -> list[str]:
    """Step0 keeps the epsilon count, Step1 raises it by at least one."""
    out = []
    prev = trace.start
    for k, step in enumerate(trace.steps, 1):
        if len(step.redexes) == 1:
            d = step.after.n_eps - prev.n_eps
            if step.kind is RuleKind.STEP0 and d != 0:
                out.append(f"step {k}: Step0 changed the epsilon count by {d}")
            if step.kind is RuleKind.STEP1 and d < 1:
                out.append(f"step {k}: Step1 changed the epsilon count by {d}")
        prev = step.after
    return out


def check_formula(f: Formula, cfg: FuzzConfig = FuzzConfig(), index: int = 0) -> FormulaReport:
    rep = FormulaReport(index, f, f.n_quant)
    finals: list[tuple[str, Formula]] = []
    for s in strategies_for(index, cfg):
        try:
            t = normalize(f, s, cfg.fuse)
        except FuseExceeded as exc:
            rep.violations.append(f"{s}: {exc}")
            continue
        rep.steps[str(s)] = t.step_count
        finals.append((str(s), t.final))
        if t.final.n_quant:
            rep.violations.append(f"{s}: final formula still has quantifiers")
        rep.violations += [f"{s}: {v}" for v in eps_monotonicity_violations(t)]
    if rep.steps.get("innermost") not in (None, f.n_quant):
        rep.violations.append(
            f"innermost took {rep.steps['innermost']} steps for {f.n_quant} quantifiers")
    if finals:
        name0, g0 = finals[0]
        for name, g in finals[1:]:
            if not alpha_eq(g0, g):
                rep.violations.append(f"{name0} and {name} disagree: "
                                      f"{print_formula(g0)} vs {print_formula(g)}")
    try:
        graph = reduction_graph(f, cfg.graph_bound)
    except BoundExceeded:
        return rep
    rep.graph_nodes = len(graph.nodes)
    if not graph.is_acyclic():
        rep.violations.append("reduction graph has a cycle")
        return rep
    nfs = graph.normal_forms()
    if len(nfs) != 1:
        rep.violations.append(f"{len(nfs)} distinct normal forms in the reduction graph")
    elif finals and not alpha_eq(graph.nodes[nfs[0]], finals[0][1]):
        rep.violations.append("graph normal form differs from the strategy finals")
    rep.shortest, rep.longest = graph.path_lengths()
    if rep.shortest != f.n_quant:
        rep.violations.append(f"shortest derivation has {rep.shortest} steps, "
                              f"expected {f.n_quant}")
    for e in graph.edges:
        d = graph.nodes[e.dst].n_eps - graph.nodes[e.src].n_eps
        if (e.kind is RuleKind.STEP0 and d != 0) or (e.kind is RuleKind.STEP1 and d < 1):
            rep.violations.append(f"graph edge {e.src}->{e.dst} ({e.kind}) changes eps count by {d}")
            break
    return rep


def run_fuzz(cfg: FuzzConfig = FuzzConfig(),
             progress: Optional[Callable[[FormulaReport], None]] = None) -> list[FormulaReport]:
    out = []
    for i, f in enumerate(corpus(cfg.count, cfg.seed, cfg.generator)):
        rep = check_formula(f, cfg, i)
        if progress:
            progress(rep)
        out.append(rep)
    return out


def _smaller(f: Formula):
    for pos, node in positions(f):
        if isinstance(node, Quant):
            yield replace_at(f, pos, node.body)
        elif isinstance(node, Not):
            yield replace_at(f, pos, node.arg)
        elif isinstance(node, Bin):
            yield replace_at(f, pos, node.left)
            yield replace_at(f, pos, node.right)


def shrink(f: Formula, fails: Callable[[Formula], bool]) -> Formula:
    """Greedily replace subformulas by their immediate parts while `fails` holds."""
    while True:
        for g in _smaller(f):
            if fails(g):
                f = g
                break
        else:
            return f


def summary_table(reports: list[FormulaReport]) -> list[str]:
    rows: dict[int, list[FormulaReport]] = {}
    for r in reports:
        rows.setdefault(r.quantifiers, []).append(r)
    head = f"{'quants':>6} {'formulas':>8} {'graphs':>6} {'max outer':>9} {'max path':>8} {'violations':>10}"
    out = [head]
    for q in sorted(rows):
        rs = rows[q]
        graphs = [r for r in rs if r.graph_nodes is not None]
        outer = max((r.steps.get("outermost", 0) for r in rs), default=0)
        longest = max((r.longest or 0 for r in graphs), default=0)
        bad = sum(not r.ok for r in rs)
        out.append(f"{q:>6} {len(rs):>8} {len(graphs):>6} {outer:>9} {longest:>8} {bad:>10}")
    total_bad = sum(not r.ok for r in reports)
    out.append(f"total {len(reports)} formulas, {total_bad} with violations")
    return out
