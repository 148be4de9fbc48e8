"""Normalization strategies, derivation traces and full reduction graphs."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .rewrite import (
    Redex, RuleKind, contract, find_redexes, iter_redexes, parallel_step,
)
from .syntax import Formula, Quant, alpha_key

__all__ = [
    "SplitMix64", "Strategy", "INNERMOST", "OUTERMOST", "PARALLEL", "random_strategy",
    "Fuse", "FuseExceeded", "BoundExceeded", "Step", "DerivationTrace",
    "normalize", "ReductionGraph", "reduction_graph", "all_derivations",
]

MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 (Steele, Lea, Flood 2014); identical output on every platform."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next()
            if r < limit:
                return r % n

    def random(self) -> float:
        return (self.next() >> 11) / float(1 << 53)


@dataclass(frozen=True)
class Strategy:
    name: str  # "innermost" | "outermost" | "random" | "parallel"
    seed: Optional[int] = None

    def __post_init__(self):
        if self.name not in ("innermost", "outermost", "random", "parallel"):
            raise ValueError(f"unknown strategy {self.name!r}")
        if self.name == "random" and self.seed is None:
            raise ValueError("random strategy needs a seed")

    def __str__(self) -> str:
        return f"random({self.seed})" if self.name == "random" else self.name


INNERMOST = Strategy("innermost")
OUTERMOST = Strategy("outermost")
PARALLEL = Strategy("parallel")


def random_strategy(seed: int) -> Strategy:
    return Strategy("random", seed)


@dataclass(frozen=True)
class Fuse:
    max_steps: int = 10_000
    max_nodes: int = 1_000_000


class FuseExceeded(RuntimeError):
    """Normalization ran past the safety fuse; `trace` holds the prefix."""

    def __init__(self, message: str, trace: "DerivationTrace"):
        super().__init__(message)
        self.trace = trace


class BoundExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Step:
    redexes: tuple[Redex, ...]
    after: Formula

    @property
    def redex(self) -> Redex:
        return self.redexes[0]

    @property
    def kind(self) -> RuleKind:
        return self.redexes[0].kind


@dataclass
class DerivationTrace:
    start: Formula
    steps: list[Step] = field(default_factory=list)
    max_eps_depth: int = 0
    max_eps_count: int = 0

    @property
    def final(self) -> Formula:
        return self.steps[-1].after if self.steps else self.start

    @property
    def step_count(self) -> int:
        return len(self.steps)

    def formulas(self) -> Iterator[Formula]:
        yield self.start
        for s in self.steps:
            yield s.after

    def _record(self, step: Step) -> None:
        self.steps.append(step)
        self.max_eps_depth = max(self.max_eps_depth, step.after.eps_depth)
        self.max_eps_count = max(self.max_eps_count, step.after.n_eps)


def _leftmost_innermost(f: Formula) -> Redex:
    return next(r for r in iter_redexes(f) if r.innermost)


def _outermost(f: Formula) -> list[Redex]:
    out = []

    def walk(n, prefix):
        if n.n_quant == 0:
            return
        if isinstance(n, Quant):
            out.append(Redex(prefix, n.q, n.var, n.body))
            return
        for i, k in enumerate(n.children()):
            walk(k, prefix + (i,))

    walk(f, ())
    return out


def normalize(f: Formula, strategy: Strategy = INNERMOST, fuse: Fuse = Fuse()) -> DerivationTrace:
    """Rewrite `f` to its quantifier-free normal form under `strategy`.

    Termination is guaranteed for every strategy; the fuse only turns
    runaway growth into a diagnosable FuseExceeded.
    """
    trace = DerivationTrace(f, max_eps_depth=f.eps_depth, max_eps_count=f.n_eps)
    rng = SplitMix64(strategy.seed) if strategy.name == "random" else None
    cur = f
    while cur.n_quant:
        if trace.step_count >= fuse.max_steps:
            raise FuseExceeded(f"more than {fuse.max_steps} steps", trace)
        if strategy.name == "innermost":
            rs = (_leftmost_innermost(cur),)
        elif strategy.name == "outermost":
            rs = (next(iter_redexes(cur)),)
        elif strategy.name == "parallel":
            rs = tuple(_outermost(cur))
        else:
            candidates = find_redexes(cur)
            rs = (candidates[rng.below(len(candidates))],)
        cur = contract(cur, rs[0]) if len(rs) == 1 else parallel_step(cur, rs)
        trace._record(Step(rs, cur))
        if cur.size > fuse.max_nodes:
            raise FuseExceeded(f"formula grew past {fuse.max_nodes} nodes", trace)
    return trace


# -- full reduction graphs -----------------------------------------------------

@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    kind: RuleKind
    pos: tuple[int, ...]


@dataclass
class ReductionGraph:
    """All formulas reachable from `nodes[0]`, one representative per alpha class."""
    nodes: list[Formula]
    edges: list[Edge]

    @property
    def source(self) -> int:
        return 0

    def succ(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.nodes]
        for e in self.edges:
            out[e.src].append(e.dst)
        return out

    def normal_forms(self) -> list[int]:
        has_out = {e.src for e in self.edges}
        return [i for i in range(len(self.nodes)) if i not in has_out]

    def topological_order(self) -> Optional[list[int]]:
        """Kahn order, or None when the graph has a cycle."""
        indeg = [0] * len(self.nodes)
        succ = self.succ()
        for vs in succ:
            for v in vs:
                indeg[v] += 1
        queue = deque(i for i, d in enumerate(indeg) if d == 0)
        order = []
        while queue:
            u = queue.popleft()
            order.append(u)
            for v in succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
        return order if len(order) == len(self.nodes) else None

    def is_acyclic(self) -> bool:
        return self.topological_order() is not None

    def path_lengths(self) -> tuple[int, int]:
        """(shortest, longest) maximal path from the source; graph must be acyclic."""
        order = self.topological_order()
        if order is None:
            raise ValueError("graph has a cycle")
        succ = self.succ()
        lo = [0] * len(self.nodes)
        hi = [0] * len(self.nodes)
        for u in reversed(order):
            if succ[u]:
                lo[u] = 1 + min(lo[v] for v in succ[u])
                hi[u] = 1 + max(hi[v] for v in succ[u])
        return lo[0], hi[0]

    def count_maximal_paths(self) -> int:
        order = self.topological_order()
        if order is None:
            raise ValueError("graph has a cycle")
        succ = self.succ()
        n = [0] * len(self.nodes)
        for u in reversed(order):
            n[u] = sum(n[v] for v in succ[u]) if succ[u] else 1
        return n[0]

    def closure_irreflexive(self) -> bool:
        """True iff no node reaches itself in one or more steps."""
        from .ars import closure
        succ = self.succ()
        masks = [0] * len(self.nodes)
        for u, vs in enumerate(succ):
            for v in vs:
                masks[u] |= 1 << v
        reach = closure(masks)  # reflexive-transitive
        for u, vs in enumerate(succ):
            for v in vs:
                if reach[v] >> u & 1:
                    return False
        return True

    def to_ars(self):
        from .ars import FiniteARS
        r0 = {(e.src, e.dst) for e in self.edges if e.kind is RuleKind.STEP0}
        r1 = {(e.src, e.dst) for e in self.edges if e.kind is RuleKind.STEP1}
        return FiniteARS(len(self.nodes), frozenset(r0), frozenset(r1))


def reduction_graph(f: Formula, bound: int = 5000) -> ReductionGraph:
    """Breadth-first enumeration of every formula reachable from `f`."""
    nodes = [f]
    index = {alpha_key(f): 0}
    edges: list[Edge] = []
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for r in iter_redexes(nodes[u]):
            g = contract(nodes[u], r)
            key = alpha_key(g)
            v = index.get(key)
            if v is None:
                if len(nodes) >= bound:
                    raise BoundExceeded(f"reduction graph has more than {bound} nodes")
                v = index[key] = len(nodes)
                nodes.append(g)
                queue.append(v)
            edges.append(Edge(u, v, r.kind, r.pos))
    return ReductionGraph(nodes, edges)


def all_derivations(f: Formula, bound: int = 5000, max_paths: int = 100_000) -> list[DerivationTrace]:
    """Every maximal derivation from `f`, as traces over the graph's representatives."""
    g = reduction_graph(f, bound)
    if g.count_maximal_paths() > max_paths:
        raise BoundExceeded(f"more than {max_paths} maximal derivations")
    out_edges: list[list[Edge]] = [[] for _ in g.nodes]
    for e in g.edges:
        out_edges[e.src].append(e)
    traces = []

    def walk(u: int, path: list[Edge]):
        if not out_edges[u]:
            t = DerivationTrace(g.nodes[0], max_eps_depth=g.nodes[0].eps_depth,
                                max_eps_count=g.nodes[0].n_eps)
            for e in path:
                src = g.nodes[e.src]
                node = src
                for i in e.pos:
                    node = node.children()[i]
                t._record(Step((Redex(e.pos, node.q, node.var, node.body),), g.nodes[e.dst]))
            traces.append(t)
            return
        for e in out_edges[u]:
            path.append(e)
            walk(e.dst, path)
            path.pop()

    walk(0, [])
    return traces
