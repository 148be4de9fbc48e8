"""Finite abstract reduction systems and a brute-force checker for the
termination-from-weak-normalization theorem with a partition ->0 / ->1.

With ->2 = ->0* . ->1, ->3 = ->0 u ->1, A = ->3*-successors of a and
->4 = ->3 restricted to A, the checked conditions are

1. the reverse of ->0, range-restricted to A, is well-founded;
2. ->2-derivations from a whose end reaches a' by ->0* have bounded length;
3. every peak b1 <-4 . ->1 b2 is joinable by ->4* . <-4*;
4. every peak b1 <-4 . ->0 b2 is joinable by ->4* . <-4 (at most one step),

and the conclusion is that the reverse of ->4 is well-founded. Relations are
handled as per-node successor bitmasks over the carrier 0..n-1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

__all__ = [
    "FiniteARS", "TheoremReport", "ArsError", "UnknownNode", "NotInDomain",
    "NotReachable", "NotANormalForm", "TheoremViolation",
    "closure", "reachable_set", "is_well_founded", "find_cycle",
    "check_klop_theorem", "klop_conditions", "search_hypothesis_necessity",
    "parse_ars", "format_ars", "local_confluence", "confluent",
    "SoundnessSummary", "exhaustive_soundness",
]


class ArsError(ValueError):
    pass


class UnknownNode(ArsError):
    pass


class NotInDomain(ArsError):
    pass


class NotReachable(ArsError):
    pass


class NotANormalForm(ArsError):
    pass


class TheoremViolation(AssertionError):
    """All four conditions hold but the conclusion fails; the theorem would be false."""


@dataclass(frozen=True)
class FiniteARS:
    size: int
    r0: frozenset[tuple[int, int]] = frozenset()
    r1: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "r0", frozenset(self.r0))
        object.__setattr__(self, "r1", frozenset(self.r1))
        for u, v in itertools.chain(self.r0, self.r1):
            if not (0 <= u < self.size and 0 <= v < self.size):
                raise UnknownNode(f"edge ({u}, {v}) leaves the carrier 0..{self.size - 1}")

    @property
    def carrier(self) -> range:
        return range(self.size)

    def masks(self) -> tuple[list[int], list[int]]:
        s0 = [0] * self.size
        s1 = [0] * self.size
        for u, v in self.r0:
            s0[u] |= 1 << v
        for u, v in self.r1:
            s1[u] |= 1 << v
        return s0, s1


# -- bitmask graph helpers -----------------------------------------------------

def _bits_slow(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


_SMALL_BITS = [tuple(_bits_slow(m)) for m in range(1 << 10)]


def _bits(mask: int):
    """Indices of the set bits, ascending."""
    if mask < 1024:
        return _SMALL_BITS[mask]
    return _bits_slow(mask)


def closure(succ: list[int]) -> list[int]:
    """Reflexive-transitive closure of a successor-bitmask relation."""
    n = len(succ)
    if n <= 64:
        reach = [s | (1 << i) for i, s in enumerate(succ)]
        for k in range(n):
            bit = 1 << k
            rk = reach[k]
            for i in range(n):
                if reach[i] & bit:
                    reach[i] |= rk
        return reach
    comp, comps = _scc(succ)
    # Tarjan emits components sinks-first
    creach = [0] * len(comps)
    members = [0] * len(comps)
    for c, nodes in enumerate(comps):
        m = 0
        for u in nodes:
            m |= 1 << u
        members[c] = m
    for c, nodes in enumerate(comps):
        r = members[c]
        for u in nodes:
            for v in _bits(succ[u]):
                if comp[v] != c:
                    r |= creach[comp[v]]
        creach[c] = r
    return [creach[comp[u]] for u in range(n)]


def _scc(succ: list[int]) -> tuple[list[int], list[list[int]]]:
    """Iterative Tarjan; components are listed in reverse topological order."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comp = [-1] * n
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(_bits(succ[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            u, it = work[-1]
            advanced = False
            for v in it:
                if index[v] == -1:
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on_stack[v] = True
                    work.append((v, iter(_bits(succ[v]))))
                    advanced = True
                    break
                if on_stack[v]:
                    low[u] = min(low[u], index[v])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[u])
            if low[u] == index[u]:
                members = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = len(comps)
                    members.append(w)
                    if w == u:
                        break
                comps.append(members)
    return comp, comps


def _restrict(succ: list[int], domain: int) -> list[int]:
    return [s & domain if domain >> u & 1 else 0 for u, s in enumerate(succ)]


def find_cycle(succ: list[int], domain: Optional[int] = None) -> Optional[list[int]]:
    """Some cycle u0 -> ... -> u0 inside `domain` as a node list, or None."""
    if domain is not None:
        succ = _restrict(succ, domain)
    reach = closure(succ)
    for u, s in enumerate(succ):
        for v in _bits(s):
            if reach[v] >> u & 1:
                path = _path(succ, v, u)
                return [u] + path
    return None


def _path(succ: list[int], a: int, b: int) -> list[int]:
    """Shortest path a ..> b (inclusive) by BFS; assumes one exists."""
    prev = {a: None}
    frontier = [a]
    while frontier and b not in prev:
        nxt = []
        for u in frontier:
            for v in _bits(succ[u]):
                if v not in prev:
                    prev[v] = u
                    nxt.append(v)
        frontier = nxt
    out = [b]
    while out[-1] != a:
        out.append(prev[out[-1]])
    return out[::-1]


def _acyclic(succ: list[int], reach: Optional[list[int]] = None) -> bool:
    if reach is None:
        reach = closure(succ)
    for u, s in enumerate(succ):
        m = s
        while m:
            low = m & -m
            if reach[low.bit_length() - 1] >> u & 1:
                return False
            m ^= low
    return True


# -- public relation operations ------------------------------------------------

def reachable_set(sys: FiniteARS, a: int) -> frozenset[int]:
    """Nodes reachable from `a` by (->0 u ->1)*, including `a` itself."""
    if not 0 <= a < sys.size:
        raise UnknownNode(f"node {a} not in carrier")
    s0, s1 = sys.masks()
    seen = 1 << a
    frontier = [a]
    while frontier:
        nxt = []
        for u in frontier:
            new = (s0[u] | s1[u]) & ~seen
            seen |= new
            nxt.extend(_bits(new))
        frontier = nxt
    return frozenset(_bits(seen))


def is_well_founded(rel: Iterable[tuple], domain: Iterable) -> bool:
    """Well-foundedness of a relation R on a finite domain.

    `(x, y) in rel` reads "x R y". Every non-empty subset has an R-minimal
    element iff no infinite descending chain ... R y2 R y1 exists, which on a
    finite domain means R restricted to it is acyclic.
    """
    nodes = list(dict.fromkeys(domain))
    ix = {u: i for i, u in enumerate(nodes)}
    succ = [0] * len(nodes)
    for x, y in rel:
        if x in ix and y in ix:
            succ[ix[x]] |= 1 << ix[y]
    return _acyclic(succ)


# -- the theorem -----------------------------------------------------------------

@dataclass
class TheoremReport:
    a: int
    a_prime: int
    reachable: frozenset[int]
    cond1: bool
    cond2: bool
    bound: Optional[int]
    cond3: bool
    cond4: bool
    conclusion: bool
    counterexample: dict = field(default_factory=dict)

    @property
    def conditions(self) -> tuple[bool, bool, bool, bool]:
        return (self.cond1, self.cond2, self.cond3, self.cond4)

    @property
    def applicable(self) -> bool:
        return all(self.conditions)

    @property
    def violates_theorem(self) -> bool:
        return self.applicable and not self.conclusion

    def lines(self) -> list[str]:
        def yn(b):
            return "holds" if b else "FAILS"
        out = [
            f"a = {self.a}, a' = {self.a_prime}, |A| = {len(self.reachable)}",
            f"cond1 (reverse ->0 on A well-founded): {yn(self.cond1)}",
            f"cond2 (bounded ->2 derivations to a'): {yn(self.cond2)}"
            + (f", n = {self.bound}" if self.bound is not None else ""),
            f"cond3 (<-4 . ->1 peaks joinable): {yn(self.cond3)}",
            f"cond4 (<-4 . ->0 peaks joinable, one side reflexive): {yn(self.cond4)}",
            f"conclusion (reverse ->4 well-founded): {yn(self.conclusion)}",
        ]
        for k, v in self.counterexample.items():
            out.append(f"  {k}: {v}")
        return out


def klop_conditions(s0: list[int], s1: list[int], a: int, a_prime: int,
                    explain: bool = False) -> TheoremReport:
    """Evaluate the four conditions and the conclusion on bitmask relations.

    Preconditions (a in DOM(->3), a' a normal form reachable from a) are the
    caller's responsibility; see check_klop_theorem.
    """
    n = len(s0)
    s3 = [x | y for x, y in zip(s0, s1)]
    reach3 = closure(s3)
    A = reach3[a]
    r0 = _restrict(s0, A)
    r1 = _restrict(s1, A)
    r4 = _restrict(s3, A)
    reach4 = [reach3[u] if A >> u & 1 else 0 for u in range(n)]
    cex: dict = {}

    # ->2 = ->0* . ->1 on A
    reach0 = closure(r0)
    cond1 = _acyclic(r0, reach0)
    if explain and not cond1:
        cex["cond1"] = f"->0 cycle {find_cycle(r0)}"

    s2 = [0] * n
    for u in _bits(A):
        m = 0
        for w in _bits(reach0[u]):
            m |= r1[w]
        s2[u] = m
    ends = 0  # b with b ->0* a'
    for u in _bits(A):
        if reach0[u] >> a_prime & 1:
            ends |= 1 << u
    reach2 = closure(s2)
    relevant = 0
    for u in _bits(reach2[a]):
        if reach2[u] & ends:
            relevant |= 1 << u
    s2r = _restrict(s2, relevant)
    cond2 = _acyclic(s2r, _restrict(reach2, relevant))
    bound = None
    if cond2:
        bound = _longest_to(s2r, a, ends & relevant)
    elif explain:
        cex["cond2"] = f"->2 cycle through nodes leading to a': {find_cycle(s2r)}"

    cond3 = True
    cond4 = True
    for c in _bits(A):
        out4 = r4[c]
        for b2 in _bits(r1[c]) if (cond3 or explain) else ():
            j = reach4[b2]
            for b1 in _bits(out4):
                if not reach4[b1] & j:
                    cond3 = False
                    if explain and "cond3" not in cex:
                        cex["cond3"] = f"peak {b1} <-4 {c} ->1 {b2} not joinable"
                    break
            if not cond3 and not explain:
                break
        for b2 in _bits(r0[c]) if (cond4 or explain) else ():
            j = (1 << b2) | r4[b2]
            for b1 in _bits(out4):
                if not reach4[b1] & j:
                    cond4 = False
                    if explain and "cond4" not in cex:
                        cex["cond4"] = f"peak {b1} <-4 {c} ->0 {b2} not joinable as ->4* . <-4="
                    break
            if not cond4 and not explain:
                break

    conclusion = _acyclic(r4, reach4)
    if explain and not conclusion:
        cex["conclusion"] = f"->4 cycle {find_cycle(r4)}"
    return TheoremReport(a, a_prime, frozenset(_bits(A)), cond1, cond2, bound, cond3, cond4,
                         conclusion, cex)


def _longest_to(succ: list[int], a: int, targets: int) -> int:
    """Longest path from `a` ending in `targets` in an acyclic relation."""
    memo: dict[int, int] = {}

    def go(u: int) -> int:
        if u in memo:
            return memo[u]
        best = 0 if targets >> u & 1 else -1
        for v in _bits(succ[u]):
            sub = go(v)
            if sub >= 0:
                best = max(best, sub + 1)
        memo[u] = best
        return best

    return go(a)


def check_klop_theorem(sys: FiniteARS, a: int, a_prime: int) -> TheoremReport:
    for node in (a, a_prime):
        if not 0 <= node < sys.size:
            raise UnknownNode(f"node {node} not in carrier 0..{sys.size - 1}")
    s0, s1 = sys.masks()
    if not (s0[a] | s1[a]):
        raise NotInDomain(f"node {a} has no successor, so it is not in DOM(->3)")
    if s0[a_prime] | s1[a_prime]:
        raise NotANormalForm(f"node {a_prime} has successors")
    if a_prime not in reachable_set(sys, a):
        raise NotReachable(f"node {a_prime} is not reachable from {a}")
    return klop_conditions(s0, s1, a, a_prime, explain=True)


# -- direct confluence checks (used for the ->0 = {} specialization) -------------

def local_confluence(succ: list[int], domain: int) -> bool:
    """Every one-step peak inside `domain` is joinable."""
    succ = _restrict(succ, domain)
    reach = closure(succ)
    for c in _bits(domain):
        kids = list(_bits(succ[c]))
        for b1, b2 in itertools.combinations(kids, 2):
            if not reach[b1] & reach[b2]:
                return False
    return True


def confluent(succ: list[int], domain: int) -> bool:
    """Every pair of nodes reachable from a common node is joinable."""
    succ = _restrict(succ, domain)
    reach = closure(succ)
    for c in _bits(domain):
        rs = list(_bits(reach[c]))
        for b1, b2 in itertools.combinations(rs, 2):
            if not reach[b1] & reach[b2]:
                return False
    return True


# -- exhaustive soundness sweep ---------------------------------------------------------

@dataclass
class SoundnessSummary:
    systems: int = 0
    applicable: int = 0
    violations: list = field(default_factory=list)
    r0_empty: int = 0
    r0_empty_disagreements: list = field(default_factory=list)


def _labeled_edges(n: int) -> list[tuple[int, int, int]]:
    # a' = n - 1 is a normal form, so it has no outgoing edges
    return [(lab, u, v) for u in range(n - 1) for v in range(n) for lab in (0, 1)]


def _swap12(edges):
    perm = {1: 2, 2: 1}
    index = {e: i for i, e in enumerate(edges)}
    return [index[(lab, perm.get(u, u), perm.get(v, v))] for lab, u, v in edges]


def exhaustive_soundness(max_nodes: int = 4, max_edges: int = 10) -> SoundnessSummary:
    """Check every system with at most `max_nodes` nodes and `max_edges`
    labeled edges (|r0| + |r1|) for a theorem violation.

    Up to relabeling, a = 0 and a' = n - 1; systems where some node is not
    reachable from a are skipped because they restrict to a smaller system
    that is enumerated on its own. For n = 4 the swap of nodes 1 and 2 is
    factored out. Whenever r0 is empty the report is also compared against
    direct checks of local confluence and confluence on A.
    """
    out = SoundnessSummary()
    for n in range(2, max_nodes + 1):
        edges = _labeled_edges(n)
        swap = _swap12(edges) if n >= 4 else None
        full = (1 << n) - 1
        for k in range(1, min(max_edges, len(edges)) + 1):
            for combo in itertools.combinations(range(len(edges)), k):
                if swap is not None:
                    code = 0
                    for i in combo:
                        code |= 1 << i
                    alt = 0
                    for i in combo:
                        alt |= 1 << swap[i]
                    if alt < code:
                        continue
                s0 = [0] * n
                s1 = [0] * n
                for i in combo:
                    lab, u, v = edges[i]
                    if lab:
                        s1[u] |= 1 << v
                    else:
                        s0[u] |= 1 << v
                seen = 1
                frontier = 1
                while frontier:
                    nxt = 0
                    for u in _bits(frontier):
                        nxt |= s0[u] | s1[u]
                    frontier = nxt & ~seen
                    seen |= nxt
                if seen != full:
                    continue
                out.systems += 1
                rep = klop_conditions(s0, s1, 0, n - 1)
                if rep.applicable:
                    out.applicable += 1
                    if not rep.conclusion:
                        out.violations.append(_to_ars(s0, s1))
                if not any(s0):
                    out.r0_empty += 1
                    if not _specialization_agrees(s1, rep, full):
                        out.r0_empty_disagreements.append(_to_ars(s0, s1))
    return out


def _specialization_agrees(s1: list[int], rep: TheoremReport, domain: int) -> bool:
    """With r0 empty: cond1 and cond4 are trivial, cond3 is local confluence
    on A, and under termination local confluence coincides with confluence."""
    if not (rep.cond1 and rep.cond4):
        return False
    lc = local_confluence(s1, domain)
    if rep.cond3 != lc:
        return False
    if rep.conclusion and lc != confluent(s1, domain):
        return False
    return True


# -- necessity of the hypotheses ------------------------------------------------------

@dataclass(frozen=True)
class NecessityWitness:
    conditions: frozenset[int]
    system: FiniteARS
    a: int
    a_prime: int
    report: TheoremReport


def _instances_exhaustive(n: int):
    """Systems on n nodes with a = 0 and a' = n - 1 a sink."""
    pairs = [(u, v) for u in range(n - 1) for v in range(n)]
    for labels in itertools.product(range(4), repeat=len(pairs)):
        s0 = [0] * n
        s1 = [0] * n
        for (u, v), lab in zip(pairs, labels):
            if lab & 1:
                s0[u] |= 1 << v
            if lab & 2:
                s1[u] |= 1 << v
        yield s0, s1


def _instances_random(n: int, count: int, seed: int):
    from .strategy import SplitMix64
    rng = SplitMix64(seed)
    pairs = [(u, v) for u in range(n - 1) for v in range(n)]
    for _ in range(count):
        s0 = [0] * n
        s1 = [0] * n
        density = 0.15 + 0.35 * rng.random()
        for u, v in pairs:
            if rng.random() < density:
                if rng.random() < 0.5:
                    s0[u] |= 1 << v
                else:
                    s1[u] |= 1 << v
        yield s0, s1


def _valid(s0, s1, a, a_prime) -> bool:
    if not (s0[a] | s1[a]) or (s0[a_prime] | s1[a_prime]):
        return False
    return bool(closure([x | y for x, y in zip(s0, s1)])[a] >> a_prime & 1)


def search_hypothesis_necessity(max_nodes: int = 5, samples: int = 20_000,
                                seed: int = 0) -> dict[frozenset[int], NecessityWitness]:
    """For each proper subset S of {1,2,3,4}, look for a system where exactly
    the conditions in S hold and the conclusion fails.

    Systems up to 3 nodes are enumerated exhaustively, larger ones up to
    `max_nodes` are sampled. Raises TheoremViolation if any system satisfies
    all four conditions with a false conclusion.
    """
    if max_nodes > 6:
        raise ValueError("max_nodes is limited to 6")
    found: dict[frozenset[int], NecessityWitness] = {}
    targets = {frozenset(c) for r in range(4) for c in itertools.combinations((1, 2, 3, 4), r)}

    def consider(s0, s1, n):
        a, a_prime = 0, n - 1
        if not _valid(s0, s1, a, a_prime):
            return
        rep = klop_conditions(s0, s1, a, a_prime)
        if rep.violates_theorem:
            sys = _to_ars(s0, s1)
            raise TheoremViolation(f"conditions hold but conclusion fails: {format_ars(sys)!r}")
        if rep.conclusion:
            return
        held = frozenset(i + 1 for i, ok in enumerate(rep.conditions) if ok)
        if held in targets and held not in found:
            sys = _to_ars(s0, s1)
            found[held] = NecessityWitness(held, sys, a, a_prime,
                                           check_klop_theorem(sys, a, a_prime))

    for n in range(2, min(max_nodes, 3) + 1):
        for s0, s1 in _instances_exhaustive(n):
            consider(s0, s1, n)
    for n in range(4, max_nodes + 1):
        for s0, s1 in _instances_random(n, samples, seed + n):
            consider(s0, s1, n)
            if len(found) == len(targets):
                break
    return found


def _to_ars(s0: list[int], s1: list[int]) -> FiniteARS:
    r0 = {(u, v) for u, m in enumerate(s0) for v in _bits(m)}
    r1 = {(u, v) for u, m in enumerate(s1) for v in _bits(m)}
    return FiniteARS(len(s0), frozenset(r0), frozenset(r1))


# -- text format ---------------------------------------------------------------------

def parse_ars(text: str) -> FiniteARS:
    """First line: carrier size N. Then one edge per line: `0 u v` or `1 u v`."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise ArsError("empty ARS file")
    lineno, head = lines[0]
    try:
        size = int(head)
    except ValueError:
        raise ArsError(f"line {lineno}: expected carrier size, got {head!r}") from None
    if size < 0:
        raise ArsError(f"line {lineno}: negative carrier size")
    r0, r1 = set(), set()
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 3 or parts[0] not in ("0", "1"):
            raise ArsError(f"line {lineno}: expected '0 u v' or '1 u v', got {line!r}")
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise ArsError(f"line {lineno}: node ids must be integers") from None
        if not (0 <= u < size and 0 <= v < size):
            raise UnknownNode(f"line {lineno}: node out of range 0..{size - 1}")
        (r0 if parts[0] == "0" else r1).add((u, v))
    return FiniteARS(size, frozenset(r0), frozenset(r1))


def format_ars(sys: FiniteARS) -> str:
    out = [str(sys.size)]
    out += [f"0 {u} {v}" for u, v in sorted(sys.r0)]
    out += [f"1 {u} {v}" for u, v in sorted(sys.r1)]
    return "\n".join(out) + "\n"
