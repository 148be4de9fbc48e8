"""Derivation-length statistics for formula families.

Leftmost-outermost derivations on nested existentials duplicate redexes so
fast that replaying them literally is hopeless beyond four quantifiers (the
step count for n=5 already exceeds two million). The counters here exploit
that contracting a redex only depends on the redex itself: the outermost
length of a formula is the sum over its outermost redexes of one plus the
length of their contracta, and the normal form of a compound formula is
assembled from the normal forms of its parts. Both are memoized on the
(shared) nodes, so huge derivations are counted without being replayed.
"""
from __future__ import annotations

import sys
import threading
from dataclasses import dataclass
from typing import Callable

from .rewrite import contract_root
from .strategy import INNERMOST, OUTERMOST, Fuse, normalize
from .syntax import Formula, Node, Quant, alpha_eq

__all__ = [
    "LengthRow", "outermost_steps", "innermost_normal_form",
    "derivation_length_stats", "run_deep",
]


def run_deep(fn: Callable, *args, stack_mb: int = 512, recursion: int = 1_000_000):
    """Call `fn(*args)` on a thread with a big stack; the counters recurse deeply."""
    box: dict = {}

    def target():
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, recursion))
        try:
            box["value"] = fn(*args)
        except BaseException as exc:  # re-raised on the caller's thread
            box["error"] = exc
        finally:
            sys.setrecursionlimit(old)

    old_size = threading.stack_size(stack_mb * 1024 * 1024)
    try:
        t = threading.Thread(target=target)
        t.start()
        t.join()
    finally:
        threading.stack_size(old_size)
    if "error" in box:
        raise box["error"]
    return box["value"]


def outermost_steps(f: Formula, memo: dict | None = None) -> int:
    """Length of the leftmost-outermost derivation of `f`.

    An outermost redex is never touched by contractions left of it, so the
    leftmost-outermost derivation finishes each outermost redex (and all
    its descendants) before moving right.
    """
    memo = {} if memo is None else memo

    def go(n: Node) -> int:
        if not n.n_quant:
            return 0
        hit = memo.get(n)
        if hit is not None:
            return hit
        if type(n) is Quant:
            r = 1 + go(contract_root(n))
        else:
            r = 0
            for k in n.children():
                r += go(k)
        memo[n] = r
        return r

    return go(f)


def innermost_normal_form(f: Formula, memo: dict | None = None) -> Formula:
    memo = {} if memo is None else memo

    def go(n: Node) -> Node:
        if not n.n_quant:
            return n
        hit = memo.get(n)
        if hit is not None:
            return hit
        if type(n) is Quant:
            r = contract_root(Quant(n.q, n.var, go(n.body)))
        else:
            r = n.with_children([go(k) for k in n.children()])
        memo[n] = r
        return r

    return go(f)


@dataclass(frozen=True)
class LengthRow:
    n: int
    strategy: str
    steps: int
    eps_depth: int
    eps_count: int
    size: int


def derivation_length_stats(family: Callable[[int], Formula], max_n: int,
                            literal_up_to: int = 0) -> list[LengthRow]:
    """Innermost and outermost step counts for `family(0) .. family(max_n)`.

    Innermost counts always come from `normalize`. For n <= `literal_up_to`
    the outermost count and both normal forms are also checked against
    literal runs; a mismatch raises AssertionError.
    """
    def work():
        rows = []
        for n in range(max_n + 1):
            f = family(n)
            if f.n_quant != n:
                raise ValueError(f"family({n}) has {f.n_quant} quantifiers")
            nf = innermost_normal_form(f)
            out = outermost_steps(f)
            # cheap despite the tree size: no redex is ever copied and subterms are shared
            inner_t = normalize(f, INNERMOST, Fuse(max_nodes=10 ** 80))
            if n <= literal_up_to:
                assert alpha_eq(inner_t.final, nf), n
                outer_t = normalize(f, OUTERMOST, Fuse(max_steps=10 ** 7, max_nodes=10 ** 8))
                assert outer_t.step_count == out, (n, outer_t.step_count, out)
                assert alpha_eq(outer_t.final, nf), n
            for name, steps in (("innermost", inner_t.step_count), ("outermost", out)):
                rows.append(LengthRow(n, name, steps, nf.eps_depth, nf.n_eps, nf.size))
        return rows

    return run_deep(work)
