"""One-step quantifier elimination by the epsilon rule.

    Q x. A  ->  A{x -> eps x. negQ(A)}        negQ = "~" for forall, "" for exists

Every quantifier occurrence is a redex, including those inside epsilon terms.
Steps on vacuous quantifiers are Step0, all others Step1.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .subst import apply_subst, singleton
from .syntax import (
    Eps, Formula, Node, Quant, Quantifier, alpha_eq, free_occurrences,
    neg_by_quantifier, replace_at, subterm_at, InvalidPosition,
)

__all__ = [
    "RuleKind", "Redex", "StaleRedex", "OverlappingPositions",
    "find_redexes", "iter_redexes", "redex_at", "contract", "contract_root",
    "parallel_step", "is_normal_form", "successors",
    "PeakWitness", "join_nested_peak",
]

Position = tuple[int, ...]


class RuleKind(enum.Enum):
    STEP0 = "step0"  # vacuous quantifier
    STEP1 = "step1"

    def __str__(self) -> str:
        return self.value


class StaleRedex(ValueError):
    pass


class OverlappingPositions(ValueError):
    pass


@dataclass(frozen=True)
class Redex:
    pos: Position
    q: Quantifier
    var: str
    body: Formula

    @property
    def vacuous(self) -> bool:
        return self.var not in self.body.free_ind

    @property
    def kind(self) -> RuleKind:
        return RuleKind.STEP0 if self.vacuous else RuleKind.STEP1

    @property
    def innermost(self) -> bool:
        return self.body.n_quant == 0

    @property
    def node(self) -> Quant:
        return Quant(self.q, self.var, self.body)

    def __str__(self) -> str:
        return f"{self.kind} at {list(self.pos)} quantifier {self.q} {self.var}"


def iter_redexes(f: Node, prefix: Position = ()) -> Iterator[Redex]:
    """Quantifier occurrences in pre-order, left to right."""
    if f.n_quant == 0:
        return
    if isinstance(f, Quant):
        yield Redex(prefix, f.q, f.var, f.body)
    for i, k in enumerate(f.children()):
        if k.n_quant:
            yield from iter_redexes(k, prefix + (i,))


def find_redexes(f: Formula) -> list[Redex]:
    return list(iter_redexes(f))


def redex_at(f: Formula, pos) -> Redex:
    node = subterm_at(f, pos)
    if not isinstance(node, Quant):
        raise StaleRedex(f"no quantifier at {list(pos)}")
    return Redex(tuple(pos), node.q, node.var, node.body)


def is_normal_form(f: Formula) -> bool:
    return f.n_quant == 0


def contract_root(node: Quant) -> Formula:
    """Apply the epsilon rule to a quantified formula at its root."""
    eps = Eps(node.var, neg_by_quantifier(node.q, node.body))
    return apply_subst(node.body, singleton(node.var, eps))


def _check(f: Formula, r: Redex) -> Quant:
    try:
        node = subterm_at(f, r.pos)
    except InvalidPosition as exc:
        raise StaleRedex(str(exc)) from exc
    if not (isinstance(node, Quant) and node.q is r.q and node.var == r.var and node.body == r.body):
        raise StaleRedex(f"formula has no redex {r} any more")
    return node


def contract(f: Formula, r: Redex) -> Formula:
    """Contract redex `r` of `f`.

    Grafting needs no renaming: the contractum's free variables are those of
    the redex, which were already in scope of the same context binders.
    """
    node = _check(f, r)
    return replace_at(f, r.pos, contract_root(node))


def _disjoint(rs: Sequence[Redex]) -> None:
    ps = sorted(r.pos for r in rs)
    for a, b in zip(ps, ps[1:]):
        if b[:len(a)] == a:
            raise OverlappingPositions(f"positions {list(a)} and {list(b)} overlap")


def parallel_step(f: Formula, rs: Iterable[Redex]) -> Formula:
    """Contract pairwise-disjoint redexes simultaneously."""
    rs = list(rs)
    _disjoint(rs)
    todo = {}
    for r in rs:
        todo[r.pos] = contract_root(_check(f, r))
    return _graft_all(f, (), todo)


def _graft_all(n: Node, prefix: Position, todo: dict) -> Node:
    if prefix in todo:
        return todo[prefix]
    depth = len(prefix)
    below = {p for p in todo if len(p) > depth and p[:depth] == prefix}
    if not below:
        return n
    kids = list(n.children())
    for i in {p[depth] for p in below}:
        kids[i] = _graft_all(kids[i], prefix + (i,), todo)
    return n.with_children(kids)


def successors(f: Formula) -> Iterator[tuple[Redex, Formula]]:
    for r in iter_redexes(f):
        yield r, contract(f, r)


# -- peaks with one redex nested inside another ----------------------------------

@dataclass(frozen=True)
class PeakWitness:
    """Joining a peak f1 <- f0 -> f2 whose f2-step is at the top of f0.

    f1 -> f4 by the root redex of f1, f2 => f3 by contracting in parallel the
    copies of the inner redex inside the new epsilon terms, and f3 -> f4 by
    the remaining residual at the inner redex's original position.
    """
    f0: Formula
    f1: Formula
    f2: Formula
    f3: Formula
    f4: Formula
    inner: Redex
    outer: Redex
    left_join: Redex          # f1 -> f4
    parallel: tuple[Redex, ...]  # f2 => f3
    last: Redex               # f3 -> f4
    f4_from_f3: Formula

    @property
    def joined(self) -> bool:
        return alpha_eq(self.f4, self.f4_from_f3)


def join_nested_peak(f0: Formula, inner: Redex) -> PeakWitness:
    """Build f3, f4 for the peak of `inner` against the root redex of `f0`."""
    if not isinstance(f0, Quant):
        raise ValueError("f0 must be a quantified formula")
    if not inner.pos:
        raise ValueError("inner redex must lie strictly below the root")
    outer = Redex((), f0.q, f0.var, f0.body)
    f1 = contract(f0, inner)
    f2 = contract(f0, outer)
    rel = inner.pos[1:]
    neg_prefix = (0,) if f0.q is Quantifier.FORALL else ()
    copies = [u + (0,) + neg_prefix + rel for u in free_occurrences(f0.body, f0.var)]
    parallel = tuple(redex_at(f2, p) for p in copies)
    f3 = parallel_step(f2, parallel)
    last = redex_at(f3, rel)
    left_join = redex_at(f1, ())
    f4 = contract(f1, left_join)
    return PeakWitness(f0, f1, f2, f3, f4, inner, outer, left_join, parallel, last,
                       contract(f3, last))
