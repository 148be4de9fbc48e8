"""Capture-avoiding substitution for individual and formula variables."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from .syntax import (
    ArityError, Bin, Eps, FmlApp, FmlVar, FnApp, Formula, Node, Not, PredApp,
    Quant, Term, Var,
)

__all__ = [
    "FmlAbstraction", "Substitution", "apply_subst", "singleton", "singleton_fml",
    "fresh_name",
]


@dataclass(frozen=True)
class FmlAbstraction:
    """lambda(x1, ..., xn). body, the value a formula variable is mapped to."""
    params: tuple[str, ...]
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        if len(set(self.params)) != len(self.params):
            raise ValueError(f"abstraction parameters must be distinct: {self.params}")

    @property
    def free_ind(self) -> frozenset[str]:
        return self.body.free_ind - set(self.params)


@dataclass(frozen=True)
class Substitution:
    ind: Mapping[str, Term] = field(default_factory=dict)
    fml: Mapping[FmlVar, FmlAbstraction] = field(default_factory=dict)

    def __post_init__(self):
        for x, t in self.ind.items():
            if not isinstance(t, Term):
                raise TypeError(f"{x} must map to a term, got {type(t).__name__}")
        for var, ab in self.fml.items():
            if len(ab.params) != var.arity:
                raise ArityError(
                    f"formula variable {var} mapped to abstraction with {len(ab.params)} parameters")

    def __bool__(self) -> bool:
        return bool(self.ind) or bool(self.fml)

    def restrict(self, node: Node) -> Substitution:
        """The part of the substitution that can affect `node`."""
        return Substitution(
            {x: t for x, t in self.ind.items() if x in node.free_ind},
            {v: a for v, a in self.fml.items() if v in node.free_fml},
        )


def singleton(x: str, t: Term) -> Substitution:
    return Substitution({x: t})


def singleton_fml(var: FmlVar, ab: FmlAbstraction | Formula) -> Substitution:
    if isinstance(ab, Formula):
        ab = FmlAbstraction((), ab)
    return Substitution(fml={var: ab})


_TRAILING_DIGITS = re.compile(r"\d+$")


def fresh_name(base: str, avoid) -> str:
    """`base` with the smallest numeric suffix not in `avoid`."""
    stem = _TRAILING_DIGITS.sub("", base) or "x"
    k = 1
    while f"{stem}{k}" in avoid:
        k += 1
    return f"{stem}{k}"


def apply_subst(node: Node, s: Substitution) -> Node:
    """Apply `s` to `node`, renaming binders that would capture.

    Formula-variable applications whose head is mapped are beta-reduced on
    the spot. Results for shared epsilon subterms are memoised per call, so
    substituting into heavily shared terms stays linear in the shared size.
    """
    ind = {x: t for x, t in s.ind.items() if x in node.free_ind}
    fml = {v: a for v, a in s.fml.items() if v in node.free_fml}
    if not ind and not fml:
        return node
    return _Applier().go(node, ind, fml)


class _Applier:
    def __init__(self):
        self.memo: dict = {}

    def go(self, n: Node, ind: dict, fml: dict) -> Node:
        if not (ind and not n.free_ind.isdisjoint(ind)) and not (fml and not n.free_fml.isdisjoint(fml)):
            return n
        if isinstance(n, Var):
            return ind.get(n.name, n)
        if isinstance(n, (Quant, Eps)):
            if isinstance(n, Eps):
                key = (n, frozenset(ind.items()), frozenset(fml.items()))
                hit = self.memo.get(key)
                if hit is not None:
                    return hit
                out = self._binder(n, ind, fml)
                self.memo[key] = out
                return out
            return self._binder(n, ind, fml)
        if isinstance(n, FmlApp):
            args = tuple(self.go(a, ind, fml) for a in n.args)
            ab = fml.get(n.fvar)
            if ab is None:
                return FmlApp(n.name, args)
            return apply_subst(ab.body, Substitution(dict(zip(ab.params, args))))
        kids = n.children()
        new = tuple(self.go(k, ind, fml) for k in kids)
        if all(a is b for a, b in zip(kids, new)):
            return n
        return n.with_children(new)

    def _binder(self, n: Quant | Eps, ind: dict, fml: dict) -> Node:
        x, body = n.var, n.body
        ind = {y: t for y, t in ind.items() if y != x and y in body.free_ind}
        fml = {v: a for v, a in fml.items() if v in body.free_fml}
        if not ind and not fml:
            return n
        rng: set[str] = set()
        for t in ind.values():
            rng |= t.free_ind
        for a in fml.values():
            rng |= a.free_ind
        if x in rng:
            new_x = fresh_name(x, rng | body.free_ind | ind.keys())
            ind[x] = Var(new_x)
            x = new_x
        new_body = self.go(body, ind, fml)
        return Quant(n.q, x, new_body) if isinstance(n, Quant) else Eps(x, new_body)
