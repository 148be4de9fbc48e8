"""Seeded random formulas (the fuzz corpus) and the nested-existential family."""
from __future__ import annotations

from dataclasses import dataclass, field

from .strategy import SplitMix64
from .syntax import (
    Bin, Connective, Eps, FmlApp, FnApp, Formula, Not, PredApp, Quant,
    Quantifier, Term, Var,
)

__all__ = ["GeneratorConfig", "FormulaGenerator", "corpus", "nested_existentials"]


@dataclass(frozen=True)
class GeneratorConfig:
    size_bound: int = 12
    max_depth: int = 6
    max_quantifiers: int = 8
    quantifier_prob: float = 0.4
    vacuous_prob: float = 0.2
    leaf_prob: float = 0.25
    eps_term_prob: float = 0.08
    fn_term_prob: float = 0.08
    bound_var_prob: float = 0.75
    connectives: tuple[tuple[str, float], ...] = (
        ("not", 1.0), ("and", 2.0), ("or", 2.0), ("implies", 1.0), ("equiv", 0.5))
    predicates: tuple[tuple[str, int], ...] = (("P", 1), ("Q", 0), ("R", 2), ("S", 1))
    formula_vars: tuple[tuple[str, int], ...] = (("A", 0), ("B", 1))
    functions: tuple[tuple[str, int], ...] = (("f", 1), ("c", 0))
    variables: tuple[str, ...] = ("x", "y", "z", "u", "v")


_CONNECTIVE = {
    "and": Connective.AND, "or": Connective.OR,
    "implies": Connective.IMPLIES, "equiv": Connective.EQUIV,
}


class FormulaGenerator:
    """Draws formulas by rejection: grow a random tree, keep it if it fits the bounds."""

    def __init__(self, config: GeneratorConfig = GeneratorConfig(), seed: int = 0):
        self.cfg = config
        self.rng = SplitMix64(seed)

    def _pick(self, items):
        return items[self.rng.below(len(items))]

    def _weighted(self, pairs):
        total = sum(w for _, w in pairs)
        r = self.rng.random() * total
        for item, w in pairs:
            r -= w
            if r < 0:
                return item
        return pairs[-1][0]

    def formula(self) -> Formula:
        while True:
            self._quants = 0
            f = self._formula(0, (), frozenset())
            if f.size <= self.cfg.size_bound and f.n_quant <= self.cfg.max_quantifiers:
                return f

    def _formula(self, depth: int, scope: tuple[str, ...], banned: frozenset) -> Formula:
        cfg, rng = self.cfg, self.rng
        if depth >= cfg.max_depth or (depth > 0 and rng.random() < cfg.leaf_prob):
            return self._atom(depth, scope, banned)
        if self._quants < cfg.max_quantifiers and rng.random() < cfg.quantifier_prob:
            self._quants += 1
            q = Quantifier.EXISTS if rng.random() < 0.5 else Quantifier.FORALL
            x = self._pick(cfg.variables)
            if rng.random() < cfg.vacuous_prob:
                body = self._formula(depth + 1, tuple(v for v in scope if v != x), banned | {x})
            else:
                body = self._formula(depth + 1, scope + (x,), banned - {x})
            return Quant(q, x, body)
        op = self._weighted(cfg.connectives)
        if op == "not":
            return Not(self._formula(depth + 1, scope, banned))
        left = self._formula(depth + 1, scope, banned)
        right = self._formula(depth + 1, scope, banned)
        return Bin(_CONNECTIVE[op], left, right)

    def _atom(self, depth: int, scope, banned) -> Formula:
        cfg = self.cfg
        if cfg.formula_vars and self.rng.random() < 0.2:
            name, arity = self._pick(cfg.formula_vars)
            return FmlApp(name, tuple(self._term(depth, scope, banned) for _ in range(arity)))
        name, arity = self._pick(cfg.predicates)
        return PredApp(name, tuple(self._term(depth, scope, banned) for _ in range(arity)))

    def _term(self, depth: int, scope, banned) -> Term:
        cfg, rng = self.cfg, self.rng
        r = rng.random()
        if r < cfg.eps_term_prob and depth < cfg.max_depth:
            x = self._pick(cfg.variables)
            return Eps(x, self._formula(depth + 1, scope + (x,), banned - {x}))
        if r < cfg.eps_term_prob + cfg.fn_term_prob and cfg.functions:
            name, arity = self._pick(cfg.functions)
            return FnApp(name, tuple(self._term(depth + 1, scope, banned) for _ in range(arity)))
        visible = [v for v in scope if v not in banned]
        if visible and rng.random() < cfg.bound_var_prob:
            return Var(self._pick(visible))
        free = [v for v in cfg.variables if v not in banned]
        return Var(self._pick(free)) if free else FnApp("c", ())


def corpus(count: int, seed: int = 42, config: GeneratorConfig = GeneratorConfig()) -> list[Formula]:
    gen = FormulaGenerator(config, seed)
    return [gen.formula() for _ in range(count)]


def nested_existentials(n: int) -> Formula:
    """exists x1. ... exists xn. R(x1, ..., xn)"""
    xs = [f"x{i}" for i in range(1, n + 1)]
    f: Formula = PredApp("R", tuple(Var(x) for x in xs))
    for x in reversed(xs):
        f = Quant(Quantifier.EXISTS, x, f)
    return f
