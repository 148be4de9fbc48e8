"""First-order terms and formulas with the epsilon binder.

Nodes are immutable and cache their hash, free variables, quantifier and
epsilon counts, epsilon nesting depth and tree size at construction, so all
of these measures are O(1) and stay cheap when subterms are shared.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator, Union

__all__ = [
    "Quantifier", "Connective", "FmlVar",
    "Node", "Term", "Formula", "Var", "FnApp", "Eps",
    "PredApp", "FmlApp", "Not", "Bin", "Quant",
    "neg_by_quantifier", "free_vars", "canonicalize", "alpha_eq", "alpha_key",
    "count_quantifiers", "count_epsilons", "eps_nesting_depth", "size",
    "subterm_at", "replace_at", "positions", "free_occurrences",
    "symbol_arities", "check_arities", "all_var_names",
    "InvalidPosition", "ArityError",
]

Position = tuple[int, ...]

_EMPTY: frozenset = frozenset()


class InvalidPosition(IndexError):
    pass


class ArityError(ValueError):
    pass


class Quantifier(enum.Enum):
    EXISTS = "exists"
    FORALL = "forall"

    def __str__(self) -> str:
        return self.value


class Connective(enum.Enum):
    AND = "&"
    OR = "|"
    IMPLIES = "->"
    EQUIV = "<->"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class FmlVar:
    """An n-ary formula variable; name and arity together identify it."""
    name: str
    arity: int = 0

    def __post_init__(self):
        if not self.name:
            raise ValueError("formula variable needs a name")
        if self.arity < 0:
            raise ValueError("negative arity")

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


class Node:
    __slots__ = ("_hash", "free_ind", "free_fml", "n_quant", "n_eps", "eps_depth", "size")

    def children(self) -> tuple[Node, ...]:
        raise NotImplementedError

    def with_children(self, kids) -> Node:
        raise NotImplementedError

    def _key(self) -> tuple:
        raise NotImplementedError

    def _fill(self, h: int, kids: tuple, free_ind: frozenset, own_eps: int = 0,
              own_quant: int = 0, free_fml: frozenset = _EMPTY) -> None:
        put = object.__setattr__
        put(self, "_hash", h)
        put(self, "free_ind", free_ind)
        if not kids:
            put(self, "n_quant", own_quant)
            put(self, "n_eps", own_eps)
            put(self, "eps_depth", own_eps)
            put(self, "size", 1)
            put(self, "free_fml", free_fml)
            return
        if len(kids) == 1:
            (k,) = kids
            put(self, "n_quant", k.n_quant + own_quant)
            put(self, "n_eps", k.n_eps + own_eps)
            put(self, "eps_depth", k.eps_depth + own_eps)
            put(self, "size", k.size + 1)
            put(self, "free_fml", k.free_fml | free_fml if free_fml else k.free_fml)
            return
        nq = ne = dp = 0
        sz = 1
        ff = free_fml
        for k in kids:
            nq += k.n_quant
            ne += k.n_eps
            sz += k.size
            if k.eps_depth > dp:
                dp = k.eps_depth
            if k.free_fml:
                ff = ff | k.free_fml if ff else k.free_fml
        put(self, "n_quant", nq + own_quant)
        put(self, "n_eps", ne + own_eps)
        put(self, "eps_depth", dp + own_eps)
        put(self, "size", sz)
        put(self, "free_fml", ff)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return self._key() == other._key()

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    def __str__(self) -> str:
        from .textio import print_formula, print_term
        return print_formula(self) if isinstance(self, Formula) else print_term(self)


class Term(Node):
    __slots__ = ()


class Formula(Node):
    __slots__ = ()


def _union_ind(kids) -> frozenset:
    out = _EMPTY
    for k in kids:
        if k.free_ind:
            out = out | k.free_ind if out else k.free_ind
    return out


@dataclass(frozen=True, eq=False, slots=True)
class Var(Term):
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("individual variable needs a name")
        self._fill(hash(("Var", self.name)), (), frozenset((self.name,)))

    def _key(self):
        return (self.name,)

    def children(self):
        return ()

    def with_children(self, kids):
        return self


@dataclass(frozen=True, eq=False, slots=True)
class FnApp(Term):
    symbol: str
    args: tuple[Term, ...] = ()

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        self._fill(hash(("FnApp", self.symbol, self.args)), self.args, _union_ind(self.args))

    def _key(self):
        return (self.symbol, self.args)

    def children(self):
        return self.args

    def with_children(self, kids):
        return FnApp(self.symbol, tuple(kids))


@dataclass(frozen=True, eq=False, slots=True)
class Eps(Term):
    var: str
    body: Formula

    def __post_init__(self):
        fi = self.body.free_ind
        self._fill(hash(("Eps", self.var, self.body._hash)), (self.body,),
                   fi - {self.var} if self.var in fi else fi, own_eps=1)

    def _key(self):
        return (self.var, self.body)

    def children(self):
        return (self.body,)

    def with_children(self, kids):
        (body,) = kids
        return Eps(self.var, body)


@dataclass(frozen=True, eq=False, slots=True)
class PredApp(Formula):
    symbol: str
    args: tuple[Term, ...] = ()

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        self._fill(hash(("PredApp", self.symbol, self.args)), self.args, _union_ind(self.args))

    def _key(self):
        return (self.symbol, self.args)

    def children(self):
        return self.args

    def with_children(self, kids):
        return PredApp(self.symbol, tuple(kids))


@dataclass(frozen=True, eq=False, slots=True)
class FmlApp(Formula):
    """Application of a formula variable; its arity is the argument count."""
    name: str
    args: tuple[Term, ...] = ()

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        self._fill(hash(("FmlApp", self.name, self.args)), self.args, _union_ind(self.args),
                   free_fml=frozenset((FmlVar(self.name, len(self.args)),)))

    def _key(self):
        return (self.name, self.args)

    @property
    def fvar(self) -> FmlVar:
        return FmlVar(self.name, len(self.args))

    def children(self):
        return self.args

    def with_children(self, kids):
        return FmlApp(self.name, tuple(kids))


@dataclass(frozen=True, eq=False, slots=True)
class Not(Formula):
    arg: Formula

    def __post_init__(self):
        self._fill(hash(("Not", self.arg._hash)), (self.arg,), self.arg.free_ind)

    def _key(self):
        return (self.arg,)

    def children(self):
        return (self.arg,)

    def with_children(self, kids):
        (arg,) = kids
        return Not(arg)


@dataclass(frozen=True, eq=False, slots=True)
class Bin(Formula):
    op: Connective
    left: Formula
    right: Formula

    def __post_init__(self):
        left, right = self.left, self.right
        fl, fr = left.free_ind, right.free_ind
        fi = fl if not fr or fr is fl else fr if not fl else fl | fr
        self._fill(hash((self.op.value, left._hash, right._hash)), (left, right), fi)

    def _key(self):
        return (self.op, self.left, self.right)

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        left, right = kids
        return Bin(self.op, left, right)


@dataclass(frozen=True, eq=False, slots=True)
class Quant(Formula):
    q: Quantifier
    var: str
    body: Formula

    def __post_init__(self):
        fi = self.body.free_ind
        self._fill(hash((self.q.value, self.var, self.body._hash)), (self.body,),
                   fi - {self.var} if self.var in fi else fi, own_quant=1)

    def _key(self):
        return (self.q, self.var, self.body)

    def children(self):
        return (self.body,)

    def with_children(self, kids):
        (body,) = kids
        return Quant(self.q, self.var, body)

    @property
    def vacuous(self) -> bool:
        return self.var not in self.body.free_ind


AnyNode = Union[Term, Formula]


def neg_by_quantifier(q: Quantifier, f: Formula) -> Formula:
    """Prefix `f` with a negation for forall, leave it alone for exists."""
    return Not(f) if q is Quantifier.FORALL else f


def free_vars(node: Node) -> tuple[frozenset[str], frozenset[FmlVar]]:
    """Free individual variables and (always free) formula variables."""
    return node.free_ind, node.free_fml


def count_quantifiers(node: Node) -> int:
    return node.n_quant


def count_epsilons(node: Node) -> int:
    return node.n_eps


def eps_nesting_depth(node: Node) -> int:
    return node.eps_depth


def size(node: Node) -> int:
    return node.size


# -- alpha equivalence ---------------------------------------------------------

_CANON_RE = re.compile(r"^(_+)\d+$")


def _canon_prefix(free: frozenset[str]) -> str:
    longest = 0
    for name in free:
        m = _CANON_RE.match(name)
        if m:
            longest = max(longest, len(m.group(1)))
    return "_" * (longest + 1)


def canonicalize(node: Node) -> Node:
    """Rename every binder to `_0`, `_1`, ... in pre-order.

    The underscore prefix is lengthened when a free variable already has the
    reserved shape, so free names are never captured.
    """
    prefix = _canon_prefix(node.free_ind)
    counter = [0]

    def go(n: Node, env: dict[str, str]) -> Node:
        if not (n.free_ind & env.keys()) and not (n.n_quant or n.n_eps):
            return n
        if isinstance(n, Var):
            new = env.get(n.name)
            return n if new is None else Var(new)
        if isinstance(n, (Quant, Eps)):
            new = f"{prefix}{counter[0]}"
            counter[0] += 1
            body = go(n.body, {**env, n.var: new})
            return Quant(n.q, new, body) if isinstance(n, Quant) else Eps(new, body)
        kids = n.children()
        new_kids = tuple(go(k, env) for k in kids)
        if all(a is b for a, b in zip(kids, new_kids)):
            return n
        return n.with_children(new_kids)

    return go(node, {})


def alpha_key(node: Node) -> tuple:
    """Flat pre-order encoding with bound variables as binder distances.

    Two nodes have equal keys iff they are alpha-equivalent; cheaper than
    building the canonical tree when only identity is needed.
    """
    out: list = []
    push = out.append

    def go(n: Node, env: dict[str, int], depth: int) -> None:
        cls = type(n)
        if cls is Var:
            lvl = env.get(n.name)
            push(n.name if lvl is None else depth - lvl)
        elif cls is Quant or cls is Eps:
            push("@" + n.q.value if cls is Quant else "@eps")
            old = env.get(n.var)
            env[n.var] = depth
            go(n.body, env, depth + 1)
            if old is None:
                del env[n.var]
            else:
                env[n.var] = old
        else:
            if cls is Bin:
                push(n.op.value)
            elif cls is Not:
                push("~")
            else:
                push((cls.__name__, n._key()[0], len(n.children())))
            for k in n.children():
                go(k, env, depth)

    go(node, {}, 0)
    return tuple(out)


def alpha_eq(f: Node, g: Node) -> bool:
    if f is g:
        return True
    if f.free_ind != g.free_ind or f.size != g.size or f.n_quant != g.n_quant:
        return False
    return alpha_key(f) == alpha_key(g)


# -- positions -----------------------------------------------------------------

def subterm_at(node: Node, pos) -> Node:
    cur = node
    for i in pos:
        kids = cur.children()
        if not 0 <= i < len(kids):
            raise InvalidPosition(f"no child {i} at {type(cur).__name__} along {list(pos)}")
        cur = kids[i]
    return cur


def replace_at(node: Node, pos, new: Node) -> Node:
    """Graft `new` at `pos`; no capture avoidance is performed here."""
    pos = tuple(pos)
    if not pos:
        if isinstance(node, Formula) != isinstance(new, Formula):
            raise TypeError(f"cannot replace a {type(node).__name__} by a {type(new).__name__}")
        return new
    kids = node.children()
    i = pos[0]
    if not 0 <= i < len(kids):
        raise InvalidPosition(f"no child {i} at {type(node).__name__}")
    kids = list(kids)
    kids[i] = replace_at(kids[i], pos[1:], new)
    return node.with_children(kids)


def positions(node: Node, prefix: Position = ()) -> Iterator[tuple[Position, Node]]:
    """Pre-order walk yielding (position, subnode)."""
    yield prefix, node
    for i, k in enumerate(node.children()):
        yield from positions(k, prefix + (i,))


def free_occurrences(node: Node, name: str, prefix: Position = ()) -> list[Position]:
    """Positions of the free occurrences of individual variable `name`."""
    if name not in node.free_ind:
        return []
    if isinstance(node, Var):
        return [prefix]
    out = []
    for i, k in enumerate(node.children()):
        out.extend(free_occurrences(k, name, prefix + (i,)))
    return out


# -- signatures -----------------------------------------------------------------

def symbol_arities(node: Node) -> dict[tuple[str, str], set[int]]:
    """Arities used per ("pred" | "fn", symbol)."""
    seen: dict[tuple[str, str], set[int]] = {}
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, PredApp):
            seen.setdefault(("pred", n.symbol), set()).add(len(n.args))
        elif isinstance(n, FnApp):
            seen.setdefault(("fn", n.symbol), set()).add(len(n.args))
        stack.extend(n.children())
    return seen


def check_arities(node: Node) -> None:
    for (kind, sym), ars in sorted(symbol_arities(node).items()):
        if len(ars) > 1:
            raise ArityError(f"{kind} symbol {sym!r} used with arities {sorted(ars)}")


def all_var_names(node: Node) -> set[str]:
    """Every individual variable name occurring anywhere, bound or free."""
    out: set[str] = set()
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, Var):
            out.add(n.name)
        elif isinstance(n, (Quant, Eps)):
            out.add(n.var)
        stack.extend(n.children())
    return out
