"""Independent reference implementations used as test oracles.

Nothing here calls into the engine's substitution, canonicalization, redex
search or ARS code; only the node constructors are shared.
"""
from __future__ import annotations

import itertools

from epselim.syntax import (
    Bin, Eps, FmlApp, FnApp, Not, PredApp, Quant, Quantifier, Var,
)


def fv(n) -> set[str]:
    if isinstance(n, Var):
        return {n.name}
    if isinstance(n, (Quant, Eps)):
        return fv(n.body) - {n.var}
    out: set[str] = set()
    for k in _kids(n):
        out |= fv(k)
    return out


def _kids(n):
    if isinstance(n, (FnApp, PredApp, FmlApp)):
        return list(n.args)
    if isinstance(n, Not):
        return [n.arg]
    if isinstance(n, Bin):
        return [n.left, n.right]
    if isinstance(n, (Quant, Eps)):
        return [n.body]
    return []


def alpha_equiv(a, b, env_a=None, env_b=None, depth=0) -> bool:
    """Simultaneous walk pairing binders by their binding depth."""
    env_a = env_a or {}
    env_b = env_b or {}
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        la, lb = env_a.get(a.name), env_b.get(b.name)
        if la is None and lb is None:
            return a.name == b.name
        return la == lb
    if isinstance(a, (Quant, Eps)):
        if isinstance(a, Quant) and a.q is not b.q:
            return False
        return alpha_equiv(a.body, b.body, {**env_a, a.var: depth}, {**env_b, b.var: depth}, depth + 1)
    if isinstance(a, (FnApp, PredApp)) and a.symbol != b.symbol:
        return False
    if isinstance(a, FmlApp) and a.name != b.name:
        return False
    if isinstance(a, Bin) and a.op is not b.op:
        return False
    ka, kb = _kids(a), _kids(b)
    return len(ka) == len(kb) and all(
        alpha_equiv(x, y, env_a, env_b, depth) for x, y in zip(ka, kb))


def _fresh(avoid: set[str]) -> str:
    for i in itertools.count():
        name = f"w{i}"
        if name not in avoid:
            return name


def naive_subst(n, x: str, t):
    """Textbook single-variable capture-avoiding substitution n{x -> t}."""
    if isinstance(n, Var):
        return t if n.name == x else n
    if isinstance(n, (Quant, Eps)):
        y, body = n.var, n.body
        if y == x or x not in fv(body):
            return n
        if y in fv(t):
            z = _fresh(fv(t) | fv(body) | {x})
            body = naive_subst(body, y, Var(z))
            y = z
        new = naive_subst(body, x, t)
        return Quant(n.q, y, new) if isinstance(n, Quant) else Eps(y, new)
    if isinstance(n, FnApp):
        return FnApp(n.symbol, tuple(naive_subst(k, x, t) for k in n.args))
    if isinstance(n, PredApp):
        return PredApp(n.symbol, tuple(naive_subst(k, x, t) for k in n.args))
    if isinstance(n, FmlApp):
        return FmlApp(n.name, tuple(naive_subst(k, x, t) for k in n.args))
    if isinstance(n, Not):
        return Not(naive_subst(n.arg, x, t))
    return Bin(n.op, naive_subst(n.left, x, t), naive_subst(n.right, x, t))


def naive_contract_root(q: Quant):
    body = q.body if q.q is Quantifier.EXISTS else Not(q.body)
    return naive_subst(q.body, q.var, Eps(q.var, body))


def quant_positions(n, prefix=()):
    """Every quantifier occurrence, pre-order."""
    out = [prefix] if isinstance(n, Quant) else []
    for i, k in enumerate(_kids(n)):
        out += quant_positions(k, prefix + (i,))
    return out


def node_at(n, pos):
    for i in pos:
        n = _kids(n)[i]
    return n


def graft(n, pos, new):
    if not pos:
        return new
    kids = _kids(n)
    kids[pos[0]] = graft(kids[pos[0]], pos[1:], new)
    if isinstance(n, FnApp):
        return FnApp(n.symbol, tuple(kids))
    if isinstance(n, PredApp):
        return PredApp(n.symbol, tuple(kids))
    if isinstance(n, FmlApp):
        return FmlApp(n.name, tuple(kids))
    if isinstance(n, Not):
        return Not(kids[0])
    if isinstance(n, Bin):
        return Bin(n.op, kids[0], kids[1])
    if isinstance(n, Quant):
        return Quant(n.q, n.var, kids[0])
    return Eps(n.var, kids[0])


def naive_step(f, pos):
    return graft(f, pos, naive_contract_root(node_at(f, pos)))


def outermost_derivation_lengths(f) -> set[int]:
    """Lengths of all derivations that always contract some outermost redex."""
    ps = quant_positions(f)
    if not ps:
        return {0}
    outer = [p for p in ps if not any(q != p and p[:len(q)] == q for q in ps)]
    out: set[int] = set()
    for p in outer:
        out |= {1 + k for k in outermost_derivation_lengths(naive_step(f, p))}
    return out


def all_derivation_lengths(f) -> set[int]:
    ps = quant_positions(f)
    if not ps:
        return {0}
    out: set[int] = set()
    for p in ps:
        out |= {1 + k for k in all_derivation_lengths(naive_step(f, p))}
    return out


# -- abstract reduction systems on explicit pair sets -------------------------------

def succ_of(pairs, u):
    return {v for (x, v) in pairs if x == u}


def reach(pairs, u) -> set:
    seen, todo = {u}, [u]
    while todo:
        w = todo.pop()
        for v in succ_of(pairs, w):
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def has_cycle(pairs) -> bool:
    return any(u in reach(pairs, v) for (u, v) in pairs)


def klop_by_definition(r0, r1, a, a_prime):
    """(cond1, cond2, cond3, cond4, conclusion) straight from the definitions."""
    r3 = set(r0) | set(r1)
    A = reach(r3, a)
    r0A = {(u, v) for (u, v) in r0 if u in A}
    r1A = {(u, v) for (u, v) in r1 if u in A}
    r4 = {(u, v) for (u, v) in r3 if u in A}
    cond1 = not has_cycle(r0A)
    r2 = {(u, w) for u in A for v in reach(r0A, u) for w in succ_of(r1A, v)}
    ends = {b for b in A if a_prime in reach(r0A, b)}
    from_a = reach(r2, a)
    relevant = {u for u in from_a if reach(r2, u) & ends}
    r2rel = {(u, v) for (u, v) in r2 if u in relevant and v in relevant}
    cond2 = not has_cycle(r2rel)
    cond3 = all(reach(r4, b1) & reach(r4, b2)
                for c in A for b1 in succ_of(r4, c) for b2 in succ_of(r1A, c))
    cond4 = all(reach(r4, b1) & ({b2} | succ_of(r4, b2))
                for c in A for b1 in succ_of(r4, c) for b2 in succ_of(r0A, c))
    return cond1, cond2, cond3, cond4, not has_cycle(r4)
