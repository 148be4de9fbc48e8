"""Hypothesis strategies for terms and formulas over a small fixed signature.

Few variable names on purpose, so binders clash and shadow often.
"""
from hypothesis import strategies as st

from epselim.syntax import (
    Bin, Connective, Eps, FmlApp, FnApp, Not, PredApp, Quant, Quantifier, Var,
)

NAMES = ("x", "y", "z")


def _terms(formulas):
    leaf = st.one_of(st.sampled_from(NAMES).map(Var), st.just(FnApp("c", ())))
    return st.recursive(
        leaf,
        lambda t: st.one_of(
            t.map(lambda a: FnApp("f", (a,))),
            st.builds(Eps, st.sampled_from(NAMES), formulas),
        ),
        max_leaves=3,
    )


def _atoms(term):
    return st.one_of(
        st.just(PredApp("Q", ())),
        st.just(FmlApp("A", ())),
        term.map(lambda t: PredApp("P", (t,))),
        term.map(lambda t: FmlApp("B", (t,))),
        st.tuples(term, term).map(lambda ts: PredApp("R", ts)),
    )


def _grow(f):
    return st.one_of(
        f.map(Not),
        st.builds(Bin, st.sampled_from(list(Connective)), f, f),
        st.builds(Quant, st.sampled_from(list(Quantifier)), st.sampled_from(NAMES), f),
    )


# epsilon bodies are quantifier-free atoms over variables to keep sizes small
_simple_terms = st.one_of(st.sampled_from(NAMES).map(Var), st.just(FnApp("c", ())))
_eps_bodies = st.recursive(_atoms(_simple_terms), _grow, max_leaves=3)
terms = _terms(_eps_bodies)
formulas = st.recursive(_atoms(terms), _grow, max_leaves=6)
small_formulas = st.recursive(_atoms(_simple_terms), _grow, max_leaves=4)
