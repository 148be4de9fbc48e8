"""Rewrite first-order formulas into quantifier-free form over epsilon terms.

    Q x. A  ->  A{x -> eps x. negQ(A)}

The package provides the formula syntax, capture-avoiding substitution, the
rewrite step and its strategies, full reduction graphs, and a brute-force
checker for a termination theorem on finite abstract reduction systems.
"""
from .syntax import (
    Bin, Connective, Eps, FmlApp, FmlVar, FnApp, Formula, Not, PredApp, Quant,
    Quantifier, Term, Var, alpha_eq, canonicalize, count_epsilons,
    count_quantifiers, eps_nesting_depth, free_vars,
)
from .subst import FmlAbstraction, Substitution, apply_subst
from .rewrite import RuleKind, Redex, contract, find_redexes, parallel_step
from .strategy import (
    INNERMOST, OUTERMOST, PARALLEL, Fuse, FuseExceeded, Strategy, all_derivations,
    normalize, random_strategy, reduction_graph,
)
from .ars import FiniteARS, TheoremReport, check_klop_theorem
from .textio import ParseError, parse_formula, parse_term, print_formula, print_term

__version__ = "0.1.0"
