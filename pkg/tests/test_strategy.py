import pytest
from hypothesis import given, settings, strategies as st

from epselim.generate import nested_existentials
from epselim.lengths import derivation_length_stats
from epselim.rewrite import RuleKind
from epselim.strategy import (
    INNERMOST, OUTERMOST, PARALLEL, BoundExceeded, Fuse, FuseExceeded, SplitMix64,
    Strategy, all_derivations, normalize, random_strategy, reduction_graph,
)
from epselim.syntax import Eps, PredApp, Var, alpha_eq
from epselim.textio import parse_formula

from formulas import formulas, small_formulas
from oracles import (
    all_derivation_lengths, alpha_equiv, naive_step, outermost_derivation_lengths,
)

x, y = Var("x"), Var("y")
TWO = parse_formula("exists x. exists y. R(x, y)")


def R(s, t):
    return PredApp("R", (s, t))


def hand_normal_form():
    # exists y first: exists x. R(x, eps y. R(x, y)); then x -> e
    e = Eps("x", R(x, Eps("y", R(x, y))))
    return R(e, Eps("y", R(e, y)))


def all_strategies(seed=0):
    return [INNERMOST, OUTERMOST, PARALLEL] + [random_strategy(seed + i) for i in range(5)]


def test_splitmix_reference_value():
    assert SplitMix64(0).next() == 0xE220A8397B1DCDAF


def test_below_stays_in_range():
    rng = SplitMix64(7)
    draws = [rng.below(3) for _ in range(3000)]
    assert set(draws) == {0, 1, 2}
    assert all(800 < draws.count(k) < 1200 for k in range(3))
    with pytest.raises(ValueError):
        rng.below(0)


def test_strategy_validation():
    with pytest.raises(ValueError):
        Strategy("sideways")
    with pytest.raises(ValueError):
        Strategy("random")
    assert str(random_strategy(3)) == "random(3)"


def test_innermost_on_two_existentials():
    t = normalize(TWO, INNERMOST)
    assert t.step_count == 2
    assert t.final == hand_normal_form()
    assert alpha_equiv(t.final, hand_normal_form())


def test_outermost_on_two_existentials():
    t = normalize(TWO, OUTERMOST)
    assert t.step_count == 4
    assert outermost_derivation_lengths(TWO) == {4}
    assert alpha_eq(t.final, hand_normal_form())


def test_already_normal():
    f = parse_formula("P(c)")
    for s in all_strategies():
        t = normalize(f, s)
        assert t.step_count == 0 and t.final is f


def test_trace_steps_replay():
    t = normalize(TWO, OUTERMOST)
    prev = t.start
    for s in t.steps:
        assert alpha_equiv(s.after, naive_step(prev, s.redex.pos))
        prev = s.after
    assert t.final.n_quant == 0
    assert t.max_eps_count == max(f.n_eps for f in t.formulas())
    assert t.max_eps_depth == max(f.eps_depth for f in t.formulas())


def test_parallel_strategy_contracts_all_outermost():
    f = parse_formula("exists x. P(x) & forall y. Q(y)")
    t = normalize(f, PARALLEL)
    assert t.step_count == 1 and len(t.steps[0].redexes) == 2


def test_random_runs_are_reproducible():
    f = parse_formula("exists x. (exists y. R(x, y) & forall z. exists u. R(z, u))")
    a, b = normalize(f, random_strategy(99)), normalize(f, random_strategy(99))
    assert [s.redex.pos for s in a.steps] == [s.redex.pos for s in b.steps]
    assert a.final == b.final


def test_fuse_reports_prefix():
    f = nested_existentials(4)
    with pytest.raises(FuseExceeded) as info:
        normalize(f, OUTERMOST, Fuse(max_steps=10))
    assert info.value.trace.step_count == 10
    with pytest.raises(FuseExceeded):
        normalize(f, OUTERMOST, Fuse(max_nodes=100))


def test_length_stats_small_n():
    rows = {(r.n, r.strategy): r for r in derivation_length_stats(nested_existentials, 2, 2)}
    assert rows[(0, "innermost")].steps == rows[(0, "outermost")].steps == 0
    assert rows[(1, "innermost")].steps == rows[(1, "outermost")].steps == 1
    assert (rows[(2, "innermost")].steps, rows[(2, "outermost")].steps) == (2, 4)
    assert rows[(2, "innermost")].eps_depth == 3


def test_all_derivations_examples():
    (t,) = all_derivations(parse_formula("exists x. P(x)"))
    assert t.step_count == 1
    ts = all_derivations(parse_formula("exists x. Q() & exists y. Q()"))
    assert len(ts) == 2
    assert all(t.final == parse_formula("Q() & Q()") for t in ts)
    ts = all_derivations(TWO)
    lengths = {t.step_count for t in ts}
    assert min(lengths) == 2 and max(lengths) == 4
    assert lengths == all_derivation_lengths(TWO)
    assert all(alpha_eq(t.final, hand_normal_form()) for t in ts)


def test_bound_exceeded():
    with pytest.raises(BoundExceeded):
        reduction_graph(nested_existentials(3), bound=10)
    with pytest.raises(BoundExceeded):
        all_derivations(nested_existentials(3), bound=5000, max_paths=3)


@settings(deadline=None)
@given(formulas)
def test_innermost_length_is_quantifier_count(f):
    assert normalize(f, INNERMOST).step_count == f.n_quant


@settings(deadline=None)
@given(formulas, st.integers(0, 2 ** 64 - 1))
def test_all_strategies_agree(f, seed):
    finals = [normalize(f, s).final for s in all_strategies(seed)]
    assert all(g.n_quant == 0 for g in finals)
    assert all(alpha_eq(finals[0], g) for g in finals[1:])


@settings(max_examples=50, deadline=None)
@given(small_formulas)
def test_reduction_graph_properties(f):
    try:
        g = reduction_graph(f, 2000)
    except BoundExceeded:
        return
    assert g.is_acyclic() and g.closure_irreflexive()
    assert len(g.normal_forms()) == 1
    lo, hi = g.path_lengths()
    assert lo == f.n_quant and hi >= lo
    for e in g.edges:
        d = g.nodes[e.dst].n_eps - g.nodes[e.src].n_eps
        assert d == 0 if e.kind is RuleKind.STEP0 else d >= 1
