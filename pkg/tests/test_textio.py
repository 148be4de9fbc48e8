import pytest
from hypothesis import given

from epselim.generate import corpus
from epselim.syntax import (
    Bin, Connective, Eps, FmlApp, FnApp, Not, PredApp, Quant, Quantifier, Var,
    alpha_eq, canonicalize,
)
from epselim.textio import (
    ParseError, parse_formula, parse_term, print_formula, print_term, read_corpus,
)

from formulas import formulas

E, A = Quantifier.EXISTS, Quantifier.FORALL
x = Var("x")


def test_parse_examples():
    assert parse_formula("exists x. P(x)") == Quant(E, "x", PredApp("P", (x,)))
    assert parse_formula("P(eps x. P(x))") == PredApp("P", (Eps("x", PredApp("P", (x,))),))
    assert parse_formula("forall x. A <-> B") == Bin(
        Connective.EQUIV, Quant(A, "x", FmlApp("A")), FmlApp("B"))


def test_formula_variables_and_predicates():
    assert parse_formula("A") == FmlApp("A")
    assert parse_formula("$B(x, c())") == FmlApp("B", (x, FnApp("c")))
    assert parse_formula("Q()") == PredApp("Q")
    assert parse_formula("p") == PredApp("p")
    assert parse_term("f(x)") == FnApp("f", (x,))
    assert parse_term("y") == Var("y")


def test_precedence_and_associativity():
    f = parse_formula("A -> B -> C")
    assert f == Bin(Connective.IMPLIES, FmlApp("A"), Bin(Connective.IMPLIES, FmlApp("B"), FmlApp("C")))
    g = parse_formula("A <-> B <-> C")
    assert g.left == Bin(Connective.EQUIV, FmlApp("A"), FmlApp("B"))
    h = parse_formula("~A & B | C -> D <-> E")
    assert h.op is Connective.EQUIV and h.left.op is Connective.IMPLIES
    assert h.left.left.op is Connective.OR and h.left.left.left.op is Connective.AND
    assert isinstance(h.left.left.left.left, Not)
    assert parse_formula("exists x. (P(x) & Q())").body.op is Connective.AND
    assert parse_formula("exists x. P(x) & Q()").op is Connective.AND


def test_unicode_aliases():
    f = parse_formula("∃x. ¬P(x) ∧ Q() → R(x, εy. P(y)) ↔ A ∨ B")
    g = parse_formula("exists x. ~P(x) & Q() -> R(x, eps y. P(y)) <-> A | B")
    assert f == g
    assert parse_formula("∀x. P(x)") == parse_formula("forall x. P(x)")


def test_print_examples():
    assert print_formula(Quant(E, "x", PredApp("P", (x,)))) == "exists x. P(x)"
    assert print_formula(Not(Not(FmlApp("A")))) == "~~A"
    assert print_term(Eps("x", PredApp("P", (x,)))) == "eps x. P(x)"
    assert print_formula(parse_formula("(A & B) & C")) == "A & B & C"
    assert print_formula(parse_formula("A & (B & C)")) == "A & (B & C)"
    assert print_formula(parse_formula("(A -> B) -> C")) == "(A -> B) -> C"
    assert print_formula(parse_formula("P(eps x. (P(x) | Q()))")) == "P(eps x. (P(x) | Q()))"
    assert print_formula(FmlApp("a")) == "$a"


@pytest.mark.parametrize("text", [
    "P(x", "(A & B", "A & B)", "A ^ B", "exists . P(x)", "P(x,)", "", "A &", "eps x. P(x)",
    "P(x) & P(x, x)", "R(f(x), f(x, x))", "exists x P(x)",
])
def test_rejected_inputs(text):
    with pytest.raises(ParseError):
        parse_formula(text)


def test_error_spans_point_into_the_input():
    with pytest.raises(ParseError) as info:
        parse_formula("P(x) & ?")
    span = info.value.span
    assert 0 <= span.start <= span.end <= len("P(x) & ?")
    assert span.start == 7


def test_read_corpus():
    text = "# corpus\nexists x. P(x)\n\nA & B  # trailing\n"
    assert read_corpus(text) == [parse_formula("exists x. P(x)"), parse_formula("A & B")]
    with pytest.raises(ParseError, match="line 2"):
        read_corpus("A\n(B\n")


@given(formulas)
def test_round_trip(f):
    text = print_formula(f)
    assert alpha_eq(parse_formula(text), f)
    assert print_formula(parse_formula(text)) == text


def test_round_trip_on_fuzz_corpus():
    for f in corpus(1000, 42):
        assert parse_formula(print_formula(f)) == f
        c = canonicalize(f)
        assert parse_formula(print_formula(c)) == c
