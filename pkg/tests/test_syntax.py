"""Parser, printer, and structural helpers."""

import pytest
from hypothesis import given, settings, strategies as st

from jlogic.syntax import (
    And,
    App,
    Atom,
    Bang,
    Constant,
    FALSUM,
    Falsum,
    Implies,
    Just,
    Or,
    ParseError,
    Sum,
    Variable,
    formula_size,
    parse_formula,
    parse_term,
    print_formula,
    print_term,
    subformulas,
    subterms,
    term_size,
)

x, y, z = Variable("x"), Variable("y"), Variable("z")
p, q, r = Atom("p"), Atom("q"), Atom("r")


term_cases = [
    ("x", x),
    ("!c1 . x + y", Sum(App(Bang(Constant("c1")), x), y)),
    ("x + y", Sum(x, y)),
    ("x.y.z", App(App(x, y), z)),
    ("!!x", Bang(Bang(x))),
    ("x.(y + z)", App(x, Sum(y, z))),
    ("(x + y).x", App(Sum(x, y), x)),
]


@pytest.mark.parametrize("src,expected", term_cases)
def test_parse_term(src, expected):
    assert parse_term(src) == expected


formula_cases = [
    ("_|_", FALSUM),
    ("p -> q -> r", Implies(p, Implies(q, r))),
    (
        "t:(p -> q) -> (s:p -> t.s:q)",
        Implies(
            Just(Variable("t"), Implies(p, q)),
            Implies(Just(Variable("s"), p), Just(App(Variable("t"), Variable("s")), q)),
        ),
    ),
    ("p /\\ q \\/ r", Or(And(p, q), r)),
    ("x:p -> p", Implies(Just(x, p), p)),
    ("x:y:p", Just(x, Just(y, p))),
    ("!x:x:p", Just(Bang(x), Just(x, p))),
    ("x + y:p", Just(Sum(x, y), p)),
    ("(p -> q) -> p", Implies(Implies(p, q), p)),
]


@pytest.mark.parametrize("src,expected", formula_cases)
def test_parse_formula(src, expected):
    assert parse_formula(src) == expected


print_cases = [
    (Sum(x, y), "x + y"),
    (Just(App(x, y), p), "x.y:p"),
    (Implies(Or(p, q), FALSUM), "p \\/ q -> _|_"),
    (Just(Bang(x), Just(x, p)), "!x:x:p"),
    (And(p, And(q, r)), "p /\\ (q /\\ r)"),
    (Implies(Implies(p, q), r), "(p -> q) -> r"),
]


@pytest.mark.parametrize("a,expected", print_cases)
def test_print(a, expected):
    if isinstance(a, (Sum, App, Bang, Variable, Constant)):
        assert print_term(a) == expected
    else:
        assert print_formula(a) == expected


def test_unicode_aliases():
    assert parse_formula("p → q ∧ r") == parse_formula("p -> q /\\ r")
    assert parse_formula("⊥") == FALSUM
    assert parse_term("x · y") == App(x, y)


error_cases = [
    ("x + + y", parse_term),
    ("p -> (", parse_formula),
    ("", parse_formula),
    ("p q", parse_formula),
    (")", parse_term),
]


@pytest.mark.parametrize("src,fn", error_cases)
def test_errors(src, fn):
    with pytest.raises(ParseError) as exc:
        fn(src)
    assert exc.value.pos >= 0


def test_error_position():
    # second "+" has nothing to its right at position 4
    with pytest.raises(ParseError) as exc:
        parse_term("x + + y")
    assert exc.value.pos == 4


def test_subformulas():
    assert subformulas(p) == {p}
    assert subformulas(FALSUM) == {FALSUM}
    assert subformulas(Implies(p, Just(x, q))) == {
        Implies(p, Just(x, q)), p, Just(x, q), q,
    }


def test_subterms():
    c = Constant("c1")
    assert subterms(Bang(c)) == {Bang(c), c}
    assert subterms(App(Sum(x, y), x)) == {App(Sum(x, y), x), Sum(x, y), x, y}
    assert subterms(x) == {x}


terms = st.recursive(
    st.sampled_from([x, y, z, Constant("c1"), Variable("foo")]),
    lambda inner: st.one_of(
        st.builds(App, inner, inner),
        st.builds(Sum, inner, inner),
        st.builds(Bang, inner),
    ),
    max_leaves=32,
)

formulas = st.recursive(
    st.sampled_from([p, q, r, Atom("p7"), FALSUM]),
    lambda inner: st.one_of(
        st.builds(Implies, inner, inner),
        st.builds(And, inner, inner),
        st.builds(Or, inner, inner),
        st.builds(Just, terms, inner),
    ),
    max_leaves=32,
)


@given(terms)
def test_term_round_trip(t):
    assert parse_term(print_term(t)) == t


@given(formulas)
def test_formula_round_trip(a):
    assert parse_formula(print_formula(a)) == a


@given(formulas)
def test_full_parens_agrees(a):
    # minimal and fully parenthesized output parse to the same tree
    assert parse_formula(print_formula(a, full_parens=True)) == a


@given(formulas)
def test_subformula_count_bounded(a):
    assert a in subformulas(a)
    assert len(subformulas(a)) <= formula_size(a)


@given(terms)
def test_subterm_count_bounded(t):
    assert t in subterms(t)
    assert len(subterms(t)) <= term_size(t)


def test_constant_requires_declaration():
    # c-digit names are always constants; other names only when declared
    assert parse_term("c2") == Constant("c2")
    assert parse_term("kb") == Variable("kb")
    assert parse_term("kb", constants=frozenset({"kb"})) == Constant("kb")
