"""Derivability oracle, prime sets, saturation, canonical models, and the
shipped universe files."""

from importlib import resources

import pytest

from jlogic.proof_system import ConstantSpecification, Derivable
from jlogic.semantics import evaluate_truth, validate_model
from jlogic.saturation import (
    BoundedTheory,
    CapExceeded,
    DerivabilityOracle,
    FailedPrecondition,
    FormulaUniverse,
    RefutedBySemantics,
    Unknown,
    bounded_canonical_model,
    check_prime,
    inverse_evidence,
    parse_universe,
    prime_saturate,
    split_disjunction,
)
from jlogic.saturation import FileFormatError
from jlogic.syntax import (
    And,
    Atom,
    FALSUM,
    Implies,
    Just,
    Or,
    Variable,
    parse_formula,
    print_formula,
)

CS = ConstantSpecification.default_schematic()
p, q = Atom("p"), Atom("q")
x = Variable("x")


def members_of(th):
    return sorted(map(print_formula, th.members))


def shipped(name):
    root = resources.files("jlogic") / "universes"
    return parse_universe((root / name).read_text(), CS)


# --- oracle -----------------------------------------------------------------


def test_oracle_derivable():
    o = DerivabilityOracle(CS, 4)
    cert = o.query(frozenset({Just(x, p)}), p)
    assert isinstance(cert, Derivable)
    assert cert.proof.conclusion == p


def test_oracle_refutes_with_witness():
    o = DerivabilityOracle(CS, 4)
    hyps = frozenset({Implies(p, q)})
    cert = o.query(hyps, p)
    assert isinstance(cert, RefutedBySemantics)
    m, w = cert.countermodel.model, cert.countermodel.world
    assert validate_model(m).ok
    for h in hyps:
        assert evaluate_truth(m, w, h)
    assert not evaluate_truth(m, w, p)


def test_oracle_caches():
    o = DerivabilityOracle(CS, 4)
    a = o.query(frozenset(), Implies(p, p))
    b = o.query(frozenset(), Implies(p, p))
    assert a is b


# --- split_disjunction ------------------------------------------------------


def test_split_left():
    assert split_disjunction(frozenset(), p, q, FALSUM, CS) == "left"


def test_split_right():
    n = frozenset({Implies(p, FALSUM)})
    assert split_disjunction(n, p, q, FALSUM, CS) == "right"


def test_split_tie_prefers_left():
    assert split_disjunction(frozenset(), p, p, And(p, q), CS) == "left"


def test_split_unknown_when_both_derive():
    # both branches reach the goal, so neither can be certified
    assert split_disjunction(frozenset(), p, q, Or(p, q), CS) == "unknown"


# --- check_prime ------------------------------------------------------------


def test_prime_positive():
    u = FormulaUniverse.from_formulas([Or(p, q)])
    th = BoundedTheory(u, frozenset({Or(p, q), p}), 4)
    assert check_prime(th, CS).status == "prime"


def test_prime_needs_disjunction_property():
    u = FormulaUniverse.from_formulas([Or(p, q)])
    th = BoundedTheory(u, frozenset({Or(p, q)}), 4)
    verdict = check_prime(th, CS)
    assert verdict.status == "not_prime"
    assert "disjunction" in verdict.reason


def test_prime_rejects_falsum():
    u = FormulaUniverse.from_formulas([FALSUM])
    th = BoundedTheory(u, frozenset({FALSUM}), 4)
    assert check_prime(th, CS).status == "not_prime"


def test_prime_needs_deductive_closure():
    # p in members forces p \/ q in members
    u = FormulaUniverse.from_formulas([Or(p, q)])
    th = BoundedTheory(u, frozenset({p}), 4)
    verdict = check_prime(th, CS)
    assert verdict.status == "not_prime"


# --- prime_saturate ---------------------------------------------------------


def test_saturate_disjunction_chooses():
    u = FormulaUniverse.from_formulas([Or(p, q), FALSUM])
    th = prime_saturate(frozenset({Or(p, q)}), FALSUM, u, CS, 4)
    assert Or(p, q) in th.members
    assert p in th.members or q in th.members
    assert FALSUM not in th.members
    assert check_prime(th, CS).status == "prime"


def test_saturate_avoiding_p_is_empty():
    u = FormulaUniverse.from_formulas([p])
    th = prime_saturate(frozenset(), p, u, CS, 4)
    assert th.members == frozenset()


def test_saturate_evidence_pulls_body():
    u = FormulaUniverse.from_formulas([Just(x, p), p])
    th = prime_saturate(frozenset({Just(x, p)}), FALSUM, u, CS, 4)
    assert {Just(x, p), p} <= th.members


def test_saturate_failed_precondition():
    u = FormulaUniverse.from_formulas([p])
    with pytest.raises(FailedPrecondition):
        prime_saturate(frozenset({p}), p, u, CS, 4)


def test_saturate_base_outside_universe():
    u = FormulaUniverse.from_formulas([p])
    with pytest.raises(ValueError):
        prime_saturate(frozenset({q}), FALSUM, u, CS, 4)


def test_saturate_trace_is_complete():
    spec = shipped("sat-disjunction.txt")
    th = prime_saturate(spec.base, spec.goal, spec.universe, CS, 4)
    assert [s.index for s in th.trace] == list(range(len(th.trace)))
    # every universe formula is considered exactly once
    assert sorted(map(print_formula, (s.candidate for s in th.trace))) == sorted(
        map(print_formula, spec.universe)
    )
    for s in th.trace:
        if s.certificate is None:
            assert s.added  # was already a member
        elif s.added:
            assert isinstance(s.certificate, RefutedBySemantics)
        else:
            assert not isinstance(s.certificate, RefutedBySemantics)


shipped_saturations = [
    ("sat-disjunction.txt", ["p", "p \\/ q", "q"]),
    ("sat-evidence.txt", ["p", "x:p"]),
    ("sat-peirce.txt", ["(p -> q) -> p"]),
    ("sat-application.txt",
     ["p", "p -> q", "q", "x.y:q", "x:(p -> q)", "y:p"]),
    ("sat-introspection.txt", ["!x:x:p", "p", "x + y:p", "x:p"]),
]


@pytest.mark.parametrize("name,expected", shipped_saturations)
def test_shipped_saturations(name, expected):
    spec = shipped(name)
    th = prime_saturate(spec.base, spec.goal, spec.universe, CS, 4)
    assert members_of(th) == expected
    assert check_prime(th, CS).status == "prime"
    assert not any(isinstance(c, Unknown) for c in th.certificates.values())
    assert spec.base <= th.members
    assert spec.goal not in th.members


# --- inverse_evidence -------------------------------------------------------


def test_inverse_evidence_read_off():
    u = FormulaUniverse.from_formulas([Just(x, p), Just(x, Implies(p, q))])
    th = BoundedTheory(u, frozenset({Just(x, p), p}), 4)
    assert inverse_evidence(th, x) == frozenset({p})
    assert inverse_evidence(th, Variable("y")) == frozenset()
    th2 = BoundedTheory(
        u, frozenset({Just(x, p), Just(x, Implies(p, q))}), 4
    )
    assert inverse_evidence(th2, x) == frozenset({p, Implies(p, q)})


def test_inverse_evidence_inside_members_for_primes():
    for name, _ in shipped_saturations:
        spec = shipped(name)
        th = prime_saturate(spec.base, spec.goal, spec.universe, CS, 4)
        terms = {a.term for a in spec.universe if isinstance(a, Just)}
        for t in terms:
            assert inverse_evidence(th, t) <= th.members


# --- bounded canonical model ------------------------------------------------


def test_canonical_atom():
    u = FormulaUniverse.from_formulas([p])
    cm = bounded_canonical_model(u, CS, 4)
    assert [members_of(th) for th in cm.theories] == [[], ["p"]]
    assert cm.model.worlds == ("Δ0", "Δ1")
    assert ("Δ0", "Δ1") in cm.model.order
    assert ("Δ1", "Δ0") not in cm.model.order


def test_canonical_disjunction_worlds_are_prime():
    u = FormulaUniverse.from_formulas([Or(p, q)])
    cm = bounded_canonical_model(u, CS, 4)
    assert [members_of(th) for th in cm.theories] == [
        [], ["p", "p \\/ q"], ["p \\/ q", "q"], ["p", "p \\/ q", "q"],
    ]
    for th in cm.theories:
        if Or(p, q) in th.members:
            assert p in th.members or q in th.members


def test_canonical_evidence_respects_factivity():
    u = FormulaUniverse.from_formulas([Just(x, p), p])
    cm = bounded_canonical_model(u, CS, 4)
    assert [members_of(th) for th in cm.theories] == [
        [], ["p"], ["p", "x:p"],
    ]
    for th in cm.theories:
        if Just(x, p) in th.members:
            assert p in th.members


def test_canonical_order_is_inclusion():
    u = FormulaUniverse.from_formulas([Implies(p, q)])
    cm = bounded_canonical_model(u, CS, 4)
    names = cm.model.worlds
    for i, a in enumerate(cm.theories):
        for j, b in enumerate(cm.theories):
            included = a.members <= b.members
            assert ((names[i], names[j]) in cm.model.order) == included


def test_canonical_truth_lemma_on_shipped_universes():
    root = resources.files("jlogic") / "universes"
    for path in sorted(root.iterdir(), key=lambda e: e.name):
        if not path.name.endswith(".txt"):
            continue
        spec = parse_universe(path.read_text(), CS)
        cm = bounded_canonical_model(spec.universe, CS, 4)
        assert validate_model(cm.model).ok, path.name
        assert cm.excluded_unknown == ()
        for i, th in enumerate(cm.theories):
            w = cm.model.worlds[i]
            for a in spec.universe:
                assert (a in th.members) == evaluate_truth(cm.model, w, a), (
                    path.name, w, print_formula(a),
                )


def test_canonical_cap():
    u = FormulaUniverse.from_formulas([Or(p, q)])
    with pytest.raises(CapExceeded):
        bounded_canonical_model(u, CS, 4, cap=2)


# --- universe files ---------------------------------------------------------


def test_parse_universe_sections():
    spec = parse_universe("universe: p, q\nbase: p\ngoal: q\n")
    assert spec.base == frozenset({p})
    assert spec.goal == q
    assert {p, q} <= set(spec.universe)


def test_parse_universe_closure_and_continuation():
    spec = parse_universe("universe:\n  x:p\n  p -> q\n")
    assert Just(x, p) in spec.universe
    assert p in spec.universe  # subformula closure


def test_parse_universe_errors():
    with pytest.raises(FileFormatError):
        parse_universe("p, q\n")
    with pytest.raises(FileFormatError):
        parse_universe("universe: p\ngoal: p, q\n")
    with pytest.raises(FileFormatError):
        parse_universe("")
