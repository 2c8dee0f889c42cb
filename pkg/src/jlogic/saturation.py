"""Prime sets at bounded scale: a layered derivability oracle, primeness
checking, disjunction splitting, saturation toward a prime extension, and
assembly of a bounded canonical-model fragment.

A prime set is consistent, deductively closed, and has the disjunction
property.  Everything here is relative to a finite subformula-closed
formula universe with a fixed enumeration, and to a bounded oracle that
answers sequent queries with a checkable proof, a validated countermodel,
or Unknown.  Unknown is never treated as non-derivability: saturation
declines to add such candidates and records the unresolved query.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from jlogic.proof_system import (
    ConstantSpecification,
    Derivable,
    FileFormatError,
    bounded_derive,
    match_axiom,
)
from jlogic.semantics import (
    BasicEvaluation,
    Countermodel,
    evaluate_truth,
    find_countermodel,
)
from jlogic.syntax import (
    And,
    App,
    Atom,
    Bang,
    Constant,
    FALSUM,
    Formula,
    Implies,
    Just,
    Or,
    Sum,
    Term,
    close_subformulas,
    formula_key,
    parse_formula,
    print_formula,
)


class FailedPrecondition(Exception):
    """The saturation base already derives the goal."""


class CapExceeded(Exception):
    """The universe is too large for exhaustive prime-subset enumeration."""


@dataclass(frozen=True)
class FormulaUniverse:
    """Finite subformula-closed set with a fixed total enumeration
    (lexicographic on printed form)."""

    formulas: tuple[Formula, ...]

    @classmethod
    def from_formulas(cls, formulas) -> "FormulaUniverse":
        closed = close_subformulas(formulas)
        return cls(tuple(sorted(closed, key=formula_key)))

    def index(self, a: Formula) -> int:
        return self.formulas.index(a)

    def __contains__(self, a: Formula) -> bool:
        return a in self.formulas

    def __iter__(self):
        return iter(self.formulas)

    def __len__(self) -> int:
        return len(self.formulas)


@dataclass(frozen=True)
class RefutedBySemantics:
    """Countermodel whose world makes every hypothesis of the queried
    sequent true and its goal false."""

    countermodel: Countermodel


@dataclass(frozen=True)
class Unknown:
    reason: str


Certificate = Derivable | RefutedBySemantics | Unknown


class DerivabilityOracle:
    """Layered sequent oracle: a bounded proof search answers Derivable
    with a checkable proof; failing that, a countermodel search on the
    curried implication answers RefutedBySemantics with a validated
    model; failing both, Unknown.  Answers are memoized per sequent."""

    def __init__(
        self,
        cs: ConstantSpecification,
        depth: int,
        max_worlds: int = 3,
        evidence_budget: int = 6,
    ):
        self.cs = cs
        self.depth = depth
        self.max_worlds = max_worlds
        self.evidence_budget = evidence_budget
        self.cache: dict[tuple[frozenset[Formula], Formula], Certificate] = {}

    def query(self, hyps, goal: Formula) -> Certificate:
        hyps = frozenset(hyps)
        key = (hyps, goal)
        if key in self.cache:
            return self.cache[key]
        ordered = tuple(sorted(hyps, key=formula_key))
        result = bounded_derive(ordered, goal, self.cs, self.depth)
        if isinstance(result, Derivable):
            cert: Certificate = result
        else:
            chain = goal
            for h in reversed(ordered):
                chain = Implies(h, chain)
            found = find_countermodel(
                chain, self.max_worlds, self.evidence_budget, self.cs
            )
            if found is None:
                cert = Unknown(
                    f"no proof at depth {self.depth}; no countermodel "
                    f"within {self.max_worlds} worlds"
                )
            else:
                witness = _sequent_world(found.model, ordered, goal)
                cert = RefutedBySemantics(Countermodel(found.model, witness))
        self.cache[key] = cert
        return cert


def _sequent_world(m: BasicEvaluation, hyps, goal: Formula) -> str:
    """First world where every hypothesis holds and the goal fails; one
    exists whenever the curried implication fails somewhere in a valid
    model."""
    for w in m.worlds:
        if all(evaluate_truth(m, w, h) for h in hyps) and not evaluate_truth(
            m, w, goal
        ):
            return w
    raise AssertionError("countermodel does not falsify the sequent")


@dataclass(frozen=True)
class SaturationStep:
    index: int
    candidate: Formula
    added: bool
    certificate: Certificate | None  # None when the candidate was already present


@dataclass
class BoundedTheory:
    """Subset of a formula universe with the oracle evidence gathered
    while building or checking it."""

    universe: FormulaUniverse
    members: frozenset[Formula]
    oracle_bound: int
    certificates: dict[tuple[frozenset[Formula], Formula], Certificate] = field(
        default_factory=dict
    )
    trace: tuple[SaturationStep, ...] = ()


@dataclass(frozen=True)
class PrimeVerdict:
    status: str  # "prime" | "not_prime" | "unknown"
    reason: str = ""

    def __str__(self) -> str:
        return self.status if not self.reason else f"{self.status}: {self.reason}"


def _certificates_unknown(th: BoundedTheory) -> bool:
    return any(isinstance(c, Unknown) for c in th.certificates.values())


def check_prime(
    th: BoundedTheory,
    cs: ConstantSpecification,
    max_worlds: int = 3,
    evidence_budget: int = 6,
) -> PrimeVerdict:
    """Primeness of th.members relative to its universe: consistency,
    the disjunction property, and relative deductive closure via oracle
    queries members |- A for every universe formula A.  The verdict is
    unknown when it rests on an unresolved oracle answer: a closure query
    that came back Unknown, or a missing disjunct whose exclusion during
    saturation was Unknown-based."""
    members = th.members
    if FALSUM in members:
        return PrimeVerdict("not_prime", "contains _|_")
    for a in sorted(members, key=formula_key):
        if isinstance(a, Or) and a.left not in members and a.right not in members:
            if _certificates_unknown(th):
                return PrimeVerdict(
                    "unknown",
                    f"neither disjunct of {print_formula(a)} is present and "
                    "some exclusions were oracle-unresolved",
                )
            return PrimeVerdict(
                "not_prime", f"disjunction property fails for {print_formula(a)}"
            )
    oracle = DerivabilityOracle(cs, th.oracle_bound, max_worlds, evidence_budget)
    unknown_reason = None
    for a in th.universe:
        cert = oracle.query(members, a)
        th.certificates[(members, a)] = cert
        if isinstance(cert, Derivable) and a not in members:
            return PrimeVerdict(
                "not_prime",
                f"derivable {print_formula(a)} is missing (closure fails)",
            )
        if isinstance(cert, Unknown) and a not in members and unknown_reason is None:
            unknown_reason = f"closure status of {print_formula(a)} is unresolved"
    if unknown_reason is not None:
        return PrimeVerdict("unknown", unknown_reason)
    return PrimeVerdict("prime")


def split_disjunction(
    n,
    a: Formula,
    b: Formula,
    goal: Formula,
    cs: ConstantSpecification,
    depth: int = 4,
    max_worlds: int = 3,
    evidence_budget: int = 6,
) -> str:
    """Pick a disjunct that can be added without deriving the goal:
    "left" or "right" with a semantic non-derivability certificate for
    the chosen branch, left preferred; "unknown" when neither branch has
    one."""
    n = frozenset(n)
    oracle = DerivabilityOracle(cs, depth, max_worlds, evidence_budget)
    if isinstance(oracle.query(n | {a}, goal), RefutedBySemantics):
        return "left"
    if isinstance(oracle.query(n | {b}, goal), RefutedBySemantics):
        return "right"
    return "unknown"


def prime_saturate(
    n,
    goal: Formula,
    u: FormulaUniverse,
    cs: ConstantSpecification,
    k: int,
    max_worlds: int = 3,
    evidence_budget: int = 6,
) -> BoundedTheory:
    """Saturate n toward a prime set avoiding the goal, following the
    universe enumeration: each candidate is added exactly when the oracle
    refutes that the extended set derives the goal.  Derivable answers
    reject the candidate; Unknown answers also reject it (conservative)
    and are recorded.  Raises FailedPrecondition if n already derives
    the goal."""
    members = frozenset(n)
    if not members <= frozenset(u.formulas):
        raise ValueError("base is not inside the universe")
    oracle = DerivabilityOracle(cs, k, max_worlds, evidence_budget)
    first = oracle.query(members, goal)
    if isinstance(first, Derivable):
        raise FailedPrecondition(
            f"base already derives {print_formula(goal)}"
        )
    certificates = {(members, goal): first}
    trace: list[SaturationStep] = []
    for i, candidate in enumerate(u.formulas):
        if candidate in members:
            trace.append(SaturationStep(i, candidate, True, None))
            continue
        extended = members | {candidate}
        cert = oracle.query(extended, goal)
        certificates[(extended, goal)] = cert
        if isinstance(cert, RefutedBySemantics):
            members = extended
            trace.append(SaturationStep(i, candidate, True, cert))
        else:
            trace.append(SaturationStep(i, candidate, False, cert))
    return BoundedTheory(u, members, k, certificates, tuple(trace))


def inverse_evidence(th: BoundedTheory, t: Term) -> frozenset[Formula]:
    """{A | t:A in members}: the canonical evidence of t at this set."""
    return frozenset(
        a.body for a in th.members if isinstance(a, Just) and a.term == t
    )


# ---------------------------------------------------------------------------
# Bounded canonical model


@dataclass
class CanonicalModel:
    model: BasicEvaluation
    theories: tuple[BoundedTheory, ...]  # parallel to model.worlds
    verdicts: tuple[PrimeVerdict, ...]
    excluded_unknown: tuple[frozenset[Formula], ...]  # candidate sets, unresolved

    def world_name(self, i: int) -> str:
        return self.model.worlds[i]


def _one_step_closed(
    s: frozenset[Formula], u: FormulaUniverse, cs: ConstantSpecification
) -> bool:
    """Cheap necessary closure conditions: s must already contain every
    universe formula forced by one derivable step from s (axioms,
    specification pairs, modus ponens, weakening, the connective
    introduction/elimination schemas, and the evidence schemas)."""
    inu = frozenset(u.formulas)
    for a in inu:
        if a in s:
            continue
        if match_axiom(a):
            return False
        if (
            isinstance(a, Just)
            and isinstance(a.term, Constant)
            and cs.covers(a.term.name, a.body)
        ):
            return False
        if isinstance(a, And) and a.left in s and a.right in s:
            return False
        if isinstance(a, Or) and (a.left in s or a.right in s):
            return False
        if isinstance(a, Implies) and a.right in s:
            return False
    for a in s:
        if isinstance(a, Implies) and a.left in s and a.right not in s:
            return False
        if isinstance(a, And) and not (a.left in s and a.right in s):
            return False
        if isinstance(a, Just):
            if a.body not in s:
                return False
            jj = Just(Bang(a.term), a)
            if jj in inu and jj not in s:
                return False
        for b in s:
            if (
                isinstance(a, Just)
                and isinstance(b, Just)
                and isinstance(a.body, Implies)
                and a.body.left == b.body
            ):
                out = Just(App(a.term, b.term), a.body.right)
                if out in inu and out not in s:
                    return False
    for a in s:
        if isinstance(a, Just):
            for t2 in {f.term for f in inu if isinstance(f, Just)}:
                if isinstance(t2, Sum) and (t2.left == a.term or t2.right == a.term):
                    widened = Just(t2, a.body)
                    if widened in inu and widened not in s:
                        return False
    return True


def bounded_canonical_model(
    u: FormulaUniverse,
    cs: ConstantSpecification,
    k: int,
    max_worlds: int = 3,
    evidence_budget: int = 6,
    cap: int = 14,
) -> CanonicalModel:
    """Canonical-model fragment over u: worlds are the certified-prime
    subsets of u ordered by inclusion, atoms hold by membership, and the
    evidence of t is {A | t:A in the world}.  Subsets are screened by
    cheap closure conditions first, then certified with check_prime;
    candidates whose verdict is unknown are excluded and reported.
    Worlds are indexed by subset size then enumeration code."""
    if len(u) > cap:
        raise CapExceeded(f"universe has {len(u)} formulas; cap is {cap}")

    candidates = []
    for size in range(len(u) + 1):
        for combo in itertools.combinations(range(len(u)), size):
            s = frozenset(u.formulas[i] for i in combo)
            if FALSUM in s:
                continue
            if any(
                isinstance(a, Or) and a.left not in s and a.right not in s
                for a in s
            ):
                continue
            if _one_step_closed(s, u, cs):
                candidates.append(s)

    worlds: list[BoundedTheory] = []
    verdicts: list[PrimeVerdict] = []
    excluded: list[frozenset[Formula]] = []
    for s in candidates:
        th = BoundedTheory(u, s, k)
        verdict = check_prime(th, cs, max_worlds, evidence_budget)
        if verdict.status == "prime":
            worlds.append(th)
            verdicts.append(verdict)
        elif verdict.status == "unknown":
            excluded.append(s)

    names = tuple(f"Δ{i}" for i in range(len(worlds)))
    order = frozenset(
        (names[i], names[j])
        for i in range(len(worlds))
        for j in range(len(worlds))
        if worlds[i].members <= worlds[j].members
    )
    atoms = {
        names[i]: frozenset(
            a.name for a in worlds[i].members if isinstance(a, Atom)
        )
        for i in range(len(worlds))
    }
    just_terms = {f.term for f in u.formulas if isinstance(f, Just)}
    evidence = {
        names[i]: {
            t: inverse_evidence(worlds[i], t)
            for t in just_terms
            if inverse_evidence(worlds[i], t)
        }
        for i in range(len(worlds))
    }
    model = BasicEvaluation(
        names,
        order,
        atoms,
        base_evidence=evidence,
        formula_universe=u.formulas,
        cs=cs,
    )
    return CanonicalModel(model, tuple(worlds), tuple(verdicts), tuple(excluded))


# ---------------------------------------------------------------------------
# Universe files


@dataclass(frozen=True)
class UniverseSpec:
    universe: FormulaUniverse
    base: frozenset[Formula]
    goal: Formula | None


def parse_universe(
    text: str, cs: ConstantSpecification | None = None
) -> UniverseSpec:
    """Parse a universe file with sections `universe:` (comma-separated
    formulas), optional `base:`, and optional `goal:` (one formula).  The
    universe is closed under subformulas and extended with the base and
    goal formulas."""
    declared = (
        cs.constants() if cs is not None
        else ConstantSpecification.default_schematic().constants()
    )
    seeds: list[Formula] = []
    base: list[Formula] = []
    goal: Formula | None = None
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if sep and head in ("universe", "base", "goal"):
            section = head
            line = rest.strip()
            if not line:
                continue
        elif section is None:
            raise FileFormatError("expected 'universe:', 'base:', or 'goal:'", lineno)
        try:
            formulas = [
                parse_formula(part.strip(), constants=frozenset(declared))
                for part in line.split(",")
                if part.strip()
            ]
        except Exception as e:
            raise FileFormatError(str(e), lineno) from e
        if section == "universe":
            seeds += formulas
        elif section == "base":
            base += formulas
        else:
            if goal is not None or len(formulas) != 1:
                raise FileFormatError("goal: takes exactly one formula", lineno)
            goal = formulas[0]
    if not seeds and not base:
        raise FileFormatError("missing universe section", 1)
    everything = seeds + base + ([goal] if goal is not None else [])
    return UniverseSpec(
        FormulaUniverse.from_formulas(everything), frozenset(base), goal
    )
