"""Finite basic evaluations and basic modular models: evidence closure,
truth evaluation, validation of the closure and monotonicity conditions,
factivity, validity over a model, and exhaustive countermodel search.

A basic evaluation is a finite poset of worlds with a monotone atomic
valuation and per-world evidence sets t*_w over a finite subterm-closed
term universe.  Derived evidence is the least family over the base that
satisfies, at every world w:

    (1)  s*_w . t*_w  is a subset of  (s.t)*_w   where X.Y = {A | some
         B -> A in X with B in Y}
    (2)  s*_w and t*_w  are subsets of  (s+t)*_w
    (3)  (c, A) in CS, A in the formula universe  implies  A in c*_w
    (4)  {s:B | B in s*_w}  is a subset of  (!s)*_w

together with upward monotonicity (M2): w <= v implies t*_w is a subset
of t*_v.  A basic modular model is a basic evaluation that is factive:
every formula in an evidence set is true at that world.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from jlogic.proof_system import ConstantSpecification, FileFormatError
from jlogic.syntax import (
    And,
    Atom,
    Bang,
    Constant,
    Falsum,
    Formula,
    Implies,
    Just,
    Or,
    Sum,
    App,
    Term,
    close_subformulas,
    close_subterms,
    formula_atoms,
    formula_key,
    formula_terms,
    parse_formula,
    parse_term,
    print_formula,
    print_term,
    subformulas,
    subterms,
    term_key,
    term_size,
)


class UniverseNotClosed(Exception):
    """A truth or closure query needs a term or formula outside the
    model's universes."""


def transitive_reflexive_closure(worlds, pairs) -> frozenset[tuple[str, str]]:
    """Close an order relation under reflexivity and transitivity."""
    worlds = tuple(worlds)
    rel = {(w, w) for w in worlds} | set(pairs)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(tuple(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return frozenset(rel)


class BasicEvaluation:
    """Finite basic evaluation over explicit universes.

    The constructor normalizes its inputs: universes are closed under
    subterms/subformulas and extended with every term occurring in the
    base evidence or the formula universe, so that factivity checks can
    always evaluate the evidence formulas.  The order relation is stored
    as given; validate_model checks the partial-order laws.
    """

    def __init__(
        self,
        worlds,
        order,
        atoms,
        base_evidence=None,
        term_universe=(),
        formula_universe=(),
        cs: ConstantSpecification | None = None,
    ):
        self.worlds: tuple[str, ...] = tuple(worlds)
        if not self.worlds:
            raise ValueError("a model needs at least one world")
        if len(set(self.worlds)) != len(self.worlds):
            raise ValueError("duplicate world names")
        known = set(self.worlds)
        self.order: frozenset[tuple[str, str]] = frozenset(
            (str(a), str(b)) for a, b in order
        )
        for a, b in self.order:
            if a not in known or b not in known:
                raise ValueError(f"order pair ({a}, {b}) uses an unknown world")
        self.atoms: dict[str, frozenset[str]] = {
            w: frozenset(atoms.get(w, ())) for w in self.worlds
        }
        for w in atoms or {}:
            if w not in known:
                raise ValueError(f"atom valuation uses an unknown world {w}")

        base: dict[str, dict[Term, frozenset[Formula]]] = {w: {} for w in self.worlds}
        for w, per_term in (base_evidence or {}).items():
            if w not in known:
                raise ValueError(f"evidence uses an unknown world {w}")
            for t, formulas in per_term.items():
                base[w][t] = frozenset(formulas)
        self.base_evidence = base

        fs = set(formula_universe)
        ts = set(term_universe)
        for per_term in base.values():
            for t, formulas in per_term.items():
                ts.add(t)
                for a in formulas:
                    ts |= formula_terms(a)
        for a in fs:
            ts |= formula_terms(a)
        self.formula_universe: frozenset[Formula] = close_subformulas(fs)
        for a in self.formula_universe:
            ts |= formula_terms(a)
        self.term_universe: frozenset[Term] = close_subterms(ts)
        self.cs = cs if cs is not None else ConstantSpecification.default_schematic()

        self._up: dict[str, tuple[str, ...]] | None = None
        self._closure: dict[Term, dict[str, frozenset[Formula]]] | None = None
        self._truth: dict[tuple[str, Formula], bool] = {}

    def up(self, w: str) -> tuple[str, ...]:
        if self._up is None:
            self._up = {
                u: tuple(v for v in self.worlds if (u, v) in self.order)
                for u in self.worlds
            }
        return self._up[w]

    def closure(self) -> dict[Term, dict[str, frozenset[Formula]]]:
        if self._closure is None:
            self._closure = _close(
                self.worlds,
                self.order,
                self.base_evidence,
                self.term_universe,
                self.formula_universe,
                self.cs,
            )
        return self._closure

    def evidence(self, t: Term, w: str) -> frozenset[Formula]:
        """Derived evidence set t*_w."""
        if t not in self.term_universe:
            raise UniverseNotClosed(f"term {t} is outside the term universe")
        return self.closure()[t][w]

    def _fields(self):
        return (
            self.worlds,
            self.order,
            self.atoms,
            self.base_evidence,
            self.term_universe,
            self.formula_universe,
            self.cs,
        )

    def __eq__(self, other):
        return isinstance(other, BasicEvaluation) and self._fields() == other._fields()


@dataclass(frozen=True)
class EvidenceClosure:
    derived: dict

    def evidence(self, t: Term, w: str) -> frozenset[Formula]:
        return self.derived[t][w]


def _close(worlds, order, base_evidence, term_universe, formula_universe, cs):
    """Least evidence family over the base satisfying (1)-(4) and (M2).

    One pass in order of term size: a term's provisional set at each
    world is its base plus the exact condition images from its subterms'
    final sets; its final set at w is the union of provisional sets at
    all worlds below w.  Subterm finals are complete when a composite is
    processed, and the upward union preserves (1)-(4) because the
    subterm finals are themselves upward-monotone.
    """
    for t in term_universe:
        if not subterms(t) <= term_universe:
            raise UniverseNotClosed(f"term universe misses a subterm of {t}")
    if not close_subformulas(formula_universe) <= frozenset(formula_universe):
        raise UniverseNotClosed("formula universe is not subformula-closed")

    below = {w: tuple(u for u in worlds if (u, w) in order) for w in worlds}
    derived: dict[Term, dict[str, frozenset[Formula]]] = {}
    for t in sorted(term_universe, key=lambda t: (term_size(t), term_key(t))):
        provisional: dict[str, set[Formula]] = {}
        for w in worlds:
            s = set(base_evidence.get(w, {}).get(t, ()))
            if isinstance(t, Constant):
                for a in formula_universe:
                    if cs.covers(t.name, a):
                        s.add(a)
            elif isinstance(t, App):
                left = derived[t.left][w]
                right = derived[t.right][w]
                for f in left:
                    if isinstance(f, Implies) and f.left in right:
                        s.add(f.right)
            elif isinstance(t, Sum):
                s |= derived[t.left][w]
                s |= derived[t.right][w]
            elif isinstance(t, Bang):
                s |= {Just(t.inner, b) for b in derived[t.inner][w]}
            provisional[w] = s
        derived[t] = {
            w: frozenset(provisional[w].union(*(provisional[u] for u in below[w])))
            for w in worlds
        }
    return derived


def close_evidence(m: BasicEvaluation) -> EvidenceClosure:
    """Derived evidence sets of m as a standalone mapping."""
    return EvidenceClosure(m.closure())


def _truth(m: BasicEvaluation, w: str, a: Formula) -> bool:
    key = (w, a)
    cached = m._truth.get(key)
    if cached is not None:
        return cached
    if isinstance(a, Atom):
        out = a.name in m.atoms[w]
    elif isinstance(a, Falsum):
        out = False
    elif isinstance(a, And):
        out = _truth(m, w, a.left) and _truth(m, w, a.right)
    elif isinstance(a, Or):
        out = _truth(m, w, a.left) or _truth(m, w, a.right)
    elif isinstance(a, Implies):
        out = all(
            not _truth(m, v, a.left) or _truth(m, v, a.right) for v in m.up(w)
        )
    elif isinstance(a, Just):
        out = a.body in m.evidence(a.term, w)
    else:
        raise TypeError(f"not a formula: {a!r}")
    m._truth[key] = out
    return out


def evaluate_truth(m: BasicEvaluation, w: str, a: Formula) -> bool:
    """Truth at a world: falsum is false, atoms by valuation, conjunction
    and disjunction pointwise, implication over all worlds above w, and
    t:A by membership of A in the derived evidence t*_w."""
    if w not in m.atoms:
        raise ValueError(f"unknown world {w!r}")
    return _truth(m, w, a)


def check_validity(m: BasicEvaluation, a: Formula) -> bool:
    """True iff a holds at every world (assumes validate_model passed)."""
    return all(evaluate_truth(m, w, a) for w in m.worlds)


@dataclass(frozen=True)
class Violation:
    condition: str
    worlds: tuple[str, ...]
    witness: str

    def __str__(self) -> str:
        return f"{self.condition} at {','.join(self.worlds)}: {self.witness}"


@dataclass(frozen=True)
class CheckVerdict:
    ok: bool
    violations: tuple[Violation, ...]

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "invalid:\n" + "\n".join(f"  {v}" for v in self.violations)


def validate_model(m: BasicEvaluation) -> CheckVerdict:
    """Check the partial-order laws, valuation monotonicity (M1), evidence
    monotonicity (M2), closure conditions (1)-(4) on the derived sets,
    and factivity.  Collects every violation rather than stopping at the
    first."""
    out: list[Violation] = []
    rel = m.order
    for w in m.worlds:
        if (w, w) not in rel:
            out.append(Violation("order-reflexivity", (w,), f"{w} <= {w} missing"))
    for (a, b) in sorted(rel):
        for (c, d) in sorted(rel):
            if b == c and (a, d) not in rel:
                out.append(Violation("order-transitivity", (a, b, d),
                                     f"{a} <= {b} <= {d} but not {a} <= {d}"))
        if a != b and (b, a) in rel and a < b:
            out.append(Violation("order-antisymmetry", (a, b),
                                 f"{a} <= {b} and {b} <= {a}"))
    for (w, v) in sorted(rel):
        for p in sorted(m.atoms[w]):
            if p not in m.atoms[v]:
                out.append(Violation("M1", (w, v), f"atom {p} lost going up"))

    derived = m.closure()
    terms = sorted(m.term_universe, key=term_key)
    for (w, v) in sorted(rel):
        for t in terms:
            missing = derived[t][w] - derived[t][v]
            for a in sorted(missing, key=formula_key):
                out.append(Violation("M2", (w, v),
                                     f"{print_term(t)}: {print_formula(a)} lost going up"))
    for w in m.worlds:
        for t in terms:
            if isinstance(t, App):
                left, right = derived[t.left][w], derived[t.right][w]
                for f in sorted(left, key=formula_key):
                    if isinstance(f, Implies) and f.left in right \
                            and f.right not in derived[t][w]:
                        out.append(Violation("condition-1", (w,),
                                             f"{print_formula(f.right)} missing from "
                                             f"{print_term(t)}*"))
            elif isinstance(t, Sum):
                for part in (t.left, t.right):
                    for a in sorted(derived[part][w] - derived[t][w], key=formula_key):
                        out.append(Violation("condition-2", (w,),
                                             f"{print_formula(a)} missing from "
                                             f"{print_term(t)}*"))
            elif isinstance(t, Constant):
                for a in sorted(m.formula_universe, key=formula_key):
                    if m.cs.covers(t.name, a) and a not in derived[t][w]:
                        out.append(Violation("condition-3", (w,),
                                             f"{print_formula(a)} missing from {t.name}*"))
            elif isinstance(t, Bang):
                for b in sorted(derived[t.inner][w], key=formula_key):
                    if Just(t.inner, b) not in derived[t][w]:
                        out.append(Violation("condition-4", (w,),
                                             f"{print_term(t.inner)}:"
                                             f"{print_formula(b)} missing from "
                                             f"{print_term(t)}*"))
    for w in m.worlds:
        for t in terms:
            for a in sorted(derived[t][w], key=formula_key):
                if not evaluate_truth(m, w, a):
                    out.append(Violation("factivity", (w,),
                                         f"{print_formula(a)} in {print_term(t)}* "
                                         f"but false"))
    return CheckVerdict(not out, tuple(out))


# ---------------------------------------------------------------------------
# Countermodel search


@dataclass(frozen=True)
class Countermodel:
    model: BasicEvaluation
    world: str


_POSET_CACHE: dict[int, list[frozenset[tuple[int, int]]]] = {}


def _canonical_posets(n: int) -> list[frozenset[tuple[int, int]]]:
    """All partial orders on n elements up to isomorphism, each in its
    canonical labeling, sorted by canonical relation code."""
    if n in _POSET_CACHE:
        return _POSET_CACHE[n]
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    perms = list(itertools.permutations(range(n)))

    def code(rel: frozenset) -> int:
        out = 0
        for (i, j) in rel:
            out |= 1 << (i * n + j)
        return out

    seen = {}
    for bits in range(1 << len(pairs)):
        rel = {(i, i) for i in range(n)}
        rel |= {pairs[k] for k in range(len(pairs)) if bits >> k & 1}
        if any((b, a) in rel and a != b for (a, b) in rel):
            continue
        if any((a, d) not in rel
               for (a, b) in rel for (c, d) in rel if b == c):
            continue
        best = min(
            code(frozenset((p[i], p[j]) for (i, j) in rel)) for p in perms
        )
        if best not in seen:
            canonical = frozenset(
                (i, j) for i in range(n) for j in range(n)
                if best >> (i * n + j) & 1
            )
            seen[best] = canonical
    out = [seen[c] for c in sorted(seen)]
    _POSET_CACHE[n] = out
    return out


def _upsets(n: int, rel: frozenset[tuple[int, int]]) -> list[frozenset[int]]:
    out = []
    for mask in range(1 << n):
        s = {i for i in range(n) if mask >> i & 1}
        if all(j in s for i in s for (i2, j) in rel if i2 == i):
            out.append(frozenset(s))
    return out


def _minima(s: frozenset[int], rel) -> list[int]:
    return sorted(i for i in s if not any((j, i) in rel and j != i for j in s))


def find_countermodel(
    a: Formula,
    max_worlds: int,
    evidence_budget: int = 6,
    cs: ConstantSpecification | None = None,
) -> Countermodel | None:
    """Search for a basic modular model falsifying a at some world.

    Deterministic exhaustive enumeration: posets by world count then
    canonical code; atom valuations over upsets, lexicographically in
    atom order; evidence seed assignments innermost.  Seeds range over
    the Just-subformulas of a, each placed at the minimal worlds of an
    upset, with the total seed count capped by evidence_budget.  A found
    model is validated before it is returned, so a result certifies that
    a is not a theorem; None means no countermodel exists in the searched
    space, not that a is valid.
    """
    if max_worlds < 1:
        raise ValueError("need at least one world")
    cs = cs if cs is not None else ConstantSpecification.default_schematic()
    atom_names = sorted(formula_atoms(a))
    pool = sorted(
        ((f.term, f.body) for f in subformulas(a) if isinstance(f, Just)),
        key=lambda tb: (term_key(tb[0]), formula_key(tb[1])),
    )
    f_universe = subformulas(a)
    t_universe = close_subterms(formula_terms(a))

    for n in range(1, max_worlds + 1):
        names = tuple(f"w{i}" for i in range(n))
        for rel in _canonical_posets(n):
            order = frozenset((names[i], names[j]) for (i, j) in rel)
            ups = _upsets(n, rel)
            assignments = []
            for combo in itertools.product(ups, repeat=len(pool)):
                seeds = sum(len(_minima(s, rel)) for s in combo)
                if seeds <= evidence_budget:
                    assignments.append(combo)

            closures = {}
            for combo in assignments:
                base: dict[str, dict[Term, set[Formula]]] = {w: {} for w in names}
                for (t, b), s in zip(pool, combo):
                    for i in _minima(s, rel):
                        base[names[i]].setdefault(t, set()).add(b)
                closures[combo] = (base, _close(
                    names, order, base, t_universe, f_universe, cs,
                ))

            for valuation in itertools.product(ups, repeat=len(atom_names)):
                atoms = {
                    names[i]: frozenset(
                        p for p, s in zip(atom_names, valuation) if i in s
                    )
                    for i in range(n)
                }
                for combo in assignments:
                    base, derived = closures[combo]
                    found = _quick_false_world(
                        names, order, atoms, derived, a
                    )
                    if found is None:
                        continue
                    m = BasicEvaluation(
                        names,
                        order,
                        atoms,
                        base_evidence=base,
                        term_universe=t_universe,
                        formula_universe=f_universe,
                        cs=cs,
                    )
                    if not validate_model(m).ok:
                        continue
                    if not evaluate_truth(m, found, a):
                        return Countermodel(m, found)
    return None


def _quick_false_world(names, order, atoms, derived, goal) -> str | None:
    up = {w: tuple(v for v in names if (w, v) in order) for w in names}
    cache: dict = {}

    def ev(w: str, f: Formula) -> bool:
        key = (w, f)
        if key in cache:
            return cache[key]
        if isinstance(f, Atom):
            out = f.name in atoms[w]
        elif isinstance(f, Falsum):
            out = False
        elif isinstance(f, And):
            out = ev(w, f.left) and ev(w, f.right)
        elif isinstance(f, Or):
            out = ev(w, f.left) or ev(w, f.right)
        elif isinstance(f, Implies):
            out = all(not ev(v, f.left) or ev(v, f.right) for v in up[w])
        else:
            out = f.body in derived[f.term][w]
        cache[key] = out
        return out

    for w in names:
        if not ev(w, goal):
            return w
    return None


# ---------------------------------------------------------------------------
# Model files


def print_model(m: BasicEvaluation) -> str:
    """Render a model in the section format accepted by parse_model.
    Evidence lines show the base seeds, not the derived closure."""
    lines = ["worlds: " + " ".join(m.worlds)]
    strict = sorted((a, b) for (a, b) in m.order if a != b)
    if strict:
        lines.append("order:")
        for a, b in strict:
            lines.append(f"  {a} <= {b}")
    if any(m.atoms[w] for w in m.worlds):
        lines.append("atoms:")
        for w in m.worlds:
            if m.atoms[w]:
                lines.append(f"  {w}: " + " ".join(sorted(m.atoms[w])))
    ev_lines = []
    for w in m.worlds:
        for t in sorted(m.base_evidence[w], key=term_key):
            formulas = m.base_evidence[w][t]
            if formulas:
                ev_lines.append(
                    f"  {w} | {print_term(t)} | "
                    + ", ".join(sorted(print_formula(a) for a in formulas))
                )
    if ev_lines:
        lines.append("evidence:")
        lines.extend(ev_lines)
    extra_t = sorted(m.term_universe, key=term_key)
    if extra_t:
        lines.append("terms: " + ", ".join(print_term(t) for t in extra_t))
    extra_f = sorted(m.formula_universe, key=formula_key)
    if extra_f:
        lines.append("formulas: " + ", ".join(print_formula(a) for a in extra_f))
    return "\n".join(lines) + "\n"


def parse_model(
    text: str,
    cs: ConstantSpecification | None = None,
) -> BasicEvaluation:
    """Parse the sectioned model format:

        worlds: w0 w1
        order:
          w0 <= w1
        atoms:
          w1: p q
        evidence:
          w0 | x | p, p -> q
        terms: x, y            (optional extra universe terms)
        formulas: x:p          (optional extra universe formulas)

    The order is closed under reflexivity and transitivity on load.  The
    constant specification defaults to the schematic one; pass cs to
    override.
    """
    worlds: tuple[str, ...] | None = None
    pairs: list[tuple[str, str]] = []
    atoms: dict[str, set[str]] = {}
    evidence: dict[str, dict[Term, set[Formula]]] = {}
    terms: list[Term] = []
    formulas: list[Formula] = []
    the_cs = cs if cs is not None else ConstantSpecification.default_schematic()
    declared = the_cs.constants()
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        if head in ("worlds", "order", "atoms", "evidence", "terms", "formulas") \
                and (line.startswith(head + ":")):
            section = head
            rest = rest.strip()
            if not rest:
                continue
            line = rest
            if section in ("order", "atoms", "evidence"):
                raise FileFormatError(f"section {head}: takes indented lines", lineno)
        elif section is None:
            raise FileFormatError("expected a section header", lineno)

        if section == "worlds":
            if worlds is not None:
                raise FileFormatError("duplicate worlds section", lineno)
            worlds = tuple(line.split())
            if not worlds:
                raise FileFormatError("empty worlds list", lineno)
            continue
        if worlds is None:
            raise FileFormatError("worlds: must come first", lineno)
        if section == "order":
            parts = line.split("<=")
            if len(parts) != 2:
                raise FileFormatError("expected 'w <= v'", lineno)
            a, b = parts[0].strip(), parts[1].strip()
            if a not in worlds or b not in worlds:
                raise FileFormatError(f"unknown world in '{line}'", lineno)
            pairs.append((a, b))
        elif section == "atoms":
            w, _, names = line.partition(":")
            w = w.strip()
            if w not in worlds:
                raise FileFormatError(f"unknown world {w!r}", lineno)
            atoms.setdefault(w, set()).update(names.split())
        elif section == "evidence":
            parts = [p.strip() for p in line.split("|")]
            if len(parts) != 3:
                raise FileFormatError("expected 'w | term | formulas'", lineno)
            w, ttext, ftext = parts
            if w not in worlds:
                raise FileFormatError(f"unknown world {w!r}", lineno)
            try:
                t = parse_term(ttext, constants=declared)
                fs = [
                    parse_formula(s.strip(), constants=declared)
                    for s in ftext.split(",") if s.strip()
                ]
            except Exception as e:
                raise FileFormatError(str(e), lineno) from e
            evidence.setdefault(w, {}).setdefault(t, set()).update(fs)
        elif section == "terms":
            try:
                terms += [
                    parse_term(s.strip(), constants=declared)
                    for s in line.split(",") if s.strip()
                ]
            except Exception as e:
                raise FileFormatError(str(e), lineno) from e
        elif section == "formulas":
            try:
                formulas += [
                    parse_formula(s.strip(), constants=declared)
                    for s in line.split(",") if s.strip()
                ]
            except Exception as e:
                raise FileFormatError(str(e), lineno) from e
    if worlds is None:
        raise FileFormatError("missing worlds section", 1)
    order = transitive_reflexive_closure(worlds, pairs)
    return BasicEvaluation(
        worlds,
        order,
        atoms,
        base_evidence=evidence,
        term_universe=terms,
        formula_universe=formulas,
        cs=the_cs,
    )
