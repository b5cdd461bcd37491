"""Rewriting in the free algebra: orientation, normal forms, completion.

Relations are oriented under a degree-lexicographic term order and completed
by resolving overlaps between left-hand sides (the diamond lemma).  Because
coefficients are Laurent polynomials in the formal symbols q and mu, a
relation can only be solved for its leading word when that word's coefficient
is a unit (a single monomial), or when nothing else remains: a non-monomial
coefficient is nonzero for generic parameter values, so ``c * w = 0`` gives
``w -> 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import Generator, NCPolynomial, Word, word_str

__all__ = [
    "TermOrder",
    "RewriteRule",
    "RuleSystem",
    "TraceStep",
    "DerivationTrace",
    "Budgets",
    "EquivalenceReport",
    "RewritingError",
    "ZeroRelation",
    "NonOrientable",
    "StepBudgetExceeded",
    "CompletionBudgetExceeded",
    "NotCompleted",
    "orient",
    "normal_form",
    "complete",
    "critical_pairs",
    "is_confluent",
    "derives",
    "equivalence_report",
    "equivalent_presentations",
    "count_normal_words",
    "normal_words",
    "star_closure",
]


class RewritingError(Exception):
    pass


class ZeroRelation(RewritingError, ValueError):
    pass


class NonOrientable(RewritingError, ValueError):
    pass


class StepBudgetExceeded(RewritingError):
    pass


class CompletionBudgetExceeded(RewritingError):
    def __init__(self, message: str, partial: "RuleSystem"):
        super().__init__(message)
        self.partial = partial


class NotCompleted(RewritingError):
    pass


@dataclass(frozen=True)
class Budgets:
    max_new_rules: int = 256
    step_budget: int = 100_000

    def __post_init__(self):
        if self.max_new_rules < 1 or self.step_budget < 1:
            raise ValueError("budgets must be positive")


DEFAULT_BUDGETS = Budgets()


class TermOrder:
    """Degree first, then lexicographic by the given generator precedence."""

    def __init__(self, precedence: Iterable[Generator]):
        self.precedence = tuple(precedence)
        if len(set(self.precedence)) != len(self.precedence):
            raise ValueError("precedence lists a generator twice")
        self._rank = {g: i for i, g in enumerate(self.precedence)}

    @classmethod
    def natural(cls, generators: Iterable[Generator]) -> "TermOrder":
        return cls(sorted(set(generators)))

    def key(self, w: Word):
        try:
            return (len(w), tuple(self._rank[g] for g in w))
        except KeyError as exc:
            raise ValueError(f"generator {exc.args[0]} is not in the term order") from None

    def leading_word(self, p: NCPolynomial) -> Word:
        return max(p.words(), key=self.key)

    def __eq__(self, other):
        return isinstance(other, TermOrder) and self.precedence == other.precedence

    def __hash__(self):
        return hash(self.precedence)

    def __repr__(self):
        return "TermOrder(" + " < ".join(g.name for g in self.precedence) + ")"


@dataclass(frozen=True)
class RewriteRule:
    id: int
    lhs: Word
    rhs: NCPolynomial

    def as_relation(self) -> NCPolynomial:
        return NCPolynomial.monomial(self.lhs) - self.rhs

    def __str__(self) -> str:
        return f"{word_str(self.lhs)} -> {self.rhs}"


@dataclass(frozen=True)
class RuleSystem:
    rules: tuple[RewriteRule, ...]
    order: TermOrder
    completed: bool = False
    rules_created: int = 0
    steps_used: int = 0

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(sorted(self.rules, key=lambda r: r.id)))

    @property
    def generators(self) -> tuple[Generator, ...]:
        return self.order.precedence

    def rule(self, rule_id: int) -> RewriteRule:
        for r in self.rules:
            if r.id == rule_id:
                return r
        raise KeyError(rule_id)

    @property
    def is_trivial(self) -> bool:
        """True when the unit reduces to zero (the presented algebra is 0)."""
        return any(not r.lhs for r in self.rules)

    def __str__(self) -> str:
        return "\n".join(f"[{r.id}] {r}" for r in self.rules)


@dataclass(frozen=True)
class TraceStep:
    rule_id: int
    position: int
    word: Word
    replacement: NCPolynomial  # prefix * rhs * suffix

    def format(self, k: int) -> str:
        return (
            f"step {k}: rule {self.rule_id} at position {self.position}: "
            f"{word_str(self.word)} => {self.replacement}"
        )


@dataclass(frozen=True)
class DerivationTrace:
    start: NCPolynomial
    steps: tuple[TraceStep, ...]
    end: NCPolynomial

    def replay(self, rules: RuleSystem | None = None) -> NCPolynomial:
        """Re-apply every step to ``start``.

        With ``rules`` given, each step is also checked against the rule it
        names.
        """
        current = self.start
        for step in self.steps:
            if rules is not None:
                rule = rules.rule(step.rule_id)
                w = step.word
                p = step.position
                if w[p : p + len(rule.lhs)] != rule.lhs:
                    raise ValueError(f"rule {rule.id} does not match {word_str(w)} at {p}")
                expect = NCPolynomial.monomial(w[:p]) * rule.rhs * NCPolynomial.monomial(
                    w[p + len(rule.lhs) :]
                )
                if expect != step.replacement:
                    raise ValueError(f"step replacement disagrees with rule {rule.id}")
            coeff = current.coefficient(step.word)
            if not coeff:
                raise ValueError(f"word {word_str(step.word)} absent during replay")
            current = current - coeff * NCPolynomial.monomial(step.word) + coeff * step.replacement
        return current

    def lines(self) -> list[str]:
        out = [f"start: {self.start}"]
        out += [s.format(k) for k, s in enumerate(self.steps, 1)]
        out.append(f"end: {self.end}")
        return out

    def __len__(self) -> int:
        return len(self.steps)


# ---------------------------------------------------------------------------
# orientation


def _rule_from_relation(p: NCPolynomial, order: TermOrder, rule_id: int) -> RewriteRule:
    if not p:
        raise ZeroRelation("cannot orient the zero relation")
    lead = order.leading_word(p)
    lead_coeff = p.coefficient(lead)
    rest = p - lead_coeff * NCPolynomial.monomial(lead)
    unit = lead_coeff.scalar_monomial()
    if unit is not None:
        rhs = -(rest * unit.inverse())
    elif not rest:
        rhs = NCPolynomial.zero()
    else:
        raise NonOrientable(
            f"leading word {word_str(lead)} of {p} has non-invertible coefficient {lead_coeff}"
        )
    return RewriteRule(rule_id, lead, rhs)


def orient(relations: Sequence[NCPolynomial], order: TermOrder) -> RuleSystem:
    """Turn each relation into ``leading word -> rest / leading coefficient``."""
    rules = tuple(_rule_from_relation(p, order, k) for k, p in enumerate(relations))
    return RuleSystem(rules, order, completed=False, rules_created=len(rules))


def star_closure(relations: Iterable[NCPolynomial]) -> list[NCPolynomial]:
    """Relations together with their star images, monic and deduplicated."""
    out: list[NCPolynomial] = []
    seen = set()
    for p in relations:
        for cand in (p, p.star()):
            key = cand.monic()
            if cand and key not in seen:
                seen.add(key)
                out.append(cand)
    return out


# ---------------------------------------------------------------------------
# reduction


class _Reducer:
    """Leftmost-occurrence, lowest-id reducer over a fixed rule list."""

    def __init__(self, rules: Iterable[RewriteRule], order: TermOrder):
        self.order = order
        self.by_lhs: dict[Word, RewriteRule] = {}
        for r in sorted(rules, key=lambda r: r.id):
            self.by_lhs.setdefault(r.lhs, r)
        self.lengths = sorted({len(lhs) for lhs in self.by_lhs})

    def redex(self, w: Word) -> tuple[int, RewriteRule] | None:
        for pos in range(len(w) + 1):
            best = None
            for L in self.lengths:
                if pos + L > len(w):
                    break
                r = self.by_lhs.get(w[pos : pos + L])
                if r is not None and (best is None or r.id < best.id):
                    best = r
            if best is not None:
                return pos, best
        return None

    def reduce(self, p: NCPolynomial, budget: int, trace: bool = True):
        current = p
        steps: list[TraceStep] = []
        n = 0
        while True:
            hit = None
            for w in sorted(current.words(), key=self.order.key, reverse=True):
                found = self.redex(w)
                if found is not None:
                    hit = (w, *found)
                    break
            if hit is None:
                break
            if n >= budget:
                raise StepBudgetExceeded(f"normal form needs more than {budget} steps")
            w, pos, rule = hit
            replacement = (
                NCPolynomial.monomial(w[:pos]) * rule.rhs * NCPolynomial.monomial(w[pos + len(rule.lhs) :])
            )
            coeff = current.coefficient(w)
            current = current - coeff * NCPolynomial.monomial(w) + coeff * replacement
            n += 1
            if trace:
                steps.append(TraceStep(rule.id, pos, w, replacement))
        return current, steps, n


def normal_form(
    p: NCPolynomial, rs: RuleSystem, step_budget: int = DEFAULT_BUDGETS.step_budget
) -> tuple[NCPolynomial, DerivationTrace]:
    """Reduce ``p`` until no rule applies; returns the result and its trace."""
    reducer = _Reducer(rs.rules, rs.order)
    end, steps, _ = reducer.reduce(p, step_budget)
    return end, DerivationTrace(p, tuple(steps), end)


# ---------------------------------------------------------------------------
# completion


def _overlaps(a: Word, b: Word) -> list[int]:
    """Lengths k of proper overlaps: suffix of ``a`` == prefix of ``b``."""
    return [k for k in range(1, min(len(a), len(b))) if a[-k:] == b[:k]]


def critical_pairs(r1: RewriteRule, r2: RewriteRule) -> list[tuple[Word, NCPolynomial]]:
    """Ambiguous words from r1 overlapping r2, with the difference of both reductions."""
    out = []
    for k in _overlaps(r1.lhs, r2.lhs):
        w = r1.lhs + r2.lhs[k:]
        left = r1.rhs * NCPolynomial.monomial(r2.lhs[k:])
        right = NCPolynomial.monomial(r1.lhs[:-k]) * r2.rhs
        out.append((w, left - right))
    return out


def _contains(w: Word, sub: Word) -> bool:
    L = len(sub)
    return any(w[i : i + L] == sub for i in range(len(w) - L + 1))


def complete(
    rs: RuleSystem,
    max_new_rules: int = DEFAULT_BUDGETS.max_new_rules,
    step_budget: int = DEFAULT_BUDGETS.step_budget,
) -> RuleSystem:
    """Resolve all overlap ambiguities, adding rules until the system is confluent.

    ``step_budget`` bounds the total number of reduction steps spent.  On
    exhaustion of either budget, :class:`CompletionBudgetExceeded` carries the
    partial (uncompleted) system.
    """
    order = rs.order
    n_initial = len(rs.rules)
    rules: dict[int, RewriteRule] = {}
    next_id = 0
    steps = 0
    created = 0
    pending: list[NCPolynomial] = [r.as_relation() for r in rs.rules]
    pairs: list[tuple[int, int]] = []

    def partial(msg):
        sys_ = RuleSystem(tuple(rules.values()), order, False, created, steps)
        return CompletionBudgetExceeded(msg, sys_)

    def reduce(p):
        nonlocal steps
        try:
            out, _, n = _Reducer(rules.values(), order).reduce(p, step_budget - steps, trace=False)
        except StepBudgetExceeded:
            raise partial(f"completion exceeded {step_budget} reduction steps") from None
        steps += n
        return out

    while pending or pairs:
        while pending:
            p = reduce(pending.pop(0))
            if not p:
                continue
            new = _rule_from_relation(p, order, next_id)
            next_id += 1
            created += 1
            if created - n_initial > max_new_rules:
                raise partial(f"completion needed more than {max_new_rules} new rules")
            # rules whose lhs the new rule can rewrite go back to the queue
            for rid in [rid for rid, r in rules.items() if _contains(r.lhs, new.lhs)]:
                pending.append(rules.pop(rid).as_relation())
            rules[new.id] = new
            for rid in list(rules):
                r = rules[rid]
                if rid != new.id and r.rhs:
                    rhs = reduce(r.rhs)
                    if rhs != r.rhs:
                        rules[rid] = RewriteRule(rid, r.lhs, rhs)
            for rid in rules:
                pairs.append((new.id, rid))
                if rid != new.id:
                    pairs.append((rid, new.id))
        if pairs:
            i, j = pairs.pop(0)
            if i not in rules or j not in rules:
                continue
            for _, s in critical_pairs(rules[i], rules[j]):
                pending.append(s)

    return RuleSystem(tuple(rules.values()), order, True, created, steps)


def is_confluent(rs: RuleSystem, step_budget: int = DEFAULT_BUDGETS.step_budget) -> bool:
    """Check every critical pair reduces to zero and no lhs contains another."""
    reducer = _Reducer(rs.rules, rs.order)
    for r1, r2 in itertools.product(rs.rules, repeat=2):
        if r1.id != r2.id and _contains(r1.lhs, r2.lhs):
            return False
        for _, s in critical_pairs(r1, r2):
            if reducer.reduce(s, step_budget, trace=False)[0]:
                return False
    return True


# ---------------------------------------------------------------------------
# derivability


def _prepare(
    relations: Sequence[NCPolynomial],
    order: TermOrder | None,
    star_close: bool,
    extra: Iterable[NCPolynomial] = (),
) -> tuple[list[NCPolynomial], TermOrder]:
    rels = star_closure(relations) if star_close else [p for p in relations if p]
    if order is None:
        gens = set()
        for p in itertools.chain(rels, extra):
            gens |= p.generators()
        order = TermOrder.natural(gens)
    return rels, order


def _completed(rels, order, budgets: Budgets) -> RuleSystem:
    return complete(orient(rels, order), budgets.max_new_rules, budgets.step_budget)


def derives(
    source: Sequence[NCPolynomial],
    target: NCPolynomial,
    order: TermOrder | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
    *,
    star_close: bool = False,
) -> tuple[bool, DerivationTrace]:
    """Is ``target`` in the two-sided ideal generated by ``source``?"""
    rels, order = _prepare(source, order, star_close, [target])
    rs = _completed(rels, order, budgets)
    nf, trace = normal_form(target, rs, budgets.step_budget)
    return not nf, trace


@dataclass
class EquivalenceReport:
    """Outcome of comparing two relation sets in both directions.

    ``a_from_b`` pairs each relation of A with its normal form modulo B
    (zero means derivable); likewise ``b_from_a``.
    """

    a_from_b: list[tuple[NCPolynomial, NCPolynomial]]
    b_from_a: list[tuple[NCPolynomial, NCPolynomial]]
    system_a: RuleSystem
    system_b: RuleSystem
    traces_a_from_b: list[DerivationTrace] = field(default_factory=list)
    traces_b_from_a: list[DerivationTrace] = field(default_factory=list)

    @property
    def a_in_b(self) -> bool:
        return all(not nf for _, nf in self.a_from_b)

    @property
    def b_in_a(self) -> bool:
        return all(not nf for _, nf in self.b_from_a)

    @property
    def equivalent(self) -> bool:
        return self.a_in_b and self.b_in_a

    def residuals(self) -> list[tuple[str, NCPolynomial, NCPolynomial]]:
        """Relations that fail to derive, tagged with their direction."""
        out = [("A from B", r, nf) for r, nf in self.a_from_b if nf]
        out += [("B from A", r, nf) for r, nf in self.b_from_a if nf]
        return out

    def to_dict(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "a_from_b": self.a_in_b,
            "b_from_a": self.b_in_a,
            "residuals": [
                {"direction": d, "relation": str(r), "normal_form": str(nf)}
                for d, r, nf in self.residuals()
            ],
            "rules_a": len(self.system_a.rules),
            "rules_b": len(self.system_b.rules),
            "trivial_a": self.system_a.is_trivial,
            "trivial_b": self.system_b.is_trivial,
        }


def equivalence_report(
    a: Sequence[NCPolynomial],
    b: Sequence[NCPolynomial],
    order: TermOrder | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
    *,
    star_close: bool = False,
) -> EquivalenceReport:
    rels_a, order = _prepare(a, order, star_close, b)
    rels_b, _ = _prepare(b, order, star_close)
    sys_a = _completed(rels_a, order, budgets)
    sys_b = _completed(rels_b, order, budgets)
    a_from_b, b_from_a, ta, tb = [], [], [], []
    for rel in a:
        nf, tr = normal_form(rel, sys_b, budgets.step_budget)
        a_from_b.append((rel, nf))
        ta.append(tr)
    for rel in b:
        nf, tr = normal_form(rel, sys_a, budgets.step_budget)
        b_from_a.append((rel, nf))
        tb.append(tr)
    return EquivalenceReport(a_from_b, b_from_a, sys_a, sys_b, ta, tb)


def equivalent_presentations(
    a: Sequence[NCPolynomial],
    b: Sequence[NCPolynomial],
    order: TermOrder | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
    *,
    star_close: bool = False,
) -> bool:
    """True iff each relation set lies in the ideal generated by the other."""
    return equivalence_report(a, b, order, budgets, star_close=star_close).equivalent


# ---------------------------------------------------------------------------
# normal words


def normal_words(rs: RuleSystem, degree: int) -> list[Word]:
    """All words of the given degree containing no rule lhs, in term order."""
    if not rs.completed:
        raise NotCompleted("normal words are a basis only for a completed system")
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    lhss = {r.lhs for r in rs.rules}
    if () in lhss:
        return []
    max_len = max((len(l) for l in lhss), default=0)
    out: list[Word] = []

    def extend(w: Word):
        if len(w) == degree:
            out.append(w)
            return
        for g in rs.generators:
            nw = w + (g,)
            # only suffixes can newly match
            if any(nw[-L:] in lhss for L in range(1, min(max_len, len(nw)) + 1)):
                continue
            extend(nw)

    extend(())
    return sorted(out, key=rs.order.key)


def count_normal_words(rs: RuleSystem, degree: int) -> int:
    return len(normal_words(rs, degree))
