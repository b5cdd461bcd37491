"""Named relation systems for the noncommutative torus and the Sklyanin algebra.

All systems are written in the torus generators u, u*, v, v* with q standing
for exp(2*pi*i*theta) and mu formal.  The x-generators x1..x4 enter only
through :data:`GENERATOR_MAP` (x1 -> u, x2 -> u*, x3 -> v, x4 -> v*).
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

from .algebra import (
    TORUS_GENERATORS,
    Coefficient,
    Generator,
    NCPolynomial,
    U,
    U_STAR,
    V,
    V_STAR,
    gen,
    parse_polynomial,
    substitute,
    x,
)
from .rewriting import (
    DEFAULT_BUDGETS,
    Budgets,
    DerivationTrace,
    EquivalenceReport,
    RuleSystem,
    TermOrder,
    complete,
    derives,
    equivalence_report,
    orient,
    star_closure,
)

__all__ = [
    "Presentation",
    "QMatrix",
    "NormalFormParams",
    "GeneratorMismatch",
    "ZeroQEntry",
    "ZeroArgument",
    "GENERATOR_MAP",
    "DEFAULT_ORDER",
    "torus_relations",
    "torus_expanded",
    "sklyanin_normal_form",
    "normal_form_qmatrix",
    "feigin_odesskii_form",
    "involution_constraints",
    "normal_form_parameters",
    "ideal_I_mu",
    "ideal_I_mu_x",
    "quotient",
    "q4_mod_imu",
    "eq13_relations",
    "eq14_relations",
    "rule_system",
    "compare",
    "theorem1_check",
    "IsomorphismReport",
    "REGISTRY",
    "named",
]

INVOLUTION_TOL = 1e-10


class GeneratorMismatch(ValueError):
    pass


class ZeroQEntry(ValueError):
    pass


class ZeroArgument(ValueError):
    pass


DEFAULT_ORDER = TermOrder(TORUS_GENERATORS)  # u < u* < v < v*

GENERATOR_MAP = {
    x(1): NCPolynomial.generator(U),
    x(2): NCPolynomial.generator(U_STAR),
    x(3): NCPolynomial.generator(V),
    x(4): NCPolynomial.generator(V_STAR),
}


@dataclass(frozen=True)
class Presentation:
    """A named relation set.

    ``star_closed`` declares a *-presentation: star images of the relations
    are implied and get added before rewriting.
    """

    name: str
    generators: tuple[Generator, ...]
    relations: tuple[NCPolynomial, ...]
    star_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        rels = tuple(self.relations)
        allowed = set(self.generators)
        for p in rels:
            if not p:
                raise ValueError(f"{self.name}: zero relation")
            extra = p.generators() - allowed
            if extra:
                names = ", ".join(sorted(g.name for g in extra))
                raise GeneratorMismatch(f"{self.name}: undeclared generators {names}")
        object.__setattr__(self, "relations", rels)

    def __len__(self):
        return len(self.relations)

    def rewriting_relations(self) -> list[NCPolynomial]:
        return star_closure(self.relations) if self.star_closed else list(self.relations)

    def map_relations(self, fn, name: str | None = None) -> "Presentation":
        rels = []
        for p in self.relations:
            p = fn(p)
            if p and p not in rels:
                rels.append(p)
        return replace(self, name=name or self.name, relations=tuple(rels))

    def specialize_mu(self) -> "Presentation":
        """mu = 1."""
        return self.map_relations(lambda p: p.specialize(mu_one=True), f"{self.name}|mu=1")

    def specialize_q(self) -> "Presentation":
        """q = 1 (theta = 0)."""
        return self.map_relations(lambda p: p.specialize(q_one=True), f"{self.name}|q=1")

    def rescale_unit(self, mu_power: int = -1) -> "Presentation":
        """Apply the scaled-unit substitution e -> mu**mu_power * e."""
        return self.map_relations(lambda p: p.rescale_unit(mu_power), f"{self.name}|e'")

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "generators": [g.name for g in self.generators],
            "relations": [str(p) for p in self.relations],
            "star_closed": self.star_closed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Presentation":
        return cls(
            name=d["name"],
            generators=tuple(gen(g) for g in d["generators"]),
            relations=tuple(parse_polynomial(r) for r in d["relations"]),
            star_closed=bool(d.get("star_closed", True)),
        )

    @classmethod
    def from_json(cls, text: str) -> "Presentation":
        return cls.from_dict(json.loads(text))

    def __str__(self) -> str:
        lines = [f"{self.name} ({', '.join(g.name for g in self.generators)}):"]
        lines += [f"  {p} = 0" for p in self.relations]
        return "\n".join(lines)


def _torus(name: str, texts: Sequence[str], star_closed: bool = True) -> Presentation:
    return Presentation(name, TORUS_GENERATORS, tuple(parse_polynomial(t) for t in texts), star_closed)


def torus_relations() -> Presentation:
    """Defining relations of the torus: vu = q uv, u and v unitary."""
    return _torus(
        "eq6",
        ["v u - q u v", "u u* - e", "u* u - e", "v v* - e", "v* v - e"],
    )


def torus_expanded() -> Presentation:
    """The six-line form: four skew commutation relations plus unitarity."""
    return _torus(
        "eq8",
        [
            "v u - q u v",
            "u v* - q v* u",
            "u* v - q v u*",
            "v* u* - q u* v*",
            "u u* - e",
            "u* u - e",
            "v v* - e",
            "v* v - e",
        ],
    )


def sklyanin_normal_form() -> Presentation:
    """Six skew-symmetric quadratic relations with formal theta and mu."""
    return _torus(
        "eq9",
        [
            "v u - mu q u v",
            "u v* - mu^-1 q v* u",
            "u* v - mu q v u*",
            "v* u* - mu^-1 q u* v*",
            "u u* - u* u",
            "v v* - v* v",
        ],
    )


def _as_coefficient(c) -> Coefficient:
    return c if isinstance(c, Coefficient) else Coefficient(c)


@dataclass(frozen=True)
class QMatrix:
    q12: Coefficient
    q13: Coefficient
    q14: Coefficient
    q23: Coefficient
    q24: Coefficient
    q34: Coefficient

    def __post_init__(self):
        for name in self.names():
            object.__setattr__(self, name, _as_coefficient(getattr(self, name)))

    @staticmethod
    def names() -> tuple[str, ...]:
        return ("q12", "q13", "q14", "q23", "q24", "q34")

    def replace(self, **kw) -> "QMatrix":
        return replace(self, **kw)


def normal_form_qmatrix() -> QMatrix:
    """The one-parameter family: q13 = mu*q, conj(q14) = q13, q12 = q34 = 1."""
    q13 = Coefficient(1, 1, 1)
    q14 = q13.conj()
    return QMatrix(
        q12=Coefficient(1),
        q13=q13,
        q14=q14,
        q23=q14.conj().inverse(),
        q24=q13.conj().inverse(),
        q34=Coefficient(1),
    )


def feigin_odesskii_form(qm: QMatrix, name: str = "eq10") -> Presentation:
    for k in QMatrix.names():
        if getattr(qm, k).value == 0:
            raise ZeroQEntry(f"{k} must be nonzero")
    m = NCPolynomial.monomial
    u, us, v, vs = TORUS_GENERATORS
    rels = [
        m((v, u)) - m((u, v), qm.q13),
        m((vs, us)) - m((us, vs), qm.q24),
        m((vs, u)) - m((u, vs), qm.q14),
        m((v, us)) - m((us, v), qm.q23),
        m((us, u)) - m((u, us), qm.q12),
        m((vs, v)) - m((v, vs), qm.q34),
    ]
    return Presentation(name, TORUS_GENERATORS, tuple(rels), True)


def involution_constraints(qm: QMatrix, tol: float = INVOLUTION_TOL) -> bool:
    """Are the six relations mapped to themselves by the involution?

    Paired entries must satisfy q13 = 1/conj(q24), q14 = 1/conj(q23) (and the
    mirrored equalities); q12 and q34 must be real.  Formal exponents are
    compared exactly, numeric values up to ``tol`` (relative above 1).
    """
    checks = [
        (qm.q13, qm.q24.conj().inverse()),
        (qm.q24, qm.q13.conj().inverse()),
        (qm.q14, qm.q23.conj().inverse()),
        (qm.q23, qm.q14.conj().inverse()),
        (qm.q12, qm.q12.conj()),
        (qm.q34, qm.q34.conj()),
    ]
    return all(a.is_close(b, tol) for a, b in checks)


@dataclass(frozen=True)
class NormalFormParams:
    theta: float
    mu: float

    def __post_init__(self):
        if not (0 <= self.theta < 1):
            raise ValueError(f"theta must lie in [0, 1), got {self.theta}")
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")

    def q13(self) -> complex:
        return self.mu * cmath.exp(2j * math.pi * self.theta)


def normal_form_parameters(q13: complex, tol: float = 1e-12) -> NormalFormParams:
    """Polar form q13 = mu * exp(2*pi*i*theta) with theta in [0, 1)."""
    q13 = complex(q13)
    if q13 == 0:
        raise ZeroArgument("q13 must be nonzero")
    mu = abs(q13)
    theta = (cmath.phase(q13) / (2 * math.pi)) % 1.0
    if theta >= 1.0:  # -tiny % 1.0 rounds up to 1.0
        theta = 0.0
    params = NormalFormParams(theta, mu)
    if abs(params.q13() - q13) > tol * max(1.0, mu):
        raise ArithmeticError(f"polar roundtrip of {q13} off by {abs(params.q13() - q13):.2e}")
    return params


def ideal_I_mu() -> Presentation:
    """uu* = vv* = (1/mu) e, written in torus generators."""
    return _torus("I_mu", ["u u* - mu^-1 e", "v v* - mu^-1 e"])


def ideal_I_mu_x() -> Presentation:
    """The same ideal in the Sklyanin generators: x1x2 = x3x4 = (1/mu) e."""
    gens = tuple(x(k) for k in range(1, 5))
    rels = tuple(parse_polynomial(t) for t in ("x1 x2 - mu^-1 e", "x3 x4 - mu^-1 e"))
    return Presentation("I_mu[x]", gens, rels, True)


def quotient(p: Presentation, ideal: Presentation) -> Presentation:
    if set(p.generators) != set(ideal.generators):
        raise GeneratorMismatch(f"{p.name} and {ideal.name} use different generators")
    rels = list(p.relations)
    for r in ideal.relations:
        if r not in rels:
            rels.append(r)
    if not ideal.relations:
        return p
    return Presentation(
        f"{p.name}/{ideal.name}", p.generators, tuple(rels), p.star_closed or ideal.star_closed
    )


_EQ13_CORE = [
    "v u v* - q u",
    "v* - q u* v* u",
    "v* u v - q^-1 u",
    "u* - q^-1 v* u* v",
]


def eq13_relations() -> Presentation:
    """Cubic form of the torus relations obtained with the unit relations."""
    return _torus("eq13", _EQ13_CORE + ["u u* - e", "u* u - e", "v v* - e", "v* v - e"])


def eq14_relations() -> Presentation:
    """As :func:`eq13_relations` but with unit relations scaled to (1/mu) e."""
    return _torus(
        "eq14",
        _EQ13_CORE + ["u u* - mu^-1 e", "u* u - mu^-1 e", "v v* - mu^-1 e", "v* v - mu^-1 e"],
    )


def q4_mod_imu() -> Presentation:
    return quotient(sklyanin_normal_form(), ideal_I_mu())


REGISTRY = {
    "eq6": torus_relations,
    "torus": torus_relations,
    "eq8": torus_expanded,
    "eq9": sklyanin_normal_form,
    "eq10": lambda: feigin_odesskii_form(normal_form_qmatrix()),
    "eq13": eq13_relations,
    "eq14": eq14_relations,
    "i-mu": ideal_I_mu,
    "q4-mod-imu": q4_mod_imu,
}


def named(name: str) -> Presentation:
    try:
        return REGISTRY[name]()
    except KeyError:
        raise KeyError(f"unknown presentation {name!r}; known: {', '.join(REGISTRY)}") from None


# ---------------------------------------------------------------------------
# rewriting helpers on presentations


def rule_system(p: Presentation, budgets: Budgets = DEFAULT_BUDGETS) -> RuleSystem:
    """Completed rule system of a presentation under the default order."""
    order = DEFAULT_ORDER if set(p.generators) <= set(TORUS_GENERATORS) else TermOrder.natural(p.generators)
    rs = orient(p.rewriting_relations(), order)
    return complete(rs, budgets.max_new_rules, budgets.step_budget)


def compare(a: Presentation, b: Presentation, budgets: Budgets = DEFAULT_BUDGETS) -> EquivalenceReport:
    """Two-way derivability report; star closure follows the presentations' flags."""
    if set(a.generators) != set(b.generators):
        raise GeneratorMismatch(f"{a.name} and {b.name} use different generators")
    order = DEFAULT_ORDER if set(a.generators) <= set(TORUS_GENERATORS) else TermOrder.natural(a.generators)
    return equivalence_report(
        a.rewriting_relations(),
        b.rewriting_relations(),
        order,
        budgets,
    )


@dataclass
class IsomorphismReport:
    """Both branches of the isomorphism check plus supporting evidence.

    ``unit_branch``: quotient at mu = 1 against the expanded torus relations.
    ``scaled_branch``: the scaled-unit system against the cubic torus system
    after e -> (1/mu) e.  ``unscaled_branch`` is the same comparison without
    the substitution and is expected to fail.  ``quotient_vs_scaled`` checks
    the formal-mu quotient directly against the scaled-unit system.
    """

    unit_branch: EquivalenceReport
    scaled_branch: EquivalenceReport
    unscaled_branch: EquivalenceReport
    quotient_vs_scaled: EquivalenceReport
    quotient_mu1_vs_torus: EquivalenceReport
    generator_map_ok: bool
    mixed_traces: list[DerivationTrace] = field(default_factory=list)
    cubic_traces: list[DerivationTrace] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.unit_branch.equivalent and self.scaled_branch.equivalent and self.generator_map_ok

    def mu_residuals(self) -> list[tuple[str, NCPolynomial, NCPolynomial]]:
        """Failing relations of the unscaled comparison that still carry mu."""
        return [
            (d, r, nf) for d, r, nf in self.unscaled_branch.residuals() if nf.mu_powers() - {0}
        ]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "unit_branch": self.unit_branch.to_dict(),
            "scaled_branch": self.scaled_branch.to_dict(),
            "unscaled_branch": self.unscaled_branch.to_dict(),
            "quotient_vs_scaled": self.quotient_vs_scaled.to_dict(),
            "generator_map_ok": self.generator_map_ok,
            "mu_residuals": [
                {"direction": d, "relation": str(r), "normal_form": str(nf)}
                for d, r, nf in self.mu_residuals()
            ],
            "mixed_traces": [t.lines() for t in self.mixed_traces],
            "cubic_traces": [t.lines() for t in self.cubic_traces],
        }

    def lines(self) -> list[str]:
        def verdict(rep: EquivalenceReport) -> str:
            s = "equivalent" if rep.equivalent else "NOT equivalent"
            if rep.system_a.is_trivial or rep.system_b.is_trivial:
                s += " (a side presents the zero algebra: e reduces to 0)"
            return s

        out = [
            f"mu = 1 branch: quotient|mu=1 vs eq8: {verdict(self.unit_branch)}",
            f"formal mu branch: eq14 vs eq13 with e -> mu^-1 e: {verdict(self.scaled_branch)}",
            f"formal mu, no substitution: eq14 vs eq13: {verdict(self.unscaled_branch)}",
        ]
        for d, r, nf in self.mu_residuals():
            out.append(f"  residual ({d}): {r} -> {nf}")
        out.append(f"formal mu: quotient vs eq14: {verdict(self.quotient_vs_scaled)}")
        out.append(f"generator map x1->u, x2->u*, x3->v, x4->v*: {'ok' if self.generator_map_ok else 'FAILED'}")
        out.append(f"verdict: {'PASS' if self.passed else 'FAIL'}")
        return out


def theorem1_check(budgets: Budgets = DEFAULT_BUDGETS) -> IsomorphismReport:
    q4 = q4_mod_imu()
    eq6, eq8 = torus_relations(), torus_expanded()
    eq13, eq14 = eq13_relations(), eq14_relations()

    unit = compare(q4.specialize_mu(), eq8, budgets)
    scaled = compare(eq14, eq13.rescale_unit(-1), budgets)
    unscaled = compare(eq14, eq13, budgets)
    q_vs_14 = compare(q4, eq14, budgets)
    q1_vs_6 = compare(q4.specialize_mu(), eq6, budgets)

    mapped = [substitute(p, GENERATOR_MAP) for p in ideal_I_mu_x().relations]
    map_ok = mapped == list(ideal_I_mu().relations)

    mixed = []
    for target in eq8.relations:
        _, tr = derives(eq6.relations, target, DEFAULT_ORDER, budgets, star_close=True)
        mixed.append(tr)
    cubic = []
    for target in eq13.relations:
        _, tr = derives(eq8.relations, target, DEFAULT_ORDER, budgets, star_close=True)
        cubic.append(tr)
    return IsomorphismReport(unit, scaled, unscaled, q_vs_14, q1_vs_6, map_ok, mixed, cubic)
