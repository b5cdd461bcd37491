import cmath
import math

import numpy as np
import pytest

from skewtor import presentations as pres
from skewtor.algebra import TORUS_GENERATORS, Coefficient, NCPolynomial, parse_polynomial as P, x
from skewtor.presentations import (
    GeneratorMismatch,
    NormalFormParams,
    Presentation,
    QMatrix,
    ZeroArgument,
    ZeroQEntry,
    compare,
    feigin_odesskii_form,
    involution_constraints,
    normal_form_parameters,
    quotient,
)
from skewtor.rewriting import normal_form


def rels(*texts):
    return tuple(P(t) for t in texts)


def monic_set(p: Presentation):
    return {r.monic() for r in p.relations}


# constructors


def test_torus_relations_verbatim():
    p = pres.torus_relations()
    assert p.generators == TORUS_GENERATORS
    assert p.relations == rels("v u - q u v", "u u* - e", "u* u - e", "v v* - e", "v* v - e")


def test_torus_relations_emit_no_star_images():
    p = pres.torus_relations()
    assert P("u* v* - q^-1 v* u*") not in p.relations
    assert len(p.rewriting_relations()) > len(p.relations)


def test_commuting_unitaries_at_theta_zero():
    rs = pres.rule_system(pres.torus_relations().specialize_q())
    assert normal_form(P("v u - u v"), rs)[0] == NCPolynomial.zero()
    assert not rs.is_trivial


def test_torus_expanded_verbatim():
    assert pres.torus_expanded().relations == rels(
        "v u - q u v",
        "u v* - q v* u",
        "u* v - q v u*",
        "v* u* - q u* v*",
        "u u* - e",
        "u* u - e",
        "v v* - e",
        "v* v - e",
    )


def test_defining_and_expanded_torus_agree():
    assert compare(pres.torus_relations(), pres.torus_expanded()).equivalent


def test_expanded_torus_is_star_closed_as_a_set():
    p = pres.torus_expanded()
    assert {r.star().monic() for r in p.relations} == monic_set(p)
    # line 1 <-> line 4, line 2 <-> line 3
    r = p.relations
    assert r[0].star().monic() == r[3].monic()
    assert r[1].star().monic() == r[2].monic()


def test_sklyanin_normal_form_verbatim():
    p = pres.sklyanin_normal_form()
    assert p.relations == rels(
        "v u - mu q u v",
        "u v* - mu^-1 q v* u",
        "u* v - mu q v u*",
        "v* u* - mu^-1 q u* v*",
        "u u* - u* u",
        "v v* - v* v",
    )
    assert all(r.is_homogeneous(2) for r in p.relations)


def test_normal_form_at_mu_one_with_units_is_expanded_torus():
    units = Presentation("units", TORUS_GENERATORS, rels("u u* - e", "v v* - e"))
    p = quotient(pres.sklyanin_normal_form().specialize_mu(), units)
    assert compare(p, pres.torus_expanded()).equivalent


# FO form and involution constraints


def test_normal_form_qmatrix_reproduces_normal_form():
    fo = feigin_odesskii_form(pres.normal_form_qmatrix())
    assert monic_set(fo) == monic_set(pres.sklyanin_normal_form())
    assert compare(fo, pres.sklyanin_normal_form()).equivalent


def test_all_ones_gives_commutators():
    fo = feigin_odesskii_form(QMatrix(*[1] * 6))
    for r in fo.relations:
        a, b = r.words()
        m = NCPolynomial.monomial
        assert r in (m(a) - m(b), m(b) - m(a)) and a == b[::-1]


def test_zero_entry_rejected():
    with pytest.raises(ZeroQEntry):
        feigin_odesskii_form(QMatrix(1, 1, 0, 1, 1, 1))


def test_involution_examples():
    q13 = 2 * cmath.exp(2j * math.pi * 0.3)
    q24 = 0.5 * cmath.exp(2j * math.pi * 0.3)
    q14 = 0.7 * cmath.exp(2j * math.pi * 0.1)
    q23 = 1 / q14.conjugate()
    assert involution_constraints(QMatrix(1, q13, q14, q23, q24, 1))
    assert not involution_constraints(QMatrix(1j, q13, q14, q23, q24, 1))
    assert involution_constraints(QMatrix(*[1] * 6))
    assert involution_constraints(pres.normal_form_qmatrix())


def test_involution_formal_exponents_are_exact():
    qm = pres.normal_form_qmatrix()
    assert not involution_constraints(qm.replace(q24=Coefficient(1, 1, 1)))
    assert not involution_constraints(qm.replace(q12=Coefficient(1, 1, 0)))


def random_constrained(rng):
    q13 = complex(*rng.normal(size=2))
    q14 = complex(*rng.normal(size=2))
    return QMatrix(
        q12=rng.uniform(0.2, 3) * rng.choice([-1, 1]),
        q13=q13,
        q14=q14,
        q23=1 / q14.conjugate(),
        q24=1 / q13.conjugate(),
        q34=rng.uniform(0.2, 3),
    )


def test_paired_perturbations_break_constraints():
    rng = np.random.default_rng(7)
    for _ in range(50):
        qm = random_constrained(rng)
        assert involution_constraints(qm)
        for name in ("q13", "q14", "q23", "q24"):
            c = getattr(qm, name)
            assert not involution_constraints(qm.replace(**{name: c * 1.01}))
        # a real entry stays real under a real factor, but not under a phase
        assert not involution_constraints(qm.replace(q12=qm.q12 * cmath.exp(0.01j)))


def test_substitution_twice_is_identity():
    rng = np.random.default_rng(3)
    for _ in range(20):
        qm = random_constrained(rng)
        swapped = QMatrix(
            qm.q12.conj(),
            qm.q24.conj().inverse(),
            qm.q23.conj().inverse(),
            qm.q14.conj().inverse(),
            qm.q13.conj().inverse(),
            qm.q34.conj(),
        )
        assert involution_constraints(swapped)
        back = QMatrix(
            swapped.q12.conj(),
            swapped.q24.conj().inverse(),
            swapped.q23.conj().inverse(),
            swapped.q14.conj().inverse(),
            swapped.q13.conj().inverse(),
            swapped.q34.conj(),
        )
        for name in QMatrix.names():
            assert getattr(back, name).is_close(getattr(qm, name), 1e-12)


# polar parameters


@pytest.mark.parametrize(
    "q13, theta, mu",
    [(1j, 0.25, 1.0), (2, 0.0, 2.0), (-3, 0.5, 3.0), (-1j, 0.75, 1.0)],
)
def test_normal_form_parameter_examples(q13, theta, mu):
    p = normal_form_parameters(q13)
    assert p.theta == pytest.approx(theta, abs=1e-15) and p.mu == pytest.approx(mu, rel=1e-15)


def test_polar_roundtrip_grid():
    for mu in np.geomspace(1e-3, 1e3, 15):
        for theta in np.linspace(0, 1, 15, endpoint=False):
            p = normal_form_parameters(NormalFormParams(theta, mu).q13())
            assert abs(p.mu - mu) <= 1e-12 * max(1, mu)
            d = abs(p.theta - theta)
            assert min(d, 1 - d) <= 1e-12


def test_theta_near_one_wraps_into_range():
    p = normal_form_parameters(cmath.exp(-1e-18j))
    assert 0 <= p.theta < 1


def test_polar_errors():
    with pytest.raises(ZeroArgument):
        normal_form_parameters(0)
    with pytest.raises(ValueError):
        NormalFormParams(1.0, 1.0)
    with pytest.raises(ValueError):
        NormalFormParams(0.5, 0.0)


# ideal, quotient, cubic systems


def test_ideal_I_mu():
    assert pres.ideal_I_mu().relations == rels("u u* - mu^-1 e", "v v* - mu^-1 e")
    assert pres.ideal_I_mu().specialize_mu().relations == rels("u u* - e", "v v* - e")


def test_ideal_in_x_generators_maps_to_torus_generators():
    from skewtor.algebra import substitute

    mapped = tuple(substitute(r, pres.GENERATOR_MAP) for r in pres.ideal_I_mu_x().relations)
    assert mapped == pres.ideal_I_mu().relations
    assert set(pres.ideal_I_mu_x().generators) == {x(k) for k in range(1, 5)}


def test_ideal_star_image_reduces_to_itself():
    rs = pres.rule_system(pres.sklyanin_normal_form())
    for r in pres.ideal_I_mu().relations:
        a = normal_form(r.star(), rs)[0]
        b = normal_form(r, rs)[0]
        assert a == b


def test_quotient_examples():
    q = quotient(pres.sklyanin_normal_form(), pres.ideal_I_mu())
    assert len(q.relations) == 8
    empty = Presentation("0", TORUS_GENERATORS, ())
    assert quotient(pres.torus_relations(), empty) == pres.torus_relations()
    with pytest.raises(GeneratorMismatch):
        quotient(pres.torus_relations(), pres.ideal_I_mu_x())


def test_quotient_union_laws():
    a = Presentation("a", TORUS_GENERATORS, rels("u u* - e"))
    b = Presentation("b", TORUS_GENERATORS, rels("v v* - e"))
    c = Presentation("c", TORUS_GENERATORS, rels("v u - q u v"))
    lhs = quotient(quotient(c, a), b)
    rhs = quotient(c, quotient(a, b))
    assert set(lhs.relations) == set(rhs.relations)
    assert set(quotient(c, quotient(a, b)).relations) == set(quotient(c, quotient(b, a)).relations)


def test_undeclared_generator():
    with pytest.raises(GeneratorMismatch):
        Presentation("bad", TORUS_GENERATORS, rels("x1 u"))


def test_cubic_systems():
    e13, e14 = pres.eq13_relations(), pres.eq14_relations()
    assert e13.relations[:4] == rels("v u v* - q u", "v* - q u* v* u", "v* u v - q^-1 u", "u* - q^-1 v* u* v")
    assert e14.relations[:4] == e13.relations[:4]
    assert e14.specialize_mu().relations == e13.relations


def test_expanded_torus_equivalent_to_cubic_system():
    rep = compare(pres.torus_expanded(), pres.eq13_relations())
    assert rep.equivalent and not rep.system_a.is_trivial


def test_quotient_equivalent_to_scaled_cubic_system():
    rep = compare(pres.q4_mod_imu(), pres.eq14_relations())
    assert rep.equivalent
    # both sides collapse once mu is a formal parameter
    assert rep.system_a.is_trivial and rep.system_b.is_trivial


# isomorphism check


@pytest.fixture(scope="module")
def report():
    return pres.theorem1_check()


def test_iso_unit_branch(report):
    assert report.unit_branch.equivalent
    assert not report.unit_branch.system_a.is_trivial
    assert report.quotient_mu1_vs_torus.equivalent
    assert report.generator_map_ok
    assert report.passed


def test_iso_scaled_branch(report):
    assert report.scaled_branch.equivalent


def test_iso_unscaled_branch_reports_mu(report):
    assert not report.unscaled_branch.equivalent
    res = report.mu_residuals()
    assert res and all(nf.mu_powers() - {0} for _, _, nf in res)


def test_iso_traces_replay(report):
    assert len(report.mixed_traces) == 8 and len(report.cubic_traces) == 8
    for tr in report.mixed_traces + report.cubic_traces:
        assert tr.replay() == tr.end == NCPolynomial.zero()


def test_iso_report_serializes(report):
    import json

    d = json.loads(json.dumps(report.to_dict()))
    assert d["passed"] is True and d["mu_residuals"]
    assert report.lines()[-1] == "verdict: PASS"


# serialization and registry


@pytest.mark.parametrize("name", sorted(pres.REGISTRY))
def test_json_roundtrip(name):
    p = pres.named(name)
    back = Presentation.from_json(p.to_json())
    assert back == p
    assert back.to_json() == p.to_json()


def test_unknown_name():
    with pytest.raises(KeyError):
        pres.named("eq99")
