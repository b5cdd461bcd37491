import json
import math
from fractions import Fraction

import numpy as np
import pytest

from skewtor import presentations as pres
from skewtor.algebra import U, U_STAR, V, V_STAR, UnmappedGenerator, parse_polynomial as P
from skewtor.presentations import Presentation
from skewtor.reps import (
    DimensionZero,
    MatrixRep,
    NotCoprime,
    check_theorem1_numeric,
    clock_shift,
    convergents,
    evaluate,
    relation_residuals,
)


def test_two_by_two():
    rep = clock_shift(1, 2)
    np.testing.assert_array_equal(rep[U], [[0, 1], [1, 0]])
    np.testing.assert_allclose(rep[V], np.diag([1, -1]), atol=1e-15)
    np.testing.assert_allclose(rep[V] @ rep[U], -(rep[U] @ rep[V]), atol=1e-15)


def test_one_by_one():
    rep = clock_shift(0, 1)
    for g in (U, U_STAR, V, V_STAR):
        assert rep[g].shape == (1, 1) and rep[g][0, 0] == 1
    r = relation_residuals(rep, pres.torus_relations(), 0.0, 1.0)
    assert r.max_residual == 0.0


def test_shift_moves_basis_vectors():
    rep = clock_shift(2, 7)
    for k in range(7):
        e = np.zeros(7)
        e[k] = 1
        np.testing.assert_array_equal(rep[U] @ e, np.roll(e, 1))


@pytest.mark.parametrize("p, q", [(1, 5), (3, 7), (5, 12), (17, 64)])
def test_weyl_relation_exact(p, q):
    rep = clock_shift(p, q)
    w = np.exp(2j * np.pi * p / q)
    assert np.linalg.norm(rep[V] @ rep[U] - w * rep[U] @ rep[V], 2) < 1e-12


def test_bad_dimensions():
    with pytest.raises(NotCoprime):
        clock_shift(2, 4)
    with pytest.raises(DimensionZero):
        clock_shift(0, 0)
    with pytest.raises(ValueError):
        clock_shift(5, 3)


def test_unitary_images():
    for p, q in ((0, 1), (1, 2), (4, 9), (1, 31)):
        rep = clock_shift(p, q)
        eye = np.eye(q)
        for g in (U, V):
            assert np.abs(rep[g].conj().T @ rep[g] - eye).max() < 1e-15


def test_star_partners_must_be_adjoint():
    m = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(ValueError):
        MatrixRep(2, {U: m, U_STAR: m})
    with pytest.raises(ValueError):
        MatrixRep(3, {U: m})


def test_residual_examples():
    rep = clock_shift(1, 5)
    assert relation_residuals(rep, pres.torus_expanded(), 1 / 5, 1.0).max_residual < 1e-12
    assert relation_residuals(rep, pres.torus_relations(), 2 / 5, 1.0).max_residual >= 0.5


def test_wrong_phase_matches_closed_form():
    rep = clock_shift(1, 5)
    r = relation_residuals(rep, Presentation("w", pres.TORUS_GENERATORS, (P("v u - q u v"),)), 2 / 5)
    assert r.max_residual == pytest.approx(2 * math.sin(math.pi / 5), abs=1e-12)


def test_unmapped_generator():
    rep = clock_shift(1, 3)
    x_pres = pres.ideal_I_mu_x()
    with pytest.raises(UnmappedGenerator):
        relation_residuals(rep, x_pres, 1 / 3)


def test_evaluate_instantiates_q_and_mu():
    rep = clock_shift(1, 3)
    m = evaluate(P("mu q e"), rep, 1 / 3, 2.0)
    np.testing.assert_allclose(m, 2 * np.exp(2j * np.pi / 3) * np.eye(3), atol=1e-15)


def test_mu_not_one_breaks_the_quotient():
    # no finite-dimensional unitary model survives mu != 1
    rep = clock_shift(1, 4)
    r = relation_residuals(rep, pres.q4_mod_imu(), 1 / 4, 1.5)
    assert r.max_residual > 0.1


def test_star_compatible_residuals():
    rep = clock_shift(2, 9)
    p = pres.torus_expanded()
    starred = Presentation("s", p.generators, tuple(r.star() for r in p.relations))
    a = relation_residuals(rep, p, 2 / 9).residuals
    b = relation_residuals(rep, starred, 2 / 9).residuals
    for (_, ra), (_, rb) in zip(a, b):
        assert abs(ra - rb) < 1e-12


@pytest.mark.parametrize("p, q", [(1, 3), (1, 64), (0, 1), (5, 8)])
def test_mapped_quotient_on_clock_shift(p, q):
    r = check_theorem1_numeric(p, q)
    assert len(r.residuals) == 8
    assert r.max_residual < (1e-12 if q < 64 else 1e-11)
    if q == 1:
        assert r.max_residual == 0.0


def test_report_json():
    d = json.loads(json.dumps(check_theorem1_numeric(1, 3).to_dict()))
    assert set(d) == {"presentation", "p", "q", "theta", "mu", "residuals", "max_residual"}
    assert d["p"] == 1 and d["q"] == 3 and len(d["residuals"]) == 8


def test_convergents_against_fractions():
    golden = (math.sqrt(5) - 1) / 2
    cs = convergents(golden, 10)
    fib = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89]
    # 0/1, then 1/1 which wraps to 0/1, then ratios of Fibonacci numbers
    assert cs[:2] == [(0, 1), (0, 1)]
    assert cs[2:] == [(fib[k], fib[k + 1]) for k in range(1, len(cs) - 1)]
    for p, q in cs[2:]:
        assert Fraction(golden).limit_denominator(q) == Fraction(p, q)


def test_irrational_approximation():
    theta = math.sqrt(2) - 1
    relation = Presentation("r", pres.TORUS_GENERATORS, (P("v u - q u v"),))
    last = math.inf
    for p, q in convergents(theta, 8)[1:]:
        r = relation_residuals(clock_shift(p, q), relation, theta).max_residual
        assert r == pytest.approx(2 * abs(math.sin(math.pi * (theta - p / q))), abs=1e-12)
        assert r < last
        last = r
    assert last < 1e-3
