"""Sklyanin algebras, the noncommutative torus, and the rewriting that links them."""

from .algebra import (
    TORUS_GENERATORS,
    U,
    U_STAR,
    V,
    V_STAR,
    Coefficient,
    Generator,
    NCPolynomial,
    parse_polynomial,
    parse_relations,
    substitute,
    x,
)
from .presentations import (
    GENERATOR_MAP,
    Presentation,
    QMatrix,
    eq13_relations,
    eq14_relations,
    feigin_odesskii_form,
    ideal_I_mu,
    involution_constraints,
    normal_form_parameters,
    quotient,
    sklyanin_normal_form,
    theorem1_check,
    torus_expanded,
    torus_relations,
)
from .reps import check_theorem1_numeric, clock_shift, relation_residuals
from .rewriting import (
    Budgets,
    TermOrder,
    complete,
    count_normal_words,
    derives,
    equivalent_presentations,
    normal_form,
    orient,
)
from .theta import SeriesConfig, SklyaninParams, eval_theta, eval_theta_r, sklyanin_relations

__version__ = "0.1.0"
