"""Finite-dimensional clock-and-shift models of the torus relations.

At theta = p/q the q x q cyclic shift U and the diagonal clock
V = diag(w**k), w = exp(2*pi*i*p/q), satisfy VU = w UV exactly, so every
relation of the torus presentations can be evaluated as a matrix and its
operator norm used as a residual.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .algebra import TORUS_GENERATORS, Generator, NCPolynomial, UnmappedGenerator, substitute, x
from .presentations import GENERATOR_MAP, Presentation, ideal_I_mu, quotient, sklyanin_normal_form

__all__ = [
    "MatrixRep",
    "ResidualReport",
    "NotCoprime",
    "DimensionZero",
    "clock_shift",
    "evaluate",
    "relation_residuals",
    "check_theorem1_numeric",
    "convergents",
]


class NotCoprime(ValueError):
    pass


class DimensionZero(ValueError):
    pass


@dataclass(frozen=True)
class MatrixRep:
    dimension: int
    images: Mapping[Generator, np.ndarray]
    p: int | None = None
    q: int | None = None

    def __post_init__(self):
        for g, m in self.images.items():
            if m.shape != (self.dimension, self.dimension):
                raise ValueError(f"image of {g.name} has shape {m.shape}")
            partner = self.images.get(g.star())
            if partner is not None and not np.allclose(partner, m.conj().T, atol=1e-12):
                raise ValueError(f"images of {g.name} and {g.star().name} are not adjoint")

    def __getitem__(self, g: Generator) -> np.ndarray:
        try:
            return self.images[g]
        except KeyError:
            raise UnmappedGenerator(f"no matrix for generator {g.name}") from None


def clock_shift(p: int, q: int) -> MatrixRep:
    """Clock/shift pair at theta = p/q: U e_k = e_{k+1 mod q}, V = diag(w^k)."""
    if q < 1:
        raise DimensionZero(f"dimension must be >= 1, got {q}")
    if not 0 <= p < q:
        raise ValueError(f"need 0 <= p < q, got p={p}, q={q}")
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) = {math.gcd(p, q)}")
    shift = np.roll(np.eye(q, dtype=complex), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * p * np.arange(q) / q))
    u, us, v, vs = TORUS_GENERATORS
    images = {u: shift, us: shift.conj().T, v: clock, vs: clock.conj().T}
    return MatrixRep(q, images, p, q)


def evaluate(poly: NCPolynomial, rep: MatrixRep, theta: float, mu: float = 1.0) -> np.ndarray:
    """Matrix of ``poly`` with q = exp(2*pi*i*theta) and mu instantiated."""
    qv = cmath.exp(2j * math.pi * theta)
    out = np.zeros((rep.dimension, rep.dimension), dtype=complex)
    eye = np.eye(rep.dimension, dtype=complex)
    for w, c in poly.evaluate_coefficients(qv, mu).items():
        m = eye
        for g in w:
            m = m @ rep[g]
        out += c * m
    return out


@dataclass(frozen=True)
class ResidualReport:
    presentation: str
    p: int | None
    q: int | None
    theta: float
    mu: float
    residuals: tuple[tuple[str, float], ...]

    @property
    def max_residual(self) -> float:
        return max((r for _, r in self.residuals), default=0.0)

    def to_dict(self) -> dict:
        return {
            "presentation": self.presentation,
            "p": self.p,
            "q": self.q,
            "theta": self.theta,
            "mu": self.mu,
            "residuals": [{"relation": rel, "residual": r} for rel, r in self.residuals],
            "max_residual": self.max_residual,
        }


def relation_residuals(rep: MatrixRep, pres: Presentation, theta_value: float, mu_value: float = 1.0) -> ResidualReport:
    """Operator norm of every relation of ``pres`` evaluated in ``rep``."""
    out = []
    for rel in pres.relations:
        m = evaluate(rel, rep, theta_value, mu_value)
        out.append((str(rel), float(np.linalg.norm(m, 2))))
    return ResidualReport(pres.name, rep.p, rep.q, float(theta_value), float(mu_value), tuple(out))


@functools.lru_cache(maxsize=1)
def _mapped_quotient() -> Presentation:
    pres = quotient(sklyanin_normal_form(), ideal_I_mu()).specialize_mu()
    to_x = {g: NCPolynomial.generator(x(k)) for k, g in enumerate(TORUS_GENERATORS, 1)}
    x_rels = [substitute(r, to_x) for r in pres.relations]
    return Presentation(pres.name, TORUS_GENERATORS, tuple(substitute(r, GENERATOR_MAP) for r in x_rels))


def check_theorem1_numeric(p: int, q: int) -> ResidualReport:
    """Residuals of the quotient algebra (mu = 1) in the clock/shift model.

    The relations are first rewritten in x1..x4 and then sent back through the
    generator map x1 -> u, x2 -> u*, x3 -> v, x4 -> v*, so the map itself is
    part of what is checked.
    """
    return relation_residuals(clock_shift(p, q), _mapped_quotient(), p / q, 1.0)


def convergents(value: float, count: int) -> list[tuple[int, int]]:
    """Continued-fraction convergents p/q of ``value`` in [0, 1), reduced mod 1."""
    out = []
    h0, h1, k0, k1 = 0, 1, 1, 0
    rest = value
    for _ in range(count):
        a = math.floor(rest)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        out.append((h1 % k1, k1))
        frac = rest - a
        if frac < 1e-15:
            break
        rest = 1 / frac
    return out
