"""Theta series, their n-fold products, and Sklyanin relation tables.

The theta function on the lattice Z + Z*tau is

    theta(z) = sum_j (-1)**j * exp(2*pi*i*(j*z + j*(j-1)/2 * tau))

and for 0 <= r < n the product

    theta_r(z) = prod_{j=1..n} theta(z + r*tau/n + (j-1)/n)
                 * exp(2*pi*i*(r*z + r*(r-n)/(2n) + r/(2n))).

The Sklyanin algebra on x_0, ..., x_{n-1} (indices mod n) has, for each
ordered pair i != j, the quadratic relation

    sum_r x_{j-r} x_{i+r} / (theta_r(eta) * theta_{j-i-r}(-eta)) = 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .algebra import NCPolynomial, x

__all__ = [
    "SeriesConfig",
    "SklyaninParams",
    "RelationTable",
    "TauNotInUpperHalfPlane",
    "TruncationToleranceNotMet",
    "RepresentativeOutOfRange",
    "SingularCoefficient",
    "eval_theta",
    "theta_with_tail",
    "ThetaSum",
    "eval_theta_r",
    "sklyanin_relations",
    "row_reduce",
    "x_index",
]

ZERO_FLOOR = 1e-10
PIVOT_TOL = 1e-9


class TauNotInUpperHalfPlane(ValueError):
    pass


class TruncationToleranceNotMet(ArithmeticError):
    pass


class RepresentativeOutOfRange(ValueError):
    pass


class SingularCoefficient(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class SeriesConfig:
    max_index: int = 60
    tail_tol: float = 1e-14

    def __post_init__(self):
        if self.max_index < 1:
            raise ValueError("max_index must be >= 1")
        if not self.tail_tol >= 0:
            raise ValueError("tail_tol must be >= 0")


DEFAULT_CONFIG = SeriesConfig()


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if not tau.imag > 0:
        raise TauNotInUpperHalfPlane(f"Im(tau) must be positive, got tau={tau}")
    return tau


def _log_term(j, z: complex, tau: complex):
    return 2j * np.pi * (j * z + j * (j - 1) / 2 * tau)


class ThetaSum(NamedTuple):
    value: complex
    first_omitted: float  # largest |term| at j = +-(max_index + 1)
    tail_bound: float  # bound on the modulus of everything omitted


def _side_bound(first: float, ratio: float) -> float:
    return first / (1 - ratio) if ratio < 1 else math.inf


def theta_with_tail(z: complex, tau: complex, cfg: SeriesConfig = DEFAULT_CONFIG) -> ThetaSum:
    """Partial theta sum over |j| <= max_index with truncation diagnostics."""
    tau = _check_tau(tau)
    z = complex(z)
    n = cfg.max_index
    j = np.arange(-n, n + 1)
    signs = np.where(j % 2 == 0, 1.0, -1.0)
    value = complex(np.sum(signs * np.exp(_log_term(j, z, tau))))
    lo, hi = np.exp(_log_term(np.array([-n - 1, n + 1]), z, tau).real)
    # |t_{j+1}/t_j| = exp(-2 pi (Im z + j Im tau)), largest at the edge on each side
    y, t = z.imag, tau.imag
    r_hi = math.exp(min(-2 * math.pi * (y + (n + 1) * t), 700.0))
    r_lo = math.exp(min(2 * math.pi * (y - (n + 2) * t), 700.0))
    bound = _side_bound(float(hi), r_hi) + _side_bound(float(lo), r_lo)
    return ThetaSum(value, float(max(lo, hi)), bound)


def eval_theta(z: complex, tau: complex, cfg: SeriesConfig = DEFAULT_CONFIG) -> complex:
    value, first, _ = theta_with_tail(z, tau, cfg)
    if first > cfg.tail_tol:
        raise TruncationToleranceNotMet(
            f"first omitted term {first:.3e} exceeds tail_tol={cfg.tail_tol:.1e}; "
            f"raise max_index (currently {cfg.max_index})"
        )
    return value


def eval_theta_r(
    z: complex, r: int, n: int, tau: complex, cfg: SeriesConfig = DEFAULT_CONFIG
) -> complex:
    """The n-fold theta product with its exponential prefactor.

    ``r`` must already be the representative in {0, ..., n-1}; the prefactor
    depends on it.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= r < n:
        raise RepresentativeOutOfRange(f"r={r} is not in 0..{n - 1}")
    tau = _check_tau(tau)
    z = complex(z)
    prod = 1 + 0j
    for j in range(1, n + 1):
        prod *= eval_theta(z + r * tau / n + (j - 1) / n, tau, cfg)
    prefactor = cmath.exp(2j * math.pi * (r * z + r * (r - n) / (2 * n) + r / (2 * n)))
    return prod * prefactor


@dataclass(frozen=True)
class SklyaninParams:
    n: int
    tau: complex
    eta: complex | None = None

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"n must be >= 3, got {self.n}")
        object.__setattr__(self, "tau", _check_tau(self.tau))
        if self.eta is None:
            # eta = 1/n: the point of order n
            object.__setattr__(self, "eta", complex(1 / self.n))
        else:
            object.__setattr__(self, "eta", complex(self.eta))


def x_index(a: int, n: int) -> int:
    """Label in 1..n for the residue a mod n (x_0 is x_n)."""
    a %= n
    return a if a else n


@dataclass(frozen=True)
class RelationTable:
    """Sklyanin relations as a coefficient matrix plus polynomials.

    ``pairs[k]`` is the ordered pair (i, j) of row ``k``; the columns of
    ``matrix`` index the monomials x_a x_b with column ``a*n + b``.
    """

    params: SklyaninParams
    pairs: tuple[tuple[int, int], ...]
    matrix: np.ndarray = field(repr=False)
    independent_basis: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def rank(self) -> int:
        return len(self.independent_basis)

    @property
    def entries(self) -> dict[tuple[int, int], NCPolynomial]:
        n = self.n
        out = {}
        for (i, j), row in zip(self.pairs, self.matrix):
            terms = {}
            for col in np.flatnonzero(row):
                a, b = divmod(int(col), n)
                w = (x(x_index(a, n)), x(x_index(b, n)))
                terms[(w, 0, 0)] = complex(row[col])
            out[(i, j)] = NCPolynomial(terms)
        return out

    def to_dict(self) -> dict:
        entries = self.entries
        return {
            "n": self.n,
            "tau": [self.params.tau.real, self.params.tau.imag],
            "eta": [self.params.eta.real, self.params.eta.imag],
            "entries": [
                {"i": i, "j": j, "relation": str(entries[(i, j)])} for i, j in self.pairs
            ],
            "independent_basis": [list(p) for p in self.independent_basis],
            "basis_size": self.rank,
        }


def row_reduce(rows: np.ndarray, tol: float = PIVOT_TOL) -> list[int]:
    """Indices of a maximal independent subset of ``rows``, chosen greedily.

    Gaussian elimination on max-normalised rows; a row is independent when
    its residual after elimination has an entry above ``tol``.
    """
    rows = np.asarray(rows, dtype=complex)
    basis: list[tuple[int, np.ndarray]] = []  # (pivot column, row with pivot 1)
    keep = []
    for k, row in enumerate(rows):
        scale = np.max(np.abs(row)) if row.size else 0.0
        if scale == 0:
            continue
        r = row / scale
        for col, b in basis:
            r = r - r[col] * b
        col = int(np.argmax(np.abs(r)))
        if abs(r[col]) > tol:
            basis.append((col, r / r[col]))
            keep.append(k)
    return keep


def sklyanin_relations(
    params: SklyaninParams,
    cfg: SeriesConfig = DEFAULT_CONFIG,
    *,
    zero_floor: float = ZERO_FLOOR,
    pivot_tol: float = PIVOT_TOL,
) -> RelationTable:
    """Build all n(n-1) ordered-pair relations and an independent subset."""
    n, tau, eta = params.n, params.tau, params.eta
    th_plus = [eval_theta_r(eta, r, n, tau, cfg) for r in range(n)]
    th_minus = [eval_theta_r(-eta, r, n, tau, cfg) for r in range(n)]
    for r in range(n):
        for label, val, arg in (("eta", th_plus[r], eta), ("-eta", th_minus[r], -eta)):
            if abs(val) < zero_floor:
                raise SingularCoefficient(
                    f"theta_{r}({label}) = {abs(val):.2e} vanishes for n={n}, "
                    f"tau={tau}, eta={eta}; eta is not generic"
                )
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    matrix = np.zeros((len(pairs), n * n), dtype=complex)
    for k, (i, j) in enumerate(pairs):
        for r in range(n):
            c = 1 / (th_plus[r] * th_minus[(j - i - r) % n])
            a, b = (j - r) % n, (i + r) % n
            matrix[k, a * n + b] += c
    basis = row_reduce(matrix, pivot_tol)
    matrix.setflags(write=False)
    return RelationTable(
        params=params,
        pairs=tuple(pairs),
        matrix=matrix,
        independent_basis=tuple(pairs[k] for k in basis),
    )
