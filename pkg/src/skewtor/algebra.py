"""Free unital *-algebra on starred generators.

Coefficients live in the Laurent ring C[q, 1/q, mu, 1/mu], where ``q`` stands
for exp(2*pi*i*theta) and ``mu`` for a positive real parameter.  Both are kept
formal so that identities valid for every (theta, mu) can be checked exactly.

A polynomial is stored as a flat map ``(word, q_power, mu_power) -> complex``;
the empty word is the unit ``e``.
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "Generator",
    "Word",
    "Coefficient",
    "NCPolynomial",
    "U",
    "U_STAR",
    "V",
    "V_STAR",
    "TORUS_GENERATORS",
    "x",
    "gen",
    "word",
    "word_str",
    "substitute",
    "parse_polynomial",
    "parse_relations",
    "ParseError",
    "UnmappedGenerator",
]


class ParseError(ValueError):
    pass


class UnmappedGenerator(KeyError):
    pass


@dataclass(frozen=True, order=True)
class Generator:
    """A generator symbol; ``starred`` flips under the involution.

    Family ``"t"`` holds the torus generators (base 1 is u, base 2 is v).
    Family ``"x"`` holds x1, x2, ... with x_{2b-1} = (b, False) and
    x_{2b} = (b, True), so that star pairs x1 with x2 and x3 with x4.
    """

    family: str
    base_index: int
    starred: bool = False

    def star(self) -> "Generator":
        return replace(self, starred=not self.starred)

    @property
    def name(self) -> str:
        if self.family == "t":
            return "uv"[self.base_index - 1] + ("*" if self.starred else "")
        return f"x{2 * self.base_index - 1 + int(self.starred)}"

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Generator({self.name})"


U = Generator("t", 1)
U_STAR = Generator("t", 1, True)
V = Generator("t", 2)
V_STAR = Generator("t", 2, True)
TORUS_GENERATORS = (U, U_STAR, V, V_STAR)


def x(k: int) -> Generator:
    """The generator x_k (k >= 1)."""
    if k < 1:
        raise ValueError(f"x-generators are numbered from 1, got {k}")
    return Generator("x", (k + 1) // 2, k % 2 == 0)


_NAMED = {"u": U, "u*": U_STAR, "v": V, "v*": V_STAR}


def gen(name: str) -> Generator:
    name = name.strip()
    if name in _NAMED:
        return _NAMED[name]
    m = re.fullmatch(r"x(\d+)", name)
    if m:
        return x(int(m.group(1)))
    raise ParseError(f"unknown generator {name!r}")


Word = tuple  # tuple[Generator, ...]; () is the unit


def word(*names: str) -> Word:
    """``word("u", "v*")`` -> (u, v*)."""
    return tuple(gen(n) for n in names)


def word_str(w: Word) -> str:
    return " ".join(g.name for g in w) if w else "e"


def _word_key(w: Word):
    return (len(w), w)


# ---------------------------------------------------------------------------
# scalars


@dataclass(frozen=True)
class Coefficient:
    """A single scalar monomial ``value * q**q_power * mu**mu_power``."""

    value: complex = 1
    q_power: int = 0
    mu_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))

    def __mul__(self, other):
        if isinstance(other, Coefficient):
            return Coefficient(
                self.value * other.value,
                self.q_power + other.q_power,
                self.mu_power + other.mu_power,
            )
        if isinstance(other, (int, float, complex)):
            return Coefficient(self.value * other, self.q_power, self.mu_power)
        return NotImplemented

    __rmul__ = __mul__

    def conj(self) -> "Coefficient":
        # conj(exp(2 pi i theta)) = 1/q; mu is real
        return Coefficient(self.value.conjugate(), -self.q_power, self.mu_power)

    def inverse(self) -> "Coefficient":
        if self.value == 0:
            raise ZeroDivisionError("zero coefficient has no inverse")
        return Coefficient(1 / self.value, -self.q_power, -self.mu_power)

    def evaluate(self, q: complex, mu: float) -> complex:
        return self.value * q**self.q_power * mu**self.mu_power

    def is_close(self, other: "Coefficient", tol: float = 0.0) -> bool:
        if (self.q_power, self.mu_power) != (other.q_power, other.mu_power):
            return False
        if tol == 0:
            return self.value == other.value
        return abs(self.value - other.value) <= tol * max(1.0, abs(other.value))

    def as_polynomial(self) -> "NCPolynomial":
        return NCPolynomial({((), self.q_power, self.mu_power): self.value})

    def __str__(self) -> str:
        return str(self.as_polynomial())


Scalar = Union[int, float, complex, Coefficient]


# ---------------------------------------------------------------------------
# polynomials


class NCPolynomial:
    """Element of the free algebra with Laurent coefficients in q and mu.

    Instances are treated as immutable values.  Zero coefficients are never
    stored, so ``bool(p)`` is false exactly for the zero polynomial.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, complex] | None = None):
        clean = {}
        if terms:
            for key, c in terms.items():
                c = complex(c)
                if c != 0:
                    clean[key] = c
        self._terms = dict(sorted(clean.items(), key=lambda kv: _term_key(kv[0])))
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls) -> "NCPolynomial":
        return cls()

    @classmethod
    def unit(cls) -> "NCPolynomial":
        return cls({((), 0, 0): 1})

    @classmethod
    def monomial(cls, w: Iterable[Generator], coeff: Scalar = 1) -> "NCPolynomial":
        c = coeff if isinstance(coeff, Coefficient) else Coefficient(coeff)
        return cls({(tuple(w), c.q_power, c.mu_power): c.value})

    @classmethod
    def generator(cls, g: Generator) -> "NCPolynomial":
        return cls.monomial((g,))

    @classmethod
    def parse(cls, text: str) -> "NCPolynomial":
        return parse_polynomial(text)

    # inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[tuple, complex]]:
        return iter(self._terms.items())

    def words(self) -> list[Word]:
        seen = []
        for w, _, _ in self._terms:
            if not seen or seen[-1] != w:
                seen.append(w)
        return seen

    def generators(self) -> set[Generator]:
        return {g for w, _, _ in self._terms for g in w}

    def coefficient(self, w: Word) -> "NCPolynomial":
        """Scalar (degree-0) polynomial multiplying the word ``w``."""
        w = tuple(w)
        return NCPolynomial({((), a, b): c for (v, a, b), c in self._terms.items() if v == w})

    def scalar_monomial(self) -> Coefficient | None:
        """If this is a single scalar term c*q^a*mu^b, return it."""
        if len(self._terms) != 1:
            return None
        (w, a, b), c = next(iter(self._terms.items()))
        if w:
            return None
        return Coefficient(c, a, b)

    def degrees(self) -> set[int]:
        return {len(w) for w, _, _ in self._terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        d = self.degrees()
        if degree is None:
            return len(d) <= 1
        return d <= {degree}

    def mu_powers(self) -> set[int]:
        return {b for _, _, b in self._terms}

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "NCPolynomial":
        if isinstance(other, NCPolynomial):
            return other
        if isinstance(other, Coefficient):
            return other.as_polynomial()
        if isinstance(other, (int, float, complex)):
            return NCPolynomial({((), 0, 0): other})
        if isinstance(other, Generator):
            return NCPolynomial.generator(other)
        raise TypeError(f"cannot use {type(other).__name__} as a polynomial")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return NCPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return NCPolynomial({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out: dict = {}
        for (w1, a1, b1), c1 in self._terms.items():
            for (w2, a2, b2), c2 in other._terms.items():
                k = (w1 + w2, a1 + a2, b1 + b2)
                out[k] = out.get(k, 0) + c1 * c2
        return NCPolynomial(out)

    def __rmul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return other * self

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined in the free algebra")
        out = NCPolynomial.unit()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, float, complex, Coefficient, Generator)):
            other = self._coerce(other)
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def is_close(self, other: "NCPolynomial", tol: float = 0.0) -> bool:
        return not (self - other).chop(tol)

    def chop(self, tol: float) -> "NCPolynomial":
        """Drop terms whose complex value has magnitude <= tol."""
        return NCPolynomial({k: c for k, c in self._terms.items() if abs(c) > tol})

    # involution and specialisations -------------------------------------
    def star(self) -> "NCPolynomial":
        """Conjugate-linear anti-automorphism: reverse words, star letters."""
        return NCPolynomial(
            {
                (tuple(g.star() for g in reversed(w)), -a, b): c.conjugate()
                for (w, a, b), c in self._terms.items()
            }
        )

    def specialize(self, *, q_one: bool = False, mu_one: bool = False) -> "NCPolynomial":
        """Set q = 1 (theta = 0) and/or mu = 1 by dropping the exponents."""
        out: dict = {}
        for (w, a, b), c in self._terms.items():
            k = (w, 0 if q_one else a, 0 if mu_one else b)
            out[k] = out.get(k, 0) + c
        return NCPolynomial(out)

    def rescale_unit(self, mu_power: int = -1) -> "NCPolynomial":
        """Replace the unit e by mu**mu_power * e (the scaled unit)."""
        return NCPolynomial(
            {(w, a, b + (mu_power if not w else 0)): c for (w, a, b), c in self._terms.items()}
        )

    def evaluate_coefficients(self, q: complex, mu: float) -> dict[Word, complex]:
        """Instantiate q and mu numerically; returns word -> complex value."""
        out: dict = {}
        for (w, a, b), c in self._terms.items():
            out[w] = out.get(w, 0) + c * q**a * mu**b
        return out

    def monic(self, order_key=_word_key) -> "NCPolynomial":
        """Divide by the coefficient of the leading word when it is a unit."""
        if not self:
            return self
        lead = max(self.words(), key=order_key)
        c = self.coefficient(lead).scalar_monomial()
        if c is None:
            return self
        return self * c.inverse()

    # printing -----------------------------------------------------------
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        # leading (largest) word first, so relations read as "lead - rest"
        items = sorted(self._terms.items(), key=lambda kv: (len(kv[0][0]), kv[0][0]), reverse=True)
        for i, ((w, a, b), c) in enumerate(items):
            neg, body = _format_term(w, a, b, c)
            if i == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"NCPolynomial({str(self)!r})"


def _term_key(key):
    w, a, b = key
    return (len(w), w, a, b)


def _fmt_real(v: float) -> str:
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def _format_term(w: Word, a: int, b: int, c: complex) -> tuple[bool, str]:
    re_, im = c.real, c.imag
    neg = (im == 0 and re_ < 0) or (re_ == 0 and im < 0)
    if neg:
        c = -c
        re_, im = c.real, c.imag
    factors = []
    if im == 0:
        if re_ != 1:
            factors.append(_fmt_real(re_))
    elif re_ == 0:
        factors.append("i" if im == 1 else _fmt_real(im) + "i")
    else:
        sign = "+" if im >= 0 else "-"
        factors.append(f"({_fmt_real(re_)}{sign}{_fmt_real(abs(im))}i)")
    if a:
        factors.append("q" if a == 1 else f"q^{a}")
    if b:
        factors.append("mu" if b == 1 else f"mu^{b}")
    factors.append(word_str(w) if w else "e")
    return neg, " ".join(factors)


# ---------------------------------------------------------------------------
# homomorphisms


def substitute(p: NCPolynomial, images: Mapping[Generator, NCPolynomial]) -> NCPolynomial:
    """Extend a generator assignment to an algebra homomorphism and apply it.

    Coefficients pass through unchanged.
    """
    images = {g: NCPolynomial._coerce(im) for g, im in images.items()}
    out = NCPolynomial.zero()
    cache: dict = {}
    for (w, a, b), c in p.items():
        if w not in cache:
            img = NCPolynomial.unit()
            for g in w:
                try:
                    img = img * images[g]
                except KeyError:
                    raise UnmappedGenerator(f"no image for generator {g.name}") from None
            cache[w] = img
        out = out + cache[w] * Coefficient(c, a, b)
    return out


# ---------------------------------------------------------------------------
# parsing
#
#   relation := expr ('=' expr)?
#   expr     := ['+' | '-'] term (('+' | '-') term)*
#   term     := factor+                      (juxtaposition is the product)
#   factor   := number | 'i' | q[^k] | mu[^k] | generator | 'e' | '(' expr ')'

_TOKEN = re.compile(
    r"""\s*(?:
    (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?i?)
  | (?P<mu>mu(?:\^\(?(?P<mue>[-+]?\d+)\)?)?)(?!\w)
  | (?P<q>q(?:\^\(?(?P<qe>[-+]?\d+)\)?)?)(?!\w)
  | (?P<gen>x\d+|[uv]\*?)(?!\w)
  | (?P<unit>e)(?!\w)
  | (?P<imag>i)(?!\w)
  | (?P<op>[-+()=])
    )""",
    re.VERBOSE,
)
_KINDS = ("num", "mu", "q", "gen", "unit", "imag", "op")


def _tokenize(text: str) -> list[tuple[str, str, str | None]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {text[pos:]!r} (separate factors with spaces)")
        kind = next(k for k in _KINDS if m.group(k) is not None)
        extra = m.group("mue") if kind == "mu" else m.group("qe") if kind == "q" else None
        tokens.append((kind, m.group(kind), extra))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def relation(self) -> NCPolynomial:
        lhs = self.expr()
        if self.peek()[1] == "=":
            self.take()
            rhs = self.expr()
            lhs = lhs - rhs
        if self.i != len(self.tokens):
            raise ParseError(f"trailing input in {self.text!r}")
        return lhs

    def expr(self) -> NCPolynomial:
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        out = self.term() * sign
        while self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            out = out + self.term() * sign
        return out

    def term(self) -> NCPolynomial:
        factors = []
        while True:
            kind, val, _ = self.peek()
            if kind is None or (kind == "op" and val != "("):
                break
            factors.append(self.factor())
        if not factors:
            raise ParseError(f"expected a term in {self.text!r}")
        out = factors[0]
        for f in factors[1:]:
            out = out * f
        return out

    def factor(self) -> NCPolynomial:
        kind, val, extra = self.take()
        if kind == "num":
            if val.endswith("i"):
                return NCPolynomial._coerce(complex(0, float(val[:-1])))
            return NCPolynomial._coerce(float(val))
        if kind == "imag":
            return NCPolynomial._coerce(1j)
        if kind == "q":
            return Coefficient(1, int(extra) if extra else 1, 0).as_polynomial()
        if kind == "mu":
            return Coefficient(1, 0, int(extra) if extra else 1).as_polynomial()
        if kind == "gen":
            return NCPolynomial.generator(gen(val))
        if kind == "unit":
            return NCPolynomial.unit()
        if val == "(":
            inner = self.expr()
            if self.take()[1] != ")":
                raise ParseError(f"unbalanced parenthesis in {self.text!r}")
            return inner
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_polynomial(text: str) -> NCPolynomial:
    """Parse the text grammar, e.g. ``"v u - q u v"`` or ``"u u* = mu^-1 e"``.

    An ``=`` sign is allowed; the result is then lhs - rhs.
    """
    if not text.strip():
        raise ParseError("empty polynomial")
    return _Parser(text).relation()


def parse_relations(text: str) -> list[NCPolynomial]:
    """Parse a ``;``- or newline-separated list of relations."""
    chunks = [c for c in re.split(r"[;\n]", text) if c.strip()]
    return [parse_polynomial(c) for c in chunks]
