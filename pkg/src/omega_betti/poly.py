"""Exact multivariate polynomials over the rationals.

A :class:`Polynomial` is an immutable map from exponent tuples to nonzero
:class:`fractions.Fraction` coefficients, together with the ordered tuple of
variable names it lives over.  Everything else in the package is built on
top of this type.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch

#: Degree of the zero polynomial.  Compares below every integer degree.
DEGREE_OF_ZERO = float("-inf")

Monomial = tuple  # exponent vector, one non-negative int per variable


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, str):
        return Fraction(c)
    return Fraction(c)


def degrevlex_key(exps: Monomial, weights: Sequence[int] | None = None) -> tuple:
    """Sort key for (weighted) degree reverse lexicographic order.

    A larger key means a larger monomial.
    """
    if weights is None:
        deg = sum(exps)
    else:
        deg = sum(w * e for w, e in zip(weights, exps))
    return (deg,) + tuple(-e for e in reversed(exps))


@dataclass(frozen=True)
class MonomialOrder:
    """Degrevlex or weighted degrevlex, extended position-over-term to modules.

    In the module extension basis index 0 has the highest priority.
    """

    weights: tuple | None = None

    def __post_init__(self):
        if self.weights is not None:
            w = tuple(int(x) for x in self.weights)
            if any(x <= 0 for x in w):
                raise ValueError("monomial order weights must be strictly positive")
            object.__setattr__(self, "weights", w)

    @property
    def kind(self) -> str:
        return "degrevlex" if self.weights is None else "weighted-degrevlex"

    def key(self, exps: Monomial) -> tuple:
        return degrevlex_key(exps, self.weights)

    def term_key(self, term: tuple) -> tuple:
        pos, exps = term
        return (-pos,) + degrevlex_key(exps, self.weights)

    def degree(self, exps: Monomial) -> int:
        if self.weights is None:
            return sum(exps)
        return sum(w * e for w, e in zip(self.weights, exps))


DEGREVLEX = MonomialOrder()


class Polynomial:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None):
        variables = tuple(variables)
        clean = {}
        if terms:
            s = len(variables)
            for exps, c in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != s:
                    raise DimensionMismatch(
                        f"monomial {exps} does not match {s} variables"
                    )
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = _as_fraction(c)
                if c:
                    clean[exps] = clean.get(exps, 0) + c
                    if not clean[exps]:
                        del clean[exps]
        self.variables = variables
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "Polynomial":
        # trusted constructor: terms already normalized
        p = object.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._hash = None
        return p

    # constructors -----------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, variables: Sequence[str], c) -> "Polynomial":
        variables = tuple(variables)
        c = _as_fraction(c)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Monomial, c=1) -> "Polynomial":
        return cls(variables, {tuple(exps): c})

    @classmethod
    def variable(cls, variables: Sequence[str], name) -> "Polynomial":
        variables = tuple(variables)
        i = variables.index(name) if isinstance(name, str) else int(name)
        exps = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls._raw(variables, {exps: Fraction(1)})

    # basic queries ----------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or list(self.terms) == [(0,) * self.nvars]

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    @property
    def degree(self):
        if not self.terms:
            return DEGREE_OF_ZERO
        return max(sum(e) for e in self.terms)

    def weighted_degree(self, weights: Sequence[int]):
        if not self.terms:
            return DEGREE_OF_ZERO
        return max(sum(w * e for w, e in zip(weights, exps)) for exps in self.terms)

    def is_homogeneous(self, weights: Sequence[int] | None = None) -> bool:
        weights = weights or (1,) * self.nvars
        degs = {sum(w * e for w, e in zip(weights, exps)) for exps in self.terms}
        return len(degs) <= 1

    def items(self, order: MonomialOrder = DEGREVLEX) -> list:
        """Terms as ``(exps, coeff)`` pairs, largest first under ``order``."""
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder = DEGREVLEX) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self.terms, key=order.key)
        return exps, self.terms[exps]

    # arithmetic -------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.variables != other.variables:
            raise DimensionMismatch(
                f"variable mismatch: {self.variables} vs {other.variables}"
            )

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m, 0) + c
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return Polynomial._raw(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.variables, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial.zero(self.variables)
            return Polynomial._raw(
                self.variables, {m: c * other for m, c in self.terms.items()}
            )
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = terms.get(m, 0) + c1 * c2
                if v:
                    terms[m] = v
                else:
                    del terms[m]
        return Polynomial._raw(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_term(self, exps: Monomial, c) -> "Polynomial":
        """Multiply by the single term ``c * x^exps``."""
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero(self.variables)
        return Polynomial._raw(
            self.variables,
            {tuple(a + b for a, b in zip(m, exps)): v * c for m, v in self.terms.items()},
        )

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    # calculus and evaluation -----------------------------------------

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise DimensionMismatch(
                f"point has {len(point)} coordinates, polynomial has {self.nvars} variables"
            )
        pt = [_as_fraction(a) for a in point]
        total = Fraction(0)
        for exps, c in self.terms.items():
            v = c
            for a, e in zip(pt, exps):
                if e:
                    v *= a**e
            total += v
        return total

    def derivative(self, i: int) -> "Polynomial":
        terms = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e:
                m = exps[:i] + (e - 1,) + exps[i + 1 :]
                terms[m] = c * e
        return Polynomial._raw(self.variables, terms)

    def hasse(self, alpha: Monomial) -> "Polynomial":
        """Divided-power derivative: the coefficient of t^alpha in p(x + t)."""
        alpha = tuple(alpha)
        if len(alpha) != self.nvars:
            raise DimensionMismatch(
                f"multi-index {alpha} does not match {self.nvars} variables"
            )
        terms = {}
        for exps, c in self.terms.items():
            if all(e >= a for e, a in zip(exps, alpha)):
                k = 1
                for e, a in zip(exps, alpha):
                    if a:
                        k *= comb(e, a)
                terms[tuple(e - a for e, a in zip(exps, alpha))] = c * k
        return Polynomial._raw(self.variables, terms)

    def translate(self, point: Sequence) -> "Polynomial":
        """Return q with q(x) = p(x + point)."""
        if len(point) != self.nvars:
            raise DimensionMismatch(
                f"point has {len(point)} coordinates, polynomial has {self.nvars} variables"
            )
        pt = [_as_fraction(a) for a in point]
        terms: dict = {}
        for exps, c in self.terms.items():
            # (x_i + a_i)^e_i = sum_k C(e_i, k) a_i^(e_i - k) x_i^k
            factors = []
            for a, e in zip(pt, exps):
                factors.append(
                    [(k, comb(e, k) * a ** (e - k)) for k in range(e + 1) if a or k == e]
                )
            for combo in product(*factors):
                v = c
                for _, w in combo:
                    v *= w
                if v:
                    m = tuple(k for k, _ in combo)
                    v = terms.get(m, 0) + v
                    if v:
                        terms[m] = v
                    else:
                        del terms[m]
        return Polynomial._raw(self.variables, terms)

    def remainder(self, f: "Polynomial", order: MonomialOrder = DEGREVLEX) -> "Polynomial":
        """Normal form modulo the principal ideal (f).

        Leading terms are cancelled by multiples of the leading term of ``f``
        until no term is divisible by it; the result is zero iff f divides p.
        """
        self._check(f)
        if not f.terms:
            return self
        lm, lc = f.leading_term(order)
        rest = [(m, c / lc) for m, c in f.terms.items() if m != lm]
        work = dict(self.terms)
        rem = {}
        key = order.key
        while work:
            m = max(work, key=key)
            c = work.pop(m)
            if all(a >= b for a, b in zip(m, lm)):
                q = tuple(a - b for a, b in zip(m, lm))
                for m2, c2 in rest:
                    t = tuple(a + b for a, b in zip(m2, q))
                    v = work.get(t, 0) - c * c2
                    if v:
                        work[t] = v
                    else:
                        work.pop(t, None)
            else:
                rem[m] = c
        return Polynomial._raw(self.variables, rem)

    # printing ---------------------------------------------------------

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for exps, c in self.items():
            mono = _monomial_string(self.variables, exps)
            neg = c < 0
            a = -c if neg else c
            if mono == "1":
                body = _rational_string(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_rational_string(a)}*{mono}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    __str__ = to_string

    def __repr__(self):
        return f"Polynomial({self.to_string()!r}, {list(self.variables)!r})"


def _rational_string(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def rational_string(c) -> str:
    """Canonical ``p/q`` text of a rational (``p`` alone when integral)."""
    return _rational_string(Fraction(c))


def _monomial_string(variables: Sequence[str], exps: Monomial) -> str:
    parts = []
    for v, e in zip(variables, exps):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) if parts else "1"


def monomial_string(variables: Sequence[str], exps: Monomial) -> str:
    return _monomial_string(variables, exps)


# module-level operations ----------------------------------------------


def evaluate(p: Polynomial, point: Sequence) -> Fraction:
    return p.evaluate(point)


def hasse_coefficient(p: Polynomial, alpha: Monomial) -> Polynomial:
    return p.hasse(alpha)


def translate(p: Polynomial, point: Sequence) -> Polynomial:
    return p.translate(point)


def parse_point(coords: Iterable) -> tuple:
    """Coordinates given as ints, Fractions or ``"p/q"`` strings."""
    return tuple(_as_fraction(c) for c in coords)


@lru_cache(maxsize=None)
def monomials_of_degree(s: int, d: int) -> tuple:
    """All exponent vectors of total degree ``d``, in descending lex order."""
    if s == 0:
        return ((),) if d == 0 else ()
    out = []
    for e in range(d, -1, -1):
        for rest in monomials_of_degree(s - 1, d - e):
            out.append((e,) + rest)
    return tuple(out)


def monomials_up_to(s: int, lo: int, hi: int) -> tuple:
    """Exponent vectors with ``lo <= |alpha| <= hi``: by degree, then lex."""
    out = []
    for d in range(lo, hi + 1):
        out.extend(monomials_of_degree(s, d))
    return tuple(out)


def monomials_of_weighted_degree(weights: Sequence[int], d: int) -> tuple:
    """Exponent vectors ``e`` with ``weights . e == d``."""
    return _weighted(tuple(weights), d)


@lru_cache(maxsize=None)
def _weighted(weights: tuple, d: int) -> tuple:
    if not weights:
        return ((),) if d == 0 else ()
    w = weights[0]
    out = []
    for e in range(d // w, -1, -1):
        for rest in _weighted(weights[1:], d - e * w):
            out.append((e,) + rest)
    return tuple(out)
