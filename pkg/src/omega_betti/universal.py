"""The free module Omega_n(S) of n-th order differentials over S = Q[x_1..x_s].

Elements are stored as coordinate maps over the basis monomials alpha with
``1 <= |alpha| <= n``.  Two coordinate systems are supported:

* ``DX``: coordinates against ``dx^alpha``, where ``dx_i = 1(x)x_i - x_i(x)1``.
  The universal derivation lands here directly as a truncated Taylor series.
* ``DN``: coordinates against ``d_n(x^alpha)``.

The change of basis between them is unitriangular over S.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, prod
from typing import Mapping, Sequence

from .errors import DimensionMismatch
from .poly import Polynomial, monomials_up_to, parse_point


class Convention(str, Enum):
    DX = "DX"
    DN = "DN"


@dataclass(frozen=True)
class OmegaBasis:
    """Basis monomials of Omega_n(S), ordered by total degree then lex."""

    n: int
    s: int
    monomials: tuple = field(compare=False, repr=False)
    index: dict = field(compare=False, repr=False)

    def __len__(self):
        return len(self.monomials)

    @property
    def rank(self) -> int:
        return len(self.monomials)


@lru_cache(maxsize=None)
def omega_basis(n: int, s: int) -> OmegaBasis:
    if n < 1 or s < 1:
        raise ValueError("order and variable count must be positive")
    mons = monomials_up_to(s, 1, n)
    return OmegaBasis(n, s, mons, {m: i for i, m in enumerate(mons)})


def dx_label(variables: Sequence[str], alpha) -> str:
    parts = []
    for v, e in zip(variables, alpha):
        if e == 1:
            parts.append(f"d{v}")
        elif e > 1:
            parts.append(f"d{v}^{e}")
    return "*".join(parts)


def dn_label(variables: Sequence[str], alpha) -> str:
    from .poly import monomial_string

    return f"d_n({monomial_string(variables, alpha)})"


@dataclass(frozen=True, eq=False)
class OmegaElement:
    basis: OmegaBasis
    convention: Convention
    variables: tuple
    coords: Mapping  # basis monomial -> nonzero Polynomial

    def __post_init__(self):
        clean = {}
        for alpha, p in self.coords.items():
            if alpha not in self.basis.index:
                raise ValueError(f"{alpha} is not a basis monomial of Omega_{self.basis.n}")
            if p.variables != self.variables:
                raise DimensionMismatch("coordinate over the wrong variables")
            if p:
                clean[alpha] = p
        object.__setattr__(self, "coords", clean)
        object.__setattr__(self, "variables", tuple(self.variables))

    @classmethod
    def zero(cls, basis, convention, variables):
        return cls(basis, Convention(convention), tuple(variables), {})

    def coordinate(self, alpha) -> Polynomial:
        return self.coords.get(tuple(alpha), Polynomial.zero(self.variables))

    def vector(self) -> list:
        """Coordinates as a list in basis order."""
        return [self.coordinate(a) for a in self.basis.monomials]

    def is_zero(self) -> bool:
        return not self.coords

    def _same(self, other):
        if (self.basis, self.convention, self.variables) != (
            other.basis,
            other.convention,
            other.variables,
        ):
            raise ValueError("elements live in different bases or conventions")

    def __add__(self, other: "OmegaElement"):
        self._same(other)
        coords = dict(self.coords)
        for a, p in other.coords.items():
            coords[a] = coords[a] + p if a in coords else p
        return OmegaElement(self.basis, self.convention, self.variables, coords)

    def __neg__(self):
        return OmegaElement(
            self.basis, self.convention, self.variables, {a: -p for a, p in self.coords.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, r) -> "OmegaElement":
        """Multiply by a rational or a polynomial of S."""
        return OmegaElement(
            self.basis, self.convention, self.variables, {a: p * r for a, p in self.coords.items()}
        )

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, OmegaElement):
            return NotImplemented
        return (
            self.basis == other.basis
            and self.convention == other.convention
            and self.variables == other.variables
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.basis, self.convention, frozenset(self.coords.items())))

    def to_string(self) -> str:
        label = dx_label if self.convention is Convention.DX else dn_label
        parts = [
            f"({self.coords[a]})*{label(self.variables, a)}"
            for a in self.basis.monomials
            if a in self.coords
        ]
        return " + ".join(parts) if parts else "0"

    __str__ = to_string


def _check_basis(g: Polynomial, basis: OmegaBasis):
    if g.nvars != basis.s:
        raise DimensionMismatch(
            f"polynomial has {g.nvars} variables, basis expects {basis.s}"
        )


def _sub_multi_indices(exps: tuple, n: int):
    """All alpha <= exps componentwise with 1 <= |alpha| <= n."""
    ranges = [range(min(e, n) + 1) for e in exps]

    def rec(i, budget):
        if i == len(ranges):
            yield ()
            return
        for a in ranges[i]:
            if a > budget:
                break
            for rest in rec(i + 1, budget - a):
                yield (a,) + rest

    for alpha in rec(0, n):
        if any(alpha):
            yield alpha


def dn_taylor(g: Polynomial, basis: OmegaBasis) -> OmegaElement:
    """d_n(g) in the DX basis: the Taylor expansion g(x + dx) - g(x) mod I^(n+1).

    The coordinate at alpha is the divided-power derivative of g.
    """
    _check_basis(g, basis)
    n = basis.n
    acc: dict = {}
    for exps, c in g.terms.items():
        for alpha in _sub_multi_indices(exps, n):
            k = prod(comb(e, a) for e, a in zip(exps, alpha) if a)
            m = tuple(e - a for e, a in zip(exps, alpha))
            slot = acc.setdefault(alpha, {})
            v = slot.get(m, 0) + c * k
            if v:
                slot[m] = v
            else:
                del slot[m]
    coords = {a: Polynomial._raw(g.variables, t) for a, t in acc.items() if t}
    return OmegaElement(basis, Convention.DX, g.variables, coords)


def _add_into(acc: dict, alpha, m, c):
    slot = acc.setdefault(alpha, {})
    v = slot.get(m, 0) + c
    if v:
        slot[m] = v
    else:
        del slot[m]


class _RecursiveDn:
    """d_n of monomials in the DN basis, by the n-th order Leibniz identity.

    For |gamma| > n the monomial x^gamma is split into n + 1 nonconstant
    factors r_0..r_n and

        D(r_0...r_n) = sum_{J, 1<=|J|<=n} (-1)^(|J|-1) r_J D(r_{not J})

    is applied; every D on the right has an argument of smaller degree.
    """

    def __init__(self, basis: OmegaBasis):
        self.basis = basis
        self.memo: dict = {}

    def monomial(self, gamma: tuple) -> dict:
        # returns {alpha: {exps: coeff}}
        if gamma in self.memo:
            return self.memo[gamma]
        n, s = self.basis.n, self.basis.s
        deg = sum(gamma)
        if deg == 0:
            out: dict = {}
        elif deg <= n:
            out = {gamma: {(0,) * s: Fraction(1)}}
        else:
            flat = [i for i, e in enumerate(gamma) for _ in range(e)]
            factors = []
            for i in flat[:n]:
                factors.append(tuple(1 if j == i else 0 for j in range(s)))
            last = [0] * s
            for i in flat[n:]:
                last[i] += 1
            factors.append(tuple(last))
            idx = range(n + 1)
            out = {}
            for size in range(1, n + 1):
                sign = 1 if size % 2 == 1 else -1
                for J in combinations(idx, size):
                    coef_mono = [0] * s
                    rest = [0] * s
                    for j in idx:
                        target = coef_mono if j in J else rest
                        for k in range(s):
                            target[k] += factors[j][k]
                    sub = self.monomial(tuple(rest))
                    cm = tuple(coef_mono)
                    for alpha, poly in sub.items():
                        for m, c in poly.items():
                            _add_into(out, alpha, tuple(a + b for a, b in zip(m, cm)), sign * c)
            out = {a: t for a, t in out.items() if t}
        self.memo[gamma] = out
        return out


_recursive_cache: dict = {}


def dn_recursive(g: Polynomial, basis: OmegaBasis) -> OmegaElement:
    """d_n(g) in the DN basis, computed from the Leibniz identity alone."""
    _check_basis(g, basis)
    engine = _recursive_cache.setdefault(basis, _RecursiveDn(basis))
    acc: dict = {}
    for gamma, c in g.terms.items():
        for alpha, poly in engine.monomial(gamma).items():
            for m, v in poly.items():
                _add_into(acc, alpha, m, c * v)
    coords = {a: Polynomial._raw(g.variables, t) for a, t in acc.items() if t}
    return OmegaElement(basis, Convention.DN, g.variables, coords)


@lru_cache(maxsize=None)
def _dn_of_basis_in_dx(basis: OmegaBasis, beta: tuple) -> tuple:
    """DX coordinates of d_n(x^beta): binom(beta, alpha) x^(beta - alpha) at alpha."""
    out = []
    for alpha in _sub_multi_indices(beta, basis.n):
        k = prod(comb(b, a) for b, a in zip(beta, alpha) if a)
        out.append((alpha, tuple(b - a for b, a in zip(beta, alpha)), k))
    return tuple(out)


def convert_basis(el: OmegaElement, target) -> OmegaElement:
    """Rewrite ``el`` in the ``target`` convention (``"DX"`` or ``"DN"``)."""
    target = Convention(target)
    if el.convention is target:
        return el
    basis, variables = el.basis, el.variables
    if target is Convention.DX:
        acc: dict = {}
        for beta, p in el.coords.items():
            for alpha, shift, k in _dn_of_basis_in_dx(basis, beta):
                for m, c in p.terms.items():
                    _add_into(acc, alpha, tuple(a + b for a, b in zip(m, shift)), c * k)
        coords = {a: Polynomial._raw(variables, t) for a, t in acc.items() if t}
        return OmegaElement(basis, Convention.DX, variables, coords)
    # DX -> DN: back substitution from the top degree down
    work = {a: dict(p.terms) for a, p in el.coords.items()}
    result = {}
    for beta in reversed(basis.monomials):
        t = work.pop(beta, None)
        if not t:
            continue
        result[beta] = t
        for alpha, shift, k in _dn_of_basis_in_dx(basis, beta):
            if alpha == beta:
                continue
            for m, c in t.items():
                _add_into(work, alpha, tuple(a + b for a, b in zip(m, shift)), -c * k)
    coords = {a: Polynomial._raw(variables, t) for a, t in result.items() if t}
    return OmegaElement(basis, Convention.DN, variables, coords)


def verify_identity(n: int, rs: Sequence[Polynomial]) -> bool:
    """Check the n-th order Leibniz identity for d_n on r_0..r_n exactly."""
    rs = list(rs)
    if len(rs) != n + 1:
        raise ValueError(f"need {n + 1} polynomials for order {n}, got {len(rs)}")
    variables = rs[0].variables
    for r in rs:
        if r.variables != variables:
            raise DimensionMismatch("all polynomials must share the same variables")
    basis = omega_basis(n, len(variables))
    one = Polynomial.constant(variables, 1)

    def product_of(indices):
        p = one
        for j in indices:
            p = p * rs[j]
        return p

    idx = range(n + 1)
    lhs = dn_taylor(product_of(idx), basis)
    rhs = OmegaElement.zero(basis, Convention.DX, variables)
    for size in range(1, n + 1):
        sign = 1 if size % 2 == 1 else -1
        for J in combinations(idx, size):
            rest = [j for j in idx if j not in J]
            rhs = rhs + dn_taylor(product_of(rest), basis).scale(product_of(J) * sign)
    return lhs == rhs


def in_m_omega(el: OmegaElement, point: Sequence) -> bool:
    """Is ``el`` in m*Omega_n(S) for the maximal ideal of ``point``?"""
    pt = parse_point(point)
    if len(pt) != el.basis.s:
        raise DimensionMismatch(f"point has {len(pt)} coordinates, expected {el.basis.s}")
    return all(p.evaluate(pt) == 0 for p in el.coords.values())
