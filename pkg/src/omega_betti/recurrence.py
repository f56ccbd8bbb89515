"""Linear-recurrence detection for integer sequences.

Berlekamp–Massey over Q finds the shortest linear feedback shift register
generating the sequence; it is accepted only when the data pin it down.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .poly import Polynomial


def berlekamp_massey(seq: Sequence) -> tuple:
    """Return ``(C, L)``: connection polynomial coefficients ``C[0] = 1`` and length L.

    For every ``n >= L``: ``sum_{i=0}^{L} C[i] * seq[n - i] == 0``.
    """
    s = [Fraction(x) for x in seq]
    C = [Fraction(1)]
    B = [Fraction(1)]
    L, m, b = 0, 1, Fraction(1)
    for n in range(len(s)):
        d = s[n]
        for i in range(1, L + 1):
            if i < len(C):
                d += C[i] * s[n - i]
        if d == 0:
            m += 1
            continue
        coef = d / b
        T = list(C)
        need = len(B) + m
        if len(C) < need:
            C.extend([Fraction(0)] * (need - len(C)))
        for i, bi in enumerate(B):
            C[i + m] -= coef * bi
        if 2 * L <= n:
            L = n + 1 - L
            B, b, m = T, d, 1
        else:
            m += 1
    C = C[: L + 1] + [Fraction(0)] * max(0, L + 1 - len(C))
    return C, L


def _trim(coeffs: list) -> list:
    out = list(coeffs)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def series_coefficients(num: Sequence, den: Sequence, count: int) -> list:
    """First ``count`` coefficients of num(t)/den(t); requires den[0] != 0."""
    den = [Fraction(c) for c in den]
    num = [Fraction(c) for c in num]
    out = []
    for k in range(count):
        v = num[k] if k < len(num) else Fraction(0)
        for i in range(1, min(k, len(den) - 1) + 1):
            v -= den[i] * out[k - i]
        out.append(v / den[0])
    return out


@dataclass(frozen=True)
class RecurrenceResult:
    """b_i = c_1 b_(i-1) + ... + c_d b_(i-d) for all i >= offset."""

    coefficients: tuple  # c_1..c_d as Fractions
    offset: int
    numerator: tuple  # integer coefficients, ascending powers of t
    denominator: tuple

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def closed_form_strings(self) -> tuple:
        return poly_in_t(self.numerator), poly_in_t(self.denominator)

    def expand(self, count: int) -> list:
        return series_coefficients(self.numerator, self.denominator, count)

    def to_json(self) -> dict:
        from .poly import rational_string

        num, den = self.closed_form_strings()
        return {
            "coefficients": [rational_string(c) for c in self.coefficients],
            "order": self.order,
            "valid_from": self.offset,
            "closed_form": {"num": num, "den": den},
        }


def poly_in_t(coeffs: Sequence) -> str:
    terms = {(k,): c for k, c in enumerate(coeffs) if c}
    return str(Polynomial(("t",), terms))


def recurrence_probe(betti: Sequence[int]) -> RecurrenceResult | None:
    """Detect a linear recurrence and the rational generating function it implies.

    The shortest register (length L, recurrence order d <= L) is accepted
    only if ``len(betti) >= 2 L`` and it is confirmed on at least ``2 d``
    terms past its start; the closed form must regenerate every input term.
    """
    seq = [Fraction(x) for x in betti]
    N = len(seq)
    if N < 4:
        raise ValueError("need at least 4 terms to probe for a recurrence")
    C, L = berlekamp_massey(seq)
    C = _trim(C)
    d = len(C) - 1
    if 2 * L > N or N - L < 2 * d:
        return None
    # numerator = (series * C) truncated below t^L
    num = []
    for k in range(L):
        v = Fraction(0)
        for i in range(min(k, d) + 1):
            v += C[i] * seq[k - i]
        num.append(v)
    num = _trim(num) if num else [Fraction(0)]
    scale = lcm(*(c.denominator for c in num + C))
    num_i = tuple(int(c * scale) for c in num)
    den_i = tuple(int(c * scale) for c in C)
    if series_coefficients(num_i, den_i, N) != seq:
        return None
    coeffs = tuple(-c for c in C[1:])
    return RecurrenceResult(coeffs, L, num_i, den_i)
