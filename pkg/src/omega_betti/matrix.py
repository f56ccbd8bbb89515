"""Small dense matrices of polynomials, and exact rational echelon forms."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .poly import Polynomial


def det(rows: Sequence[Sequence[Polynomial]], variables) -> Polynomial:
    """Determinant by Laplace expansion over column subsets (O(2^r r) products)."""
    r = len(rows)
    if r == 0:
        return Polynomial.constant(variables, 1)
    if any(len(row) != r for row in rows):
        raise ValueError("determinant of a non-square matrix")
    # minors[mask] = det of rows[0..k-1] against the columns in mask, k = popcount
    minors = {0: Polynomial.constant(variables, 1)}
    for k in range(r):
        row = rows[k]
        nxt = {}
        for mask, m in minors.items():
            if not m:
                continue
            for j in range(r):
                bit = 1 << j
                if mask & bit or not row[j]:
                    continue
                # sign: number of chosen columns to the right of j
                above = bin(mask >> (j + 1)).count("1")
                term = m * row[j]
                if above % 2:
                    term = -term
                key = mask | bit
                nxt[key] = nxt[key] + term if key in nxt else term
        minors = nxt
    return minors.get((1 << r) - 1, Polynomial.zero(variables))


def matmul(a, b, variables, reduce: Callable | None = None) -> list:
    """Product of polynomial matrices given as lists of rows."""
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    zero = Polynomial.zero(variables)
    out = []
    for row in a:
        if len(row) != inner:
            raise ValueError("shape mismatch in matrix product")
        new = []
        for j in range(cols):
            acc = zero
            for k in range(inner):
                if row[k] and b[k][j]:
                    acc = acc + row[k] * b[k][j]
            new.append(reduce(acc) if reduce else acc)
        out.append(new)
    return out


def transpose(m: list, nrows: int | None = None) -> list:
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def columns_to_rows(cols: list, nrows: int) -> list:
    return [[c[i] for c in cols] for i in range(nrows)]


class Echelon:
    """Incremental row-echelon basis of rational vectors stored as dicts.

    Vectors are ``{key: Fraction}``; keys must be mutually comparable.
    """

    def __init__(self):
        self.pivots: dict = {}

    def reduce(self, v: dict) -> dict:
        v = {k: c for k, c in v.items() if c}
        while True:
            hits = [k for k in v if k in self.pivots]
            if not hits:
                return v
            k = max(hits)
            c = v[k]
            for k2, c2 in self.pivots[k].items():
                val = v.get(k2, 0) - c * c2
                if val:
                    v[k2] = val
                else:
                    v.pop(k2, None)

    def add(self, v: dict) -> bool:
        """Insert ``v``; return True when it increased the rank."""
        v = self.reduce(v)
        if not v:
            return False
        k = max(v)
        lead = v[k]
        self.pivots[k] = {k2: Fraction(c) / lead for k2, c in v.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rational_rank(vectors) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rank
