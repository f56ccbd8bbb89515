"""Gröbner bases and syzygies for submodules of free modules over Q[x_1..x_s].

Vectors are handled internally as flat term maps ``{(pos, exps): coeff}``.
The module order is position-over-term on top of (weighted) degrevlex with
basis index 0 ranked highest.

Syzygies follow Schreyer: every S-vector reduced to zero yields a relation
among Gröbner basis elements, and tracking each basis element as a
combination of the input generators pulls that relation back to the inputs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch
from .matrix import Echelon
from .poly import DEGREVLEX, MonomialOrder, Polynomial, monomials_of_weighted_degree


class FreeModuleVector:
    """Element of the free module S^rank, stored as {index: nonzero Polynomial}."""

    __slots__ = ("variables", "rank", "components")

    def __init__(self, variables: Sequence[str], rank: int, components=None):
        self.variables = tuple(variables)
        self.rank = int(rank)
        comps = {}
        if components:
            items = components.items() if isinstance(components, dict) else enumerate(components)
            for i, p in items:
                if not 0 <= i < self.rank:
                    raise DimensionMismatch(f"component index {i} outside rank {self.rank}")
                if p is None:
                    continue
                if not isinstance(p, Polynomial):
                    p = Polynomial.constant(self.variables, p)
                if p.variables != self.variables:
                    raise DimensionMismatch("component over the wrong variables")
                if p:
                    comps[i] = p
        self.components = comps

    @classmethod
    def from_list(cls, entries: Sequence[Polynomial]) -> "FreeModuleVector":
        entries = list(entries)
        return cls(entries[0].variables, len(entries), dict(enumerate(entries)))

    @classmethod
    def unit(cls, variables, rank, i, c=1) -> "FreeModuleVector":
        return cls(variables, rank, {i: Polynomial.constant(variables, c)})

    def __getitem__(self, i) -> Polynomial:
        return self.components.get(i, Polynomial.zero(self.variables))

    def to_list(self) -> list:
        return [self[i] for i in range(self.rank)]

    def is_zero(self) -> bool:
        return not self.components

    def terms(self) -> dict:
        return {(i, m): c for i, p in self.components.items() for m, c in p.terms.items()}

    @classmethod
    def from_terms(cls, variables, rank, terms: dict) -> "FreeModuleVector":
        comps: dict = {}
        for (i, m), c in terms.items():
            comps.setdefault(i, {})[m] = c
        v = cls(variables, rank)
        v.components = {i: Polynomial._raw(v.variables, t) for i, t in comps.items() if t}
        return v

    def __add__(self, other):
        out = dict(self.components)
        for i, p in other.components.items():
            out[i] = out[i] + p if i in out else p
        return FreeModuleVector(self.variables, self.rank, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, r) -> "FreeModuleVector":
        return FreeModuleVector(
            self.variables, self.rank, {i: p * r for i, p in self.components.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, FreeModuleVector):
            return NotImplemented
        return (self.variables, self.rank, self.components) == (
            other.variables,
            other.rank,
            other.components,
        )

    def __hash__(self):
        return hash((self.rank, frozenset(self.components.items())))

    def __repr__(self):
        inner = ", ".join(str(self[i]) for i in range(self.rank))
        return f"FreeModuleVector([{inner}])"


@dataclass
class ModuleGroebnerBasis:
    generators: list
    order: MonomialOrder
    reduced: bool
    variables: tuple
    rank: int

    def leading_terms(self) -> list:
        key = self.order.term_key
        out = []
        for g in self.generators:
            t = g.terms()
            lt = max(t, key=key)
            out.append((lt, t[lt]))
        return out


# term-map kernel ------------------------------------------------------


class _Engine:
    """One Buchberger run.  Elements are term maps; optional cofactor tracking."""

    def __init__(self, order: MonomialOrder, track: bool, criteria: bool, rank: int, nvars: int):
        self.order = order
        self.nvars = nvars
        self.track = track
        self.criteria = criteria
        self.rank = rank
        self._keys: dict = {}
        self.G: list = []  # term maps with leading coefficient 1
        self.LT: list = []  # (pos, exps)
        self.reps: list = []  # cofactor term maps over the input positions
        self.by_pos: dict = {}  # pos -> list of element indices
        self.syz: list = []
        self.pairs: list = []  # heap of (degree, key, i, j)
        self.done: set = set()

    def key(self, t):
        k = self._keys.get(t)
        if k is None:
            k = self.order.term_key(t)
            self._keys[t] = k
        return k

    def lead(self, v: dict):
        return max(v, key=self.key)

    def find_divisor(self, t):
        pos, m = t
        for k in self.by_pos.get(pos, ()):
            lm = self.LT[k][1]
            ok = True
            for a, b in zip(lm, m):
                if a > b:
                    ok = False
                    break
            if ok:
                return k
        return None

    @staticmethod
    def axpy(v: dict, c, q, g: dict):
        # v -= c * x^q * g
        for (p, m), cg in g.items():
            t = (p, tuple(a + b for a, b in zip(m, q)))
            val = v.get(t, 0) - c * cg
            if val:
                v[t] = val
            else:
                v.pop(t, None)

    def reduce(self, v: dict, rep: dict | None):
        rem = {}
        G, reps, track = self.G, self.reps, self.track
        while v:
            t = self.lead(v)
            k = self.find_divisor(t)
            if k is None:
                rem[t] = v.pop(t)
                continue
            c = v[t]
            q = tuple(a - b for a, b in zip(t[1], self.LT[k][1]))
            self.axpy(v, c, q, G[k])
            v.pop(t, None)
            if track:
                self.axpy(rep, c, q, reps[k])
        return rem, rep

    def add(self, v: dict, rep: dict | None):
        t = self.lead(v)
        c = v[t]
        if c != 1:
            inv = 1 / Fraction(c)
            v = {k: x * inv for k, x in v.items()}
            if self.track:
                rep = {k: x * inv for k, x in rep.items()}
        idx = len(self.G)
        self.G.append(v)
        self.LT.append(t)
        self.reps.append(rep)
        pos, m = t
        for i in self.by_pos.get(pos, ()):
            lm = self.LT[i][1]
            l = tuple(max(a, b) for a, b in zip(lm, m))
            if self.criteria and self.rank == 1 and not self.track:
                if all(min(a, b) == 0 for a, b in zip(lm, m)):
                    self.done.add((i, idx))
                    continue
            heapq.heappush(self.pairs, (self.order.degree(l), self.key((pos, l)), i, idx))
        self.by_pos.setdefault(pos, []).append(idx)
        return idx

    def chain_skip(self, i, j, l, pos) -> bool:
        for k in self.by_pos.get(pos, ()):
            if k == i or k == j:
                continue
            lm = self.LT[k][1]
            if all(a <= b for a, b in zip(lm, l)):
                a, b = (i, k) if i < k else (k, i)
                c, d = (j, k) if j < k else (k, j)
                if (a, b) in self.done and (c, d) in self.done:
                    return True
        return False

    def spoly(self, i, j):
        (_, mi), (_, mj) = self.LT[i], self.LT[j]
        l = tuple(max(a, b) for a, b in zip(mi, mj))
        qi = tuple(a - b for a, b in zip(l, mi))
        qj = tuple(a - b for a, b in zip(l, mj))
        v: dict = {}
        self.axpy(v, -1, qi, self.G[i])
        self.axpy(v, 1, qj, self.G[j])
        rep = None
        if self.track:
            rep = {}
            self.axpy(rep, -1, qi, self.reps[i])
            self.axpy(rep, 1, qj, self.reps[j])
        return v, rep

    def run(self, gens: list):
        for r, g in enumerate(gens):
            rep = {(r, (0,) * self.nvars): Fraction(1)} if self.track else None
            v = dict(g)
            if not v:
                if self.track:
                    self.syz.append(rep)
                continue
            # raw inputs are kept unreduced so that each is its own cofactor
            self.add(v, rep)
        while self.pairs:
            _, _, i, j = heapq.heappop(self.pairs)
            if self.criteria:
                pos = self.LT[i][0]
                l = tuple(max(a, b) for a, b in zip(self.LT[i][1], self.LT[j][1]))
                if self.chain_skip(i, j, l, pos):
                    self.done.add((i, j))
                    continue
            v, rep = self.spoly(i, j)
            self.done.add((i, j))
            rem, rep = self.reduce(v, rep)
            if rem:
                self.add(rem, rep)
            elif self.track and rep:
                self.syz.append(rep)
        return self


def _engine(gens_terms, order, track, criteria, rank, nvars):
    return _Engine(order, track, criteria, rank, nvars).run(gens_terms)


def _interreduce(e: _Engine) -> list:
    """Reduced Gröbner basis from a finished run, sorted by leading term."""
    keep = []
    for idx, t in enumerate(e.LT):
        pos, m = t
        redundant = False
        for k in e.by_pos.get(pos, ()):
            if k == idx:
                continue
            lm = e.LT[k][1]
            if all(a <= b for a, b in zip(lm, m)) and (lm != m or k < idx):
                redundant = True
                break
        if not redundant:
            keep.append(idx)
    sub = _Engine(e.order, False, False, e.rank, e.nvars)
    sub.LT = [e.LT[k] for k in keep]
    sub.G = [e.G[k] for k in keep]
    for new, t in enumerate(sub.LT):
        sub.by_pos.setdefault(t[0], []).append(new)
    out = []
    for new, g in enumerate(sub.G):
        lt = sub.LT[new]
        tail = {k: c for k, c in g.items() if k != lt}
        # reduce the tail against all elements (no tail term is divisible by lt itself
        # unless by another element's lead, which the loop handles)
        rem, _ = sub.reduce(tail, None)
        rem[lt] = Fraction(1)
        out.append(rem)
    out.sort(key=lambda g: e.key(max(g, key=e.key)), reverse=True)
    return out


def _vector_terms(v) -> dict:
    if isinstance(v, FreeModuleVector):
        return v.terms()
    return dict(v)


def _context(gens: Sequence[FreeModuleVector]):
    if not gens:
        raise ValueError("empty generator list")
    variables, rank = gens[0].variables, gens[0].rank
    for g in gens:
        if g.variables != variables or g.rank != rank:
            raise DimensionMismatch("generators must share variables and ambient rank")
    return variables, rank


def buchberger(
    gens: Sequence[FreeModuleVector], order: MonomialOrder = DEGREVLEX, criteria: bool = True
) -> ModuleGroebnerBasis:
    """Reduced Gröbner basis of the submodule spanned by ``gens``."""
    variables, rank = _context(gens)
    e = _engine([g.terms() for g in gens], order, False, criteria, rank, len(variables))
    basis = [FreeModuleVector.from_terms(variables, rank, t) for t in _interreduce(e)]
    return ModuleGroebnerBasis(basis, order, True, variables, rank)


def normal_form(v: FreeModuleVector, gb: ModuleGroebnerBasis) -> FreeModuleVector:
    if v.rank != gb.rank or v.variables != gb.variables:
        raise DimensionMismatch("vector and Gröbner basis live in different modules")
    e = _Engine(gb.order, False, False, gb.rank, len(gb.variables))
    for g in gb.generators:
        t = g.terms()
        lt = max(t, key=e.key)
        e.G.append(t)
        e.by_pos.setdefault(lt[0], []).append(len(e.LT))
        e.LT.append(lt)
    rem, _ = e.reduce(v.terms(), None)
    return FreeModuleVector.from_terms(v.variables, v.rank, rem)


def syzygies(
    gens: Sequence[FreeModuleVector], order: MonomialOrder = DEGREVLEX, criteria: bool = True
) -> list:
    """Generators of the module of relations sum_i c_i gens_i = 0.

    Each returned vector (of rank ``len(gens)``) is checked to annihilate
    the generators exactly.
    """
    variables, rank = _context(gens)
    r = len(gens)
    e = _engine([g.terms() for g in gens], order, True, criteria, rank, len(variables))
    out, seen = [], set()
    for rep in e.syz:
        v = FreeModuleVector.from_terms(variables, r, rep)
        if v.is_zero() or v in seen:
            continue
        seen.add(v)
        out.append(v)
    for v in out:
        if not combination(v, gens).is_zero():
            raise AssertionError("syzygy does not annihilate its generators")
    return out


def combination(coeffs: FreeModuleVector, gens: Sequence[FreeModuleVector]) -> FreeModuleVector:
    """sum_i coeffs_i * gens_i."""
    variables, rank = gens[0].variables, gens[0].rank
    acc: dict = {}
    for i, c in coeffs.components.items():
        for (pos, m), cg in gens[i].terms().items():
            for m2, c2 in c.terms.items():
                t = (pos, tuple(a + b for a, b in zip(m, m2)))
                val = acc.get(t, 0) + cg * c2
                if val:
                    acc[t] = val
                else:
                    acc.pop(t, None)
    return FreeModuleVector.from_terms(variables, rank, acc)


# quotient rings ------------------------------------------------------


class QuotientRing:
    """S/I with normal forms against a reduced Gröbner basis of I."""

    def __init__(self, ideal: Sequence[Polynomial], order: MonomialOrder = DEGREVLEX):
        ideal = [p for p in ideal]
        if not ideal:
            raise ValueError("empty ideal generator list")
        self.variables = ideal[0].variables
        self.ideal = ideal
        self.order = order
        vecs = [FreeModuleVector(self.variables, 1, {0: p}) for p in ideal]
        self.gb = buchberger(vecs, order)
        self.gb_polys = [g[0] for g in self.gb.generators]
        self._lead = [p.leading_term(order)[0] for p in self.gb_polys]
        self._engine = _Engine(order, False, False, 1, len(self.variables))
        for p, lm in zip(self.gb_polys, self._lead):
            self._engine.G.append({(0, m): c for m, c in p.terms.items()})
            self._engine.by_pos.setdefault(0, []).append(len(self._engine.LT))
            self._engine.LT.append((0, lm))
        self._cache: dict = {}

    def reduce(self, p: Polynomial) -> Polynomial:
        if not p:
            return p
        hit = self._cache.get(p)
        if hit is not None:
            return hit
        rem, _ = self._engine.reduce({(0, m): c for m, c in p.terms.items()}, None)
        out = Polynomial._raw(self.variables, {m: c for (_, m), c in rem.items()})
        if len(self._cache) < 200000:
            self._cache[p] = out
        return out

    def is_standard(self, exps) -> bool:
        return not any(all(a <= b for a, b in zip(lm, exps)) for lm in self._lead)

    def standard_monomials(self, weights: Sequence[int], d: int) -> list:
        return [m for m in monomials_of_weighted_degree(weights, d) if self.is_standard(m)]


def syzygies_over_quotient(
    gens: Sequence[FreeModuleVector],
    ring: QuotientRing,
    order: MonomialOrder | None = None,
    criteria: bool = True,
) -> list:
    """Relations among ``gens`` with coefficients in S/I.

    The vectors f_j e_i are appended for every ideal generator f_j and every
    basis index i; the syzygies of the enlarged list are projected onto the
    original coordinates and reduced modulo I.
    """
    variables, rank = _context(gens)
    order = order or ring.order
    r = len(gens)
    extended = list(gens)
    for i in range(rank):
        for f in ring.ideal:
            extended.append(FreeModuleVector(variables, rank, {i: f}))
    out, seen = [], set()
    for v in syzygies(extended, order, criteria):
        comps = {}
        for i, p in v.components.items():
            if i < r:
                q = ring.reduce(p)
                if q:
                    comps[i] = q
        w = FreeModuleVector(variables, r, comps)
        if w.is_zero() or w in seen:
            continue
        seen.add(w)
        out.append(w)
    return out


# pruning --------------------------------------------------------------


@dataclass
class Pivot:
    row: int
    column: int
    value: Fraction

    def to_json(self) -> dict:
        from .poly import rational_string

        return {"row": self.row, "column": self.column, "value": rational_string(self.value)}


@dataclass
class MinimalizedMatrix:
    entries: list  # pruned matrix, list of rows
    rows_kept: list  # original row indices
    columns_kept: list  # original column indices
    pivots: list  # Pivot records in the original indexing

    @property
    def shape(self) -> tuple:
        return len(self.rows_kept), len(self.columns_kept)


def minimalize(entries: list, variables, reduce=None) -> MinimalizedMatrix:
    """Prune a presentation matrix at the origin by pivoting on unit entries.

    Each pivot on an entry u with nonzero constant term clears its row with
    column operations (scaling by the local unit u when u is not constant),
    then deletes that row and column.  The cokernel over the local ring is
    unchanged and every surviving entry has zero constant term.
    """
    m = [list(row) for row in entries]
    rows = list(range(len(m)))
    cols = list(range(len(m[0]) if m else 0))
    reduce = reduce or (lambda p: p)
    pivots = []
    while True:
        found = None
        # prefer constant pivots, then any local unit; first in row-major order
        for want_const in (True, False):
            for a in range(len(rows)):
                for b in range(len(cols)):
                    p = m[a][b]
                    if p.constant_term() and (p.is_constant() or not want_const):
                        found = (a, b)
                        break
                if found:
                    break
            if found:
                break
        if not found:
            break
        a, b = found
        u = m[a][b]
        pivots.append(Pivot(rows[a], cols[b], u.constant_term()))
        const = u.is_constant()
        for j in range(len(cols)):
            if j == b or not m[a][j]:
                continue
            c = m[a][j]
            for i in range(len(rows)):
                if i == a:
                    continue
                if const:
                    new = m[i][j] - m[i][b] * (c * (1 / u.constant_term()))
                else:
                    new = m[i][j] * u - m[i][b] * c
                m[i][j] = reduce(new)
        del m[a]
        del rows[a]
        for row in m:
            del row[b]
        del cols[b]
    return MinimalizedMatrix(m, rows, cols, pivots)


def vector_degree(v: FreeModuleVector, shifts: Sequence[int], weights: Sequence[int]) -> int:
    """Weighted degree of a homogeneous vector (row i carries degree shifts[i])."""
    degs = {
        shifts[i] + sum(w * e for w, e in zip(weights, m))
        for i, p in v.components.items()
        for m in p.terms
    }
    if len(degs) != 1:
        raise ValueError(f"vector is not homogeneous: degrees {sorted(degs)}")
    return degs.pop()


def minimal_generators(
    vectors: Sequence[FreeModuleVector],
    shifts: Sequence[int],
    weights: Sequence[int],
    ring: QuotientRing,
) -> list:
    """Indices of a minimal generating subset of a graded submodule of R^p.

    Candidates are scanned by increasing degree; a candidate is kept when it
    is not in the k-span of the degree-d part of the module generated by
    candidates already kept.  Graded Nakayama makes the result minimal.
    """
    degs = [vector_degree(v, shifts, weights) for v in vectors]
    order = sorted(range(len(vectors)), key=lambda i: (degs[i], i))
    kept: list = []
    by_degree: dict = {}
    for i in order:
        by_degree.setdefault(degs[i], []).append(i)
    for d in sorted(by_degree):
        span = Echelon()
        for k in kept:
            e = d - degs[k]
            for mu in ring.standard_monomials(weights, e):
                span.add(_shift_reduce(vectors[k], mu, ring))
        for i in by_degree[d]:
            if span.add(_shift_reduce(vectors[i], (0,) * len(weights), ring)):
                kept.append(i)
    return sorted(kept, key=lambda i: (degs[i], i))


def _shift_reduce(v: FreeModuleVector, mu, ring: QuotientRing) -> dict:
    out = {}
    for i, p in v.components.items():
        q = ring.reduce(p.mul_term(mu, 1)) if any(mu) else ring.reduce(p)
        for m, c in q.terms.items():
            out[(-i,) + ring.order.key(m)] = c
    return out


def reduce_matrix(entries: list, ring: QuotientRing) -> list:
    return [[ring.reduce(p) for p in row] for row in entries]


def vectors_to_matrix(vectors: Sequence[FreeModuleVector], rank: int, variables) -> list:
    """Columns to a list of rows."""
    zero = Polynomial.zero(variables)
    return [[v.components.get(i, zero) for v in vectors] for i in range(rank)]


def matrix_columns(entries: list, variables) -> list:
    if not entries:
        return []
    nrows = len(entries)
    return [
        FreeModuleVector(variables, nrows, {i: entries[i][j] for i in range(nrows)})
        for j in range(len(entries[0]))
    ]
