"""Truncated minimal graded resolutions of Omega_n(S/I) at the origin.

Works for ideals that are homogeneous for some positive weight vector.  The
presentation d_n(x^beta f_j) is pruned to a minimal one; then each step takes
syzygies over S/I, keeps a minimal generating set and repeats.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import InvariantViolation, NotQuasiHomogeneous, ValidationError
from .groebner import (
    QuotientRing,
    matrix_columns,
    minimal_generators,
    minimalize,
    syzygies_over_quotient,
    vector_degree,
    vectors_to_matrix,
)
from .hypersurface import PresentationMatrix, presentation_matrix
from .matrix import matmul
from .poly import MonomialOrder, Polynomial
from .recurrence import RecurrenceResult, recurrence_probe
from .resolution import (
    CONJECTURED_RATIONAL,
    UNKNOWN,
    BettiSeries,
    ResolutionComplex,
    exact_series,
)
from .universal import dx_label

log = logging.getLogger(__name__)

DEFAULT_DEPTH = 5


@dataclass(frozen=True)
class IdealInput:
    generators: tuple
    n: int
    depth: int = DEFAULT_DEPTH

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ValidationError("ideal needs at least one generator")
        if any(g.is_constant() for g in gens):
            raise ValidationError("ideal generators must be nonconstant")
        if len({g.variables for g in gens}) != 1:
            raise ValidationError("generators over different variables")
        if self.n < 1:
            raise ValidationError("order n must be at least 1")
        if self.depth < 1:
            raise ValidationError("depth must be at least 1")

    @property
    def variables(self) -> tuple:
        return self.generators[0].variables


def _nullspace(rows: list, ncols: int) -> list:
    """Rational nullspace basis of an integer matrix given by rows."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                k = m[i][c]
                m[i] = [a - k * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def _primitive(v) -> tuple:
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def weight_solver(generators: Sequence[Polynomial], search_limit: int = 200_000) -> tuple:
    """Positive integer weights making every generator weighted-homogeneous.

    Returns the solution with the smallest total weight (ties broken
    lexicographically), scaled to coprime entries.
    """
    generators = list(generators)
    if not generators:
        raise ValueError("empty generator list")
    s = generators[0].nvars
    rows = []
    for g in generators:
        mons = sorted(g.terms)
        for m in mons[1:]:
            rows.append([a - b for a, b in zip(m, mons[0])])
    basis = _nullspace(rows, s) if rows else [
        [Fraction(int(i == j)) for j in range(s)] for i in range(s)
    ]
    if not basis:
        raise NotQuasiHomogeneous("only the zero weight vector is compatible")
    if len(basis) == 1:
        w = _primitive(basis[0])
        if all(x < 0 for x in w):
            w = tuple(-x for x in w)
        if all(x > 0 for x in w):
            return w
        raise NotQuasiHomogeneous(f"compatible weights {w} are not all positive")

    def ok(w):
        return all(sum(a * b for a, b in zip(r, w)) == 0 for r in rows)

    tried = 0
    total = s
    while tried < search_limit:
        for w in _compositions(total, s):
            tried += 1
            if ok(w) and gcd(*w) == 1:
                return w
        total += 1
    return _weights_by_lp(rows, s)


def _compositions(total: int, parts: int):
    """Positive integer vectors with the given sum, in lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _weights_by_lp(rows, s) -> tuple:
    from scipy.optimize import linprog

    res = linprog(
        c=[1] * s, A_eq=rows, b_eq=[0] * len(rows), bounds=[(1, None)] * s, method="highs"
    )
    if not res.success:
        raise NotQuasiHomogeneous("no positive weight vector exists")
    w = _primitive([Fraction(x).limit_denominator(10**6) for x in res.x])
    if all(x > 0 for x in w) and all(sum(a * b for a, b in zip(r, w)) == 0 for r in rows):
        return w
    raise NotQuasiHomogeneous("no positive integer weight vector recovered")


def presentation_general(inp: IdealInput) -> PresentationMatrix:
    """Relation matrix with columns d_n(x^beta f_j), 0 <= |beta| <= n-1, j-major."""
    weight_solver(inp.generators)
    return presentation_matrix(inp.generators, inp.n)


@dataclass
class BettiSequenceReport:
    betti: list
    terminated: bool
    weights: tuple
    completed_depth: int
    requested_depth: int
    series: BettiSeries
    terminated_at: int | None = None
    generator_degrees: list = field(default_factory=list)
    pivots: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    budget_exhausted: bool = False

    @property
    def recurrence(self) -> RecurrenceResult | None:
        return self.series.recurrence

    def to_json(self) -> dict:
        rec = self.recurrence
        return {
            "betti": list(self.betti),
            "terminated": self.terminated,
            "terminated_at": self.terminated_at,
            "requested_depth": self.requested_depth,
            "completed_depth": self.completed_depth,
            "budget_exhausted": self.budget_exhausted,
            "weights": list(self.weights),
            "generator_degrees": [list(d) for d in self.generator_degrees],
            "recurrence": rec.to_json() if rec else None,
            "series": self.series.to_json(),
        }


def _check_minimal(entries) -> bool:
    return all(not p.constant_term() for row in entries for p in row)


def truncated_minimal_resolution(
    inp: IdealInput, time_budget: float | None = None
) -> tuple:
    """Minimal graded resolution up to F_depth.

    Returns ``(ResolutionComplex, BettiSequenceReport)``.  Syzygy steps are
    taken for d_1..d_(depth-1); ``terminated`` records that one of them had
    no syzygies.  With ``time_budget`` (seconds) no new step is started once
    the budget is spent, and the report states the completed depth.
    """
    start = time.monotonic()
    w = weight_solver(inp.generators)
    order = MonomialOrder(w)
    ring = QuotientRing(inp.generators, order)
    variables = inp.variables
    M = presentation_matrix(inp.generators, inp.n)
    entries = [[ring.reduce(p) for p in row] for row in M.entries]
    pruned = minimalize(entries, variables, reduce=ring.reduce)
    row_shifts = [sum(a * b for a, b in zip(w, M.rows[i])) for i in pruned.rows_kept]
    cols = matrix_columns(pruned.entries, variables)
    nonzero = [k for k, v in enumerate(cols) if not v.is_zero()]
    cols = [cols[k] for k in nonzero]
    keep = minimal_generators(cols, row_shifts, w, ring) if cols else []
    d1 = [cols[k] for k in keep]
    b0 = len(row_shifts)
    ranks = [b0]
    differentials = []
    degrees = [list(row_shifts)]
    certificates = []
    terminated = False
    terminated_at = None
    budget_hit = False
    current = d1
    shifts = row_shifts
    labels = [dx_label(variables, M.rows[i]) for i in pruned.rows_kept]

    if b0 == 0:
        terminated, terminated_at = True, 0
    step = 1
    while not terminated and step <= inp.depth:
        # current holds the columns of d_step
        mat = vectors_to_matrix(current, len(shifts), variables)
        col_degs = [vector_degree(v, shifts, w) for v in current]
        if not current:
            terminated, terminated_at = True, step - 1
            break
        if not _check_minimal(mat):
            raise InvariantViolation(f"d_{step} has an entry with nonzero constant term")
        if differentials:
            comp = matmul(differentials[-1], mat, variables, reduce=ring.reduce)
            zero = all(not p for row in comp for p in row)
            if not zero:
                raise InvariantViolation(f"d_{step - 1} o d_{step} != 0")
            certificates.append({"step": step, "composition_zero": True, "minimal": True})
        else:
            certificates.append({"step": step, "composition_zero": None, "minimal": True})
        differentials.append(mat)
        ranks.append(len(current))
        degrees.append(list(col_degs))
        if step == inp.depth:
            break
        if time_budget is not None and time.monotonic() - start > time_budget:
            budget_hit = True
            break
        t0 = time.monotonic()
        syz = syzygies_over_quotient(current, ring, order)
        log.info("step %d: %d syzygy candidates in %.1fs", step, len(syz), time.monotonic() - t0)
        if not syz:
            terminated, terminated_at = True, step
            break
        keep = minimal_generators(syz, col_degs, w, ring)
        current = [syz[k] for k in keep]
        shifts = col_degs
        step += 1

    res = ResolutionComplex(
        variables,
        ranks,
        differentials,
        [_check_minimal(d) for d in differentials],
        terminated,
        pivots=pruned.pivots,
        composition_zero=[c["composition_zero"] for c in certificates],
        row_labels=labels,
        degrees=degrees,
    )
    completed = len(ranks) - 1
    if terminated:
        series = exact_series(ranks)
    else:
        series = BettiSeries(ranks, completed, UNKNOWN)
        if len(ranks) >= 4:
            rec = recurrence_probe(ranks)
            if rec is not None:
                series = BettiSeries(
                    ranks, completed, CONJECTURED_RATIONAL, (rec.numerator, rec.denominator), rec
                )
    report = BettiSequenceReport(
        ranks,
        terminated,
        w,
        completed,
        inp.depth,
        series,
        terminated_at,
        degrees,
        pruned.pivots,
        certificates,
        budget_hit,
    )
    return res, report


def explore(inp: IdealInput, time_budget: float | None = None) -> BettiSequenceReport:
    return truncated_minimal_resolution(inp, time_budget)[1]
