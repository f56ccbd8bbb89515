"""Minimal resolutions of Omega_n(R) at a point, and their Betti series.

Two routes produce a verdict: at a regular point Omega_n is free of known
rank; at a singular point where the hypothesis holds, the relation matrix
itself is a minimal two-term resolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .errors import HypothesisFails, InvariantViolation, RankDeficient, RegularPoint
from .hypersurface import (
    HypersurfaceInput,
    RankCertificate,
    check_hypothesis,
    full_column_rank_mod_f,
    jacobian_regularity,
    presentation_matrix,
)
from .poly import DEGREVLEX
from .recurrence import RecurrenceResult, poly_in_t, recurrence_probe

EXACT_FINITE = "ExactFinite"
CONJECTURED_RATIONAL = "ConjecturedRational"
UNKNOWN = "Unknown"


@dataclass
class ResolutionComplex:
    """F_0 <- F_1 <- ... with differentials written over R, m at the origin."""

    variables: tuple
    ranks: list
    differentials: list  # differentials[i] is d_(i+1): rows = rank F_i, cols = rank F_(i+1)
    minimal: list  # per differential: every entry has zero constant term
    terminated: bool
    exactness: RankCertificate | None = None
    pivots: list = field(default_factory=list)
    composition_zero: list = field(default_factory=list)  # d_i o d_(i+1) == 0 checks
    row_labels: list | None = None
    degrees: list | None = None  # graded case: degrees of the basis of each F_i

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    @property
    def is_minimal(self) -> bool:
        return all(self.minimal)

    def ext_dimensions(self) -> list:
        """dim Ext^i(M, R/m): ranks, after checking the dual complex vanishes mod m."""
        for d in self.differentials:
            for row in d:
                for p in row:
                    if p.constant_term():
                        raise InvariantViolation(
                            "dualized differential is nonzero modulo m; complex not minimal"
                        )
        return list(self.ranks)

    def to_json(self, include_matrices: bool = True) -> dict:
        out = {
            "ranks": list(self.ranks),
            "terminated": self.terminated,
            "minimal": list(self.minimal),
            "composition_zero": list(self.composition_zero),
        }
        if include_matrices:
            out["differentials"] = [[[str(p) for p in row] for row in d] for d in self.differentials]
        return out


@dataclass
class BettiSeries:
    coefficients: list
    depth: int
    verdict: str
    closed_form: tuple | None = None  # (numerator coeffs, denominator coeffs), ascending in t
    recurrence: RecurrenceResult | None = None

    def __post_init__(self):
        if any(b < 0 for b in self.coefficients):
            raise InvariantViolation("negative Betti number")
        if self.verdict == EXACT_FINITE and self.closed_form is not None:
            num, den = self.closed_form
            if tuple(den) != (1,) or list(num) != _trim_zeros(self.coefficients):
                raise InvariantViolation("ExactFinite series must be its own polynomial")

    def closed_form_strings(self) -> tuple | None:
        if self.closed_form is None:
            return None
        return poly_in_t(self.closed_form[0]), poly_in_t(self.closed_form[1])

    def to_json(self) -> dict:
        out = {"coefficients": list(self.coefficients), "verdict": self.verdict}
        cf = self.closed_form_strings()
        out["closed_form"] = {"num": cf[0], "den": cf[1]} if cf else None
        return out


def _trim_zeros(coeffs) -> list:
    out = list(coeffs)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out or [0]


def exact_series(ranks: Sequence[int]) -> BettiSeries:
    ranks = list(ranks)
    return BettiSeries(
        ranks, len(ranks) - 1, EXACT_FINITE, (tuple(_trim_zeros(ranks)), (1,))
    )


def build_minimal_resolution(inp: HypersurfaceInput, threads: int = 1) -> ResolutionComplex:
    """Two-term minimal resolution 0 -> F_1 -> F_0 -> Omega_n(R_m) -> 0.

    The differential is the relation matrix translated so the point sits at
    the origin and reduced modulo the translated f.
    """
    f, n, a = inp.f, inp.n, inp.point
    if jacobian_regularity(f, a).regular:
        raise RegularPoint("point is regular; Omega_n is free there")
    report = check_hypothesis(inp)
    if not report.holds:
        raise HypothesisFails(report)
    M = presentation_matrix([f], n)
    cert = full_column_rank_mod_f(M, f, threads=threads)
    if not cert:
        raise RankDeficient("no maximal minor is nonzero modulo f")
    ft = f.translate(a)
    D = [[p.translate(a).remainder(ft, DEGREVLEX) for p in row] for row in M.entries]
    minimal = all(not p.constant_term() for row in D for p in row)
    if not minimal:
        raise InvariantViolation("hypothesis holds but a translated entry has a unit constant term")
    rows, cols = M.shape
    return ResolutionComplex(
        f.variables,
        [rows, cols],
        [D],
        [True],
        terminated=True,
        exactness=cert,
        row_labels=M.row_labels(),
    )


def betti_series_from_resolution(res: ResolutionComplex) -> BettiSeries:
    """Betti series read off a certified-minimal complex."""
    if not res.minimal or not res.is_minimal:
        raise InvariantViolation("resolution carries no minimality certificate")
    ext = res.ext_dimensions()
    if res.terminated:
        if res.length == 1 and ext[1] <= 0:
            raise InvariantViolation("Ext^1 of a length-one minimal resolution vanished")
        return exact_series(ext)
    series = BettiSeries(ext, res.length, UNKNOWN)
    if len(ext) >= 4:
        rec = recurrence_probe(ext)
        if rec is not None:
            series = BettiSeries(
                ext, res.length, CONJECTURED_RATIONAL, (rec.numerator, rec.denominator), rec
            )
    return series


def betti_series_regular(n: int, s: int) -> BettiSeries:
    """Constant series C(n+s-1, s-1) - 1: Omega_n is free at a regular point."""
    if n < 1 or s < 1:
        raise ValueError("n and s must be positive")
    return exact_series([comb(n + s - 1, s - 1) - 1])


def rank_identity_check(n: int, s: int) -> bool:
    return comb(n + s, s) - comb(n + s - 1, s - 1) == comb(n + s - 1, s)
