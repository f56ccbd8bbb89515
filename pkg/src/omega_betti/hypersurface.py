"""Presentation of Omega_n(S/(f)) and the checks made on it at a point.

The relation module is generated by the elements d_n(x^beta f) with
``0 <= |beta| <= n-1`` together with f * Omega_n(S).  Its matrix has one row
per basis monomial of Omega_n(S) and one column per beta.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, islice
from math import comb
from typing import Sequence

from .errors import DimensionMismatch, PointNotOnVariety, ValidationError
from .matrix import det
from .poly import DEGREVLEX, Polynomial, monomial_string, monomials_up_to, parse_point, rational_string
from .universal import dn_taylor, dx_label, in_m_omega, omega_basis


@dataclass(frozen=True)
class HypersurfaceInput:
    f: Polynomial
    n: int
    point: tuple
    irreducible_asserted: bool = True

    def __post_init__(self):
        pt = parse_point(self.point)
        object.__setattr__(self, "point", pt)
        if self.n < 1:
            raise ValidationError("order n must be at least 1")
        if self.f.is_constant():
            raise ValidationError("f must be nonconstant")
        if len(pt) != self.f.nvars:
            raise DimensionMismatch(
                f"point has {len(pt)} coordinates, f has {self.f.nvars} variables"
            )
        value = self.f.evaluate(pt)
        if value:
            raise PointNotOnVariety(f"f does not vanish at the point (value {value})")

    @property
    def s(self) -> int:
        return self.f.nvars


@dataclass
class PresentationMatrix:
    """Relation matrix with DX-basis rows and columns d_n(x^beta f_j)."""

    variables: tuple
    n: int
    rows: tuple  # basis monomials alpha
    columns: tuple  # (generator index j, beta)
    entries: list  # entries[i][k]: coordinate alpha_i of column k
    reduced_mod_f: bool = False

    @property
    def shape(self) -> tuple:
        return len(self.rows), len(self.columns)

    def column(self, k: int) -> list:
        return [row[k] for row in self.entries]

    def row_labels(self) -> list:
        return [dx_label(self.variables, a) for a in self.rows]

    def column_labels(self) -> list:
        gens = {j for j, _ in self.columns}
        out = []
        for j, beta in self.columns:
            mono = monomial_string(self.variables, beta)
            f = "f" if len(gens) == 1 else f"f{j + 1}"
            out.append(f"d_n({f})" if mono == "1" else f"d_n({mono}*{f})")
        return out

    def to_json(self) -> dict:
        return {
            "rows": self.row_labels(),
            "columns": self.column_labels(),
            "entries": [[str(p) for p in row] for row in self.entries],
            "reduced_mod_f": self.reduced_mod_f,
        }

    def map_entries(self, fn, reduced: bool | None = None) -> "PresentationMatrix":
        return PresentationMatrix(
            self.variables,
            self.n,
            self.rows,
            self.columns,
            [[fn(p) for p in row] for row in self.entries],
            self.reduced_mod_f if reduced is None else reduced,
        )


def relation_generators(f: Polynomial, n: int) -> list:
    """The elements d_n(x^beta f), 0 <= |beta| <= n-1, as DX-basis OmegaElements."""
    if f.is_constant():
        raise ValidationError("f must be nonconstant")
    basis = omega_basis(n, f.nvars)
    return [
        dn_taylor(f.mul_term(beta, 1), basis) for beta in monomials_up_to(f.nvars, 0, n - 1)
    ]


def presentation_matrix(generators: Sequence[Polynomial], n: int) -> PresentationMatrix:
    """Columns d_n(x^beta f_j) for each generator f_j (j-major), rows by basis order."""
    generators = list(generators)
    variables = generators[0].variables
    s = len(variables)
    basis = omega_basis(n, s)
    betas = monomials_up_to(s, 0, n - 1)
    columns, cols = [], []
    for j, f in enumerate(generators):
        if f.variables != variables:
            raise DimensionMismatch("generators over different variables")
        for beta in betas:
            el = dn_taylor(f.mul_term(beta, 1), basis)
            columns.append((j, beta))
            cols.append(el)
    entries = [[el.coordinate(alpha) for el in cols] for alpha in basis.monomials]
    return PresentationMatrix(variables, n, basis.monomials, tuple(columns), entries)


@dataclass(frozen=True)
class Witness:
    beta: tuple
    alpha: tuple
    column_label: str
    row_label: str
    coordinate: str
    value: Fraction

    def to_json(self) -> dict:
        return {
            "column": self.column_label,
            "row": self.row_label,
            "coordinate": self.coordinate,
            "value": rational_string(self.value),
        }


@dataclass
class HypothesisReport:
    columns: list  # labels
    column_verdicts: list
    witnesses: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(self.column_verdicts)

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "columns": [
                {"column": c, "in_m_omega": v} for c, v in zip(self.columns, self.column_verdicts)
            ],
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def check_hypothesis(inp: HypersurfaceInput) -> HypothesisReport:
    """Test d_n(x^beta f) in m*Omega_n(S) for every 0 <= |beta| <= n-1."""
    f, n, a = inp.f, inp.n, inp.point
    M = presentation_matrix([f], n)
    labels = M.column_labels()
    rows = M.row_labels()
    gens = relation_generators(f, n)
    verdicts, witnesses = [], []
    for k, el in enumerate(gens):
        ok = in_m_omega(el, a)
        verdicts.append(ok)
        if not ok:
            for i, alpha in enumerate(M.rows):
                p = el.coordinate(alpha)
                v = p.evaluate(a)
                if v:
                    witnesses.append(
                        Witness(M.columns[k][1], alpha, labels[k], rows[i], str(p), v)
                    )
    return HypothesisReport(labels, verdicts, witnesses)


@dataclass(frozen=True)
class RegularityVerdict:
    kind: str  # "Regular" | "Singular"
    gradient: tuple

    @property
    def regular(self) -> bool:
        return self.kind == "Regular"

    def to_json(self) -> dict:
        return {"verdict": self.kind, "gradient": [rational_string(g) for g in self.gradient]}


def jacobian_regularity(f: Polynomial, point: Sequence) -> RegularityVerdict:
    """Regular iff the gradient of f does not vanish at the point."""
    a = parse_point(point)
    if len(a) != f.nvars:
        raise DimensionMismatch(f"point has {len(a)} coordinates, f has {f.nvars} variables")
    if f.evaluate(a):
        raise PointNotOnVariety("f does not vanish at the point")
    grad = tuple(f.derivative(i).evaluate(a) for i in range(f.nvars))
    return RegularityVerdict("Regular" if any(grad) else "Singular", grad)


@dataclass(frozen=True)
class RankCertificate:
    full_rank: bool
    rows: tuple | None = None  # witnessing row subset
    minor: Polynomial | None = None  # its determinant reduced mod f
    minors_checked: int = 0
    minors_total: int = 0

    def __bool__(self):
        return self.full_rank

    def to_json(self, row_labels=None) -> dict:
        out = {
            "full_column_rank": self.full_rank,
            "minors_checked": self.minors_checked,
            "minors_total": self.minors_total,
        }
        if self.full_rank:
            out["rows"] = [row_labels[i] for i in self.rows] if row_labels else list(self.rows)
            out["minor_mod_f"] = str(self.minor)
        return out


def full_column_rank_mod_f(
    M: PresentationMatrix, f: Polynomial, threads: int = 1, chunk: int = 16
) -> RankCertificate:
    """Certify linear independence of the columns over Frac(S/(f)).

    Maximal minors are enumerated in lexicographic row-subset order; the
    first one whose determinant is nonzero modulo f is returned.  With
    ``threads > 1`` minors are evaluated in parallel chunks, but the
    certificate is always the lexicographically first.
    """
    r_rows, r_cols = M.shape
    total = comb(r_rows, r_cols) if r_cols <= r_rows else 0
    if r_cols == 0 or r_cols > r_rows:
        return RankCertificate(False, minors_total=total)
    if all(not p for row in M.entries for p in row):
        return RankCertificate(False, minors_total=total)
    variables = M.variables
    entries = M.entries

    def evaluate(subset):
        d = det([entries[i] for i in subset], variables)
        return d.remainder(f, DEGREVLEX)

    subsets = combinations(range(r_rows), r_cols)
    checked = 0
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while True:
            batch = list(islice(subsets, chunk if pool else 1))
            if not batch:
                break
            values = list(pool.map(evaluate, batch)) if pool else [evaluate(batch[0])]
            for subset, v in zip(batch, values):
                checked += 1
                if v:
                    return RankCertificate(True, subset, v, checked, total)
    finally:
        if pool:
            pool.shutdown()
    return RankCertificate(False, minors_checked=checked, minors_total=total)
