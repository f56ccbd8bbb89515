"""Acceptance gate: one check per criterion, each with its runtime bound.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion
is printed in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import json
import os
import random
import subprocess
import sys
import tempfile
import time
from math import comb

import pytest

from omega_betti.errors import HypothesisFails
from omega_betti.explorer import IdealInput, truncated_minimal_resolution
from omega_betti.groebner import QuotientRing, matrix_columns, syzygies_over_quotient
from omega_betti.hypersurface import (
    HypersurfaceInput,
    check_hypothesis,
    full_column_rank_mod_f,
    jacobian_regularity,
    presentation_matrix,
)
from omega_betti.matrix import matmul
from omega_betti.parser import parse_polynomial
from omega_betti.poly import MonomialOrder, Polynomial, monomials_of_degree
from omega_betti.recurrence import recurrence_probe, series_coefficients
from omega_betti.resolution import (
    CONJECTURED_RATIONAL,
    EXACT_FINITE,
    UNKNOWN,
    betti_series_from_resolution,
    betti_series_regular,
    build_minimal_resolution,
    rank_identity_check,
)
from omega_betti.universal import omega_basis
from omega_betti.verify import dn_oracle_suite, identity_suite, random_rational

XY = ("x", "y")
XYZ = ("x", "y", "z")

RESULTS = {}  # criterion number -> (name, passed, seconds, detail)


def record(number, name, limit):
    """Time the wrapped check and record PASS/FAIL against its bound."""

    def deco(fn):
        def test():
            t0 = time.perf_counter()
            detail = ""
            try:
                detail = fn() or ""
                elapsed = time.perf_counter() - t0
                ok = limit is None or elapsed < limit
                if not ok:
                    detail = f"took {elapsed:.1f}s, bound {limit}s"
            except Exception as exc:
                elapsed = time.perf_counter() - t0
                RESULTS[number] = (name, False, elapsed, f"{type(exc).__name__}: {exc}")
                raise
            RESULTS[number] = (name, ok, elapsed, detail)
            assert ok, detail

        test.__name__ = fn.__name__
        test.criterion = number
        return test

    return deco


def summary_lines():
    lines = []
    for k in sorted(RESULTS):
        name, ok, secs, detail = RESULTS[k]
        tail = f" ({detail})" if detail else ""
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {k:2d}. {name}: {secs:.2f}s{tail}")
    return lines


@record(1, "derivation identity, 200 tuples per (n,s) in {1,2,3}^2", 60)
def test_identity():
    rng = random.Random(2024)
    for n in (1, 2, 3):
        for s in (1, 2, 3):
            assert identity_suite(rng, n, s, 200) == 200, (n, s)
    return "1800/1800"


@record(2, "free rank C(n+s,s)-1 for n,s<=5 and rank identity for n,s<=10", 1)
def test_free_rank():
    for n in range(1, 6):
        for s in range(1, 6):
            assert len(omega_basis(n, s).monomials) == comb(n + s, s) - 1
    assert all(rank_identity_check(n, s) for n in range(1, 11) for s in range(1, 11))
    return "25 + 100 checks"


@record(3, "dual d_n algorithms agree on 500 random polynomials, n,s<=3", 120)
def test_dual_algorithm():
    rng = random.Random(99)
    for n in (1, 2, 3):
        for s in (1, 2, 3):
            assert dn_oracle_suite(rng, n, s, 500) == 500, (n, s)
    return "4500/4500"


@record(4, "cusp n=1: ranks [2,1], B(t)=2+t, Ext^1 nonzero", 1)
def test_cusp():
    f = parse_polynomial("y^2 - x^3", XY)
    inp = HypersurfaceInput(f, 1, (0, 0))
    assert check_hypothesis(inp).holds
    res = build_minimal_resolution(inp)
    assert res.ranks == [2, 1]
    series = betti_series_from_resolution(res)
    assert series.coefficients == [2, 1] and series.verdict == EXACT_FINITE
    assert series.closed_form == ((2, 1), (1,))
    assert res.ext_dimensions()[1] == 1
    return "B(t) = 2 + t"


@record(5, "quartic n=2: rank certificate among 10 minors, B(t)=5+3t, empty kernel over S/(f)", 30)
def test_quartic():
    f = parse_polynomial("y^3 - x^4", XY)
    inp = HypersurfaceInput(f, 2, (0, 0))
    assert check_hypothesis(inp).holds
    M = presentation_matrix([f], 2)
    cert = full_column_rank_mod_f(M, f)
    assert cert.full_rank and cert.minors_total == 10 and cert.minor
    series = betti_series_from_resolution(build_minimal_resolution(inp))
    assert series.coefficients == [5, 3] and series.verdict == EXACT_FINITE
    assert syzygies_over_quotient(matrix_columns(M.entries, XY), QuotientRing([f])) == []
    return f"minor {cert.rows} = {cert.minor}"


@record(6, "cusp n=2: HypothesisFails, witness row dy^2 with value 1", 1)
def test_witness():
    f = parse_polynomial("y^2 - x^3", XY)
    with pytest.raises(HypothesisFails) as ei:
        build_minimal_resolution(HypersurfaceInput(f, 2, (0, 0)))
    w = ei.value.report.witnesses[0]
    assert w.row_label == "dy^2" and w.value == 1
    return f"{w.column_label} at {w.row_label}"


@record(7, "regular point (1,1) of the cusp: B(t)=n for s=2", 1)
def test_regular():
    f = parse_polynomial("y^2 - x^3", XY)
    assert jacobian_regularity(f, (1, 1)).regular
    for n in (1, 2):
        s = betti_series_regular(n, 2)
        assert s.coefficients == [n] and s.verdict == EXACT_FINITE
    return "B = 1, 2"


@record(8, "hypothesis holds at 0 for 50 random homogeneous f of degree n+1", 60)
def test_homogeneous():
    rng = random.Random(8)
    count = 0
    for k in range(50):
        n = 1 + k % 2
        vs = XY if k % 4 < 2 else XYZ
        mons = monomials_of_degree(len(vs), n + 1)
        terms = {m: random_rational(rng) for m in mons}
        f = Polynomial(vs, terms)
        assert check_hypothesis(HypersurfaceInput(f, n, (0,) * len(vs))).holds
        count += 1
    return f"{count}/50"


CURVE = ("z^2 - x^3", "y^2 - x*z")


def curve():
    return [parse_polynomial(t, XYZ) for t in CURVE]


@record(9, "monomial curve n=1: weights (4,5,6), ranks [3,2], terminated at step 1", 30)
def test_curve_n1():
    res, rep = truncated_minimal_resolution(IdealInput(curve(), 1, 3))
    assert rep.weights == (4, 5, 6)
    assert res.ranks == [3, 2] and rep.terminated and rep.terminated_at == 1
    return "B(t) = 3 + 2t"


@record(10, "monomial curve n=2: b0=7, not terminated through depth 5, certified steps", 30 * 60)
def test_curve_n2():
    res, rep = truncated_minimal_resolution(IdealInput(curve(), 2, 5), time_budget=25 * 60)
    assert rep.betti[0] == 7 and not rep.terminated
    assert rep.completed_depth >= 3
    if rep.completed_depth < 5:
        assert rep.budget_exhausted
    assert rep.series.verdict in (CONJECTURED_RATIONAL, UNKNOWN)
    assert res.is_minimal
    ring = QuotientRing(curve(), MonomialOrder((4, 5, 6)))
    for a, b in zip(res.differentials, res.differentials[1:]):
        assert all(not p for row in matmul(a, b, XYZ, reduce=ring.reduce) for p in row)
    return f"betti {rep.betti}, verdict {rep.series.verdict}"


@record(11, "recurrence probe: documented closed forms and 20 random rational series", 10)
def test_recurrence():
    expect = {
        (3, 2, 2, 2, 2, 2): ((3, -1), (1, -1)),
        (2, 1, 0, 0, 0, 0): ((2, 1), (1,)),
        (1, 2, 4, 8, 16, 32): ((1,), (1, -2)),
    }
    for seq, form in expect.items():
        rec = recurrence_probe(list(seq))
        assert (rec.numerator, rec.denominator) == form, seq
        assert rec.expand(len(seq)) == list(seq)
    rng = random.Random(11)
    for _ in range(20):
        d = rng.randint(1, 3)
        den = [1] + [rng.randint(-3, 3) for _ in range(d - 1)] + [rng.choice((-2, -1, 1, 2))]
        num = [rng.randint(-5, 5) for _ in range(rng.randint(1, d + 1))]
        num[0] = num[0] or 1
        seq = [int(c) for c in series_coefficients(num, den, 12)]
        rec = recurrence_probe(seq)
        assert rec is not None and rec.expand(12) == seq
        # same recurrence: cross-multiplied generating functions agree
        lhs = series_coefficients(rec.numerator, rec.denominator, 24)
        assert lhs == series_coefficients(num, den, 24)
    return "3 + 20 series"


JOBS = {
    "betti": {"variables": ["x", "y"], "order": 2, "ideal": ["y^3 - x^4"], "point": ["0", "0"]},
    "present": {"variables": ["x", "y"], "order": 2, "ideal": ["y^3 - x^4"], "point": ["0", "0"]},
    "explore": {
        "variables": ["x", "y", "z"],
        "order": 2,
        "ideal": list(CURVE),
        "point": ["0", "0", "0"],
        "depth": 5,
    },
}


@record(12, "determinism: byte-identical JSON across runs and thread counts", None)
def test_determinism():
    with tempfile.TemporaryDirectory() as tmp:
        for mode, job in JOBS.items():
            path = os.path.join(tmp, f"{mode}.json")
            with open(path, "w") as fh:
                json.dump(job, fh)
            outs = set()
            for threads in ("1", "1", "4"):
                proc = subprocess.run(
                    [sys.executable, "-m", "omega_betti.cli", mode, "--input", path, "--threads", threads],
                    capture_output=True,
                )
                assert proc.returncode == 0, proc.stderr
                outs.add(proc.stdout)
            assert len(outs) == 1, mode
    return "betti, present, explore x 3 runs"


if __name__ == "__main__":
    failed = False
    checks = [obj for obj in list(globals().values()) if hasattr(obj, "criterion")]
    for obj in sorted(checks, key=lambda c: c.criterion):
        try:
            obj()
        except Exception:
            failed = True
    print("\n".join(summary_lines()))
    sys.exit(1 if failed else 0)
