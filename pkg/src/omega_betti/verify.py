"""Seeded randomized property suites (the ``verify`` mode)."""

from __future__ import annotations

import random
from fractions import Fraction
from math import comb
from typing import Sequence

from .poly import Polynomial
from .resolution import rank_identity_check
from .universal import convert_basis, dn_recursive, dn_taylor, omega_basis, verify_identity

VARIABLE_NAMES = ("x", "y", "z", "w", "u", "v")


def random_rational(rng: random.Random, bound: int = 5) -> Fraction:
    num = rng.randint(-bound, bound)
    while num == 0:
        num = rng.randint(-bound, bound)
    den = rng.choice((1, 1, 1, 2, 3))
    return Fraction(num, den)


def random_polynomial(
    rng: random.Random, variables: Sequence[str], max_degree: int, max_terms: int = 4
) -> Polynomial:
    s = len(variables)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(0, max_degree)
        exps = [0] * s
        for _ in range(d):
            exps[rng.randrange(s)] += 1
        terms[tuple(exps)] = random_rational(rng)
    return Polynomial(variables, terms)


def identity_suite(rng, n: int, s: int, count: int) -> int:
    variables = VARIABLE_NAMES[:s]
    passed = 0
    for _ in range(count):
        rs = [random_polynomial(rng, variables, 2, 3) for _ in range(n + 1)]
        passed += verify_identity(n, rs)
    return passed


def dn_oracle_suite(rng, n: int, s: int, count: int) -> int:
    variables = VARIABLE_NAMES[:s]
    basis = omega_basis(n, s)
    passed = 0
    for _ in range(count):
        g = random_polynomial(rng, variables, 2 * n, 5)
        passed += convert_basis(dn_taylor(g, basis), "DN") == dn_recursive(g, basis)
    return passed


def verify_suite(seed: int = 0, identity_count: int = 200, oracle_count: int = 500) -> dict:
    """Run every suite; returns ``{suite: {"passed": k, "total": t}}`` plus an overall flag."""
    rng = random.Random(seed)
    suites = {}
    grid = [(n, s) for n in (1, 2, 3) for s in (1, 2, 3)]
    for n, s in grid:
        suites[f"derivation_identity[n={n},s={s}]"] = (
            identity_suite(rng, n, s, identity_count),
            identity_count,
        )
    for n, s in grid:
        suites[f"dn_dual_algorithm[n={n},s={s}]"] = (
            dn_oracle_suite(rng, n, s, oracle_count),
            oracle_count,
        )
    basis_ok = sum(
        len(omega_basis(n, s)) == comb(n + s, s) - 1 for n in range(1, 6) for s in range(1, 6)
    )
    suites["omega_basis_rank[n,s<=5]"] = (basis_ok, 25)
    rank_ok = sum(rank_identity_check(n, s) for n in range(1, 11) for s in range(1, 11))
    suites["rank_identity[n,s<=10]"] = (rank_ok, 100)
    out = {name: {"passed": p, "total": t} for name, (p, t) in suites.items()}
    return {
        "seed": seed,
        "suites": out,
        "all_passed": all(p == t for p, t in suites.values()),
    }
