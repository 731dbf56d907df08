"""Characters: fundamental discriminants, Kronecker symbol, partial sums, Gauss sums."""

import math
import random

import numpy as np
import pytest
from sympy import factorint
from sympy.functions.combinatorial.numbers import kronecker_symbol as sympy_kronecker

from siegelscan import (
    DomainError,
    FundamentalDiscriminant,
    char_partial_sum,
    chi_eval,
    chi_period,
    chi_values_up_to,
    enumerate_fundamentals,
    gauss_expansion_residual,
    gauss_sum,
    is_fundamental,
    kronecker_symbol,
)

# hand-enumerated: every fundamental discriminant in [-50, -1]
NEG_FUNDAMENTALS_TO_50 = [
    -47, -43, -40, -39, -35, -31, -24, -23, -20, -19, -15, -11, -8, -7, -4, -3,
]


def brute_is_fundamental(d):
    # independent route: factor, test squarefreeness and the residue classes
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return all(e == 1 for e in factorint(abs(d)).values())
    if d % 4 == 0:
        m = d // 4
        if m % 4 not in (2, 3):
            return False
        return all(e == 1 for e in factorint(abs(m)).values())
    return False


def test_is_fundamental_matches_brute_force():
    for d in range(-300, 301):
        assert is_fundamental(d) == brute_is_fundamental(d), d


def test_is_fundamental_points():
    assert is_fundamental(-4)
    assert is_fundamental(-3)
    assert is_fundamental(5)
    assert is_fundamental(8)
    assert is_fundamental(-8)
    assert is_fundamental(12)
    assert not is_fundamental(1)
    assert not is_fundamental(0)
    assert not is_fundamental(9)
    assert not is_fundamental(16)
    assert not is_fundamental(-32)
    assert not is_fundamental(45)  # 45 = 9*5 not squarefree


def test_enumerate_fundamentals_frozen_negative_range():
    ds = [D.d for D in enumerate_fundamentals(-50, -1)]
    assert ds == sorted(NEG_FUNDAMENTALS_TO_50)
    assert len(ds) == 16


def test_constructor_rejects_non_fundamental():
    with pytest.raises(DomainError):
        FundamentalDiscriminant(9)
    with pytest.raises(DomainError):
        FundamentalDiscriminant(1)
    assert FundamentalDiscriminant(-4).q == 4
    assert FundamentalDiscriminant(5).q == 5


def test_kronecker_against_sympy():
    rng = random.Random(7)
    pairs = [(a, n) for a in range(-30, 31) for n in range(-30, 31)]
    pairs += [(rng.randint(-10**6, 10**6), rng.randint(-10**4, 10**4)) for _ in range(400)]
    for a, n in pairs:
        assert kronecker_symbol(a, n) == int(sympy_kronecker(a, n)), (a, n)


def test_kronecker_points():
    assert kronecker_symbol(-4, 3) == -1
    assert kronecker_symbol(-4, 5) == 1
    assert kronecker_symbol(8, 3) == -1
    assert kronecker_symbol(5, 7) == -1
    assert kronecker_symbol(12, 7) == -1  # (12/7) = (5/7), 5 not a QR mod 7
    assert kronecker_symbol(3, 0) == 0
    assert kronecker_symbol(1, 0) == 1
    assert kronecker_symbol(-1, 0) == 1  # (a/0) = 1 iff a = +-1


# one period of chi for small |d|, worked out by hand from the symbol
CHI_TABLES = {
    -3: [1, -1],  # chi(1), chi(2); chi(3) = 0
    -4: [1, 0, -1, 0],
    5: [1, -1, -1, 1, 0],
    -7: [1, 1, -1, 1, -1, -1, 0],
    8: [1, 0, -1, 0, -1, 0, 1, 0],
    -8: [1, 0, 1, 0, -1, 0, -1, 0],
    12: [1, 0, 0, 0, -1, 0, -1, 0, 0, 0, 1, 0],
}


def test_chi_residue_tables():
    for d, row in CHI_TABLES.items():
        D = FundamentalDiscriminant(d)
        got = [chi_eval(D, n) for n in range(1, len(row) + 1)]
        assert got == row, d


def test_chi_periodicity_and_multiplicativity():
    for d in (-4, -3, 5, 8, -8, 12, -7, -20, 21):
        D = FundamentalDiscriminant(d)
        q = D.q
        for n in range(1, 3 * q):
            assert chi_eval(D, n) == chi_eval(D, n + q)
        for m in range(1, 40):
            for n in range(1, 40):
                assert chi_eval(D, m * n) == chi_eval(D, m) * chi_eval(D, n)


def test_chi_period_is_minimal():
    # primitivity: no proper divisor of q is a period
    for d in (-4, -3, 5, 8, -8, 12, -24, 28):
        D = FundamentalDiscriminant(d)
        q = D.q
        for step in range(1, q):
            if q % step:
                continue
            broken = any(
                chi_eval(D, n) != chi_eval(D, n + step) for n in range(1, 2 * q)
            )
            assert broken, (d, step)


def test_chi_values_up_to_matches_pointwise():
    for d in (-4, 5, -7, 12):
        D = FundamentalDiscriminant(d)
        vals = chi_values_up_to(D, 200)
        assert vals[0] == 0
        for n in range(1, 201):
            assert int(vals[n]) == chi_eval(D, n)


def test_full_period_sums_to_zero():
    for D in enumerate_fundamentals(-100, 100):
        assert int(np.sum(chi_period(D).astype(np.int64))) == 0, D.d


def test_char_partial_sum_matches_cumsum():
    for d in (-4, -3, 5, -20):
        D = FundamentalDiscriminant(d)
        acc = 0
        for n in range(1, 6 * D.q + 1):
            acc += chi_eval(D, n)
            assert char_partial_sum(D, n) == acc, (d, n)
        assert char_partial_sum(D, 0) == 0


def test_char_partial_sum_large_argument():
    D = FundamentalDiscriminant(-4)
    # chi_-4 sums to 1 on 4k+1 prefixes, 0 on 4k+3 prefixes
    assert char_partial_sum(D, 10**9 + 1) == 1
    assert char_partial_sum(D, 10**9 + 3) == 0


def test_polya_vinogradov_sample():
    for d in (-4, -3, 5, 8, -163, 997, -996):
        D = FundamentalDiscriminant(d)
        q = D.q
        cap = math.sqrt(q) * math.log(q)
        for n in range(1, 4 * q):
            assert abs(char_partial_sum(D, n)) <= cap, (d, n)


def test_gauss_sum_known_values():
    g = gauss_sum(FundamentalDiscriminant(-4))
    assert abs(g.re) < 1e-12 and abs(g.im - 2.0) < 1e-12
    g = gauss_sum(FundamentalDiscriminant(-3))
    assert abs(g.re) < 1e-12 and abs(g.im - math.sqrt(3)) < 1e-12
    g = gauss_sum(FundamentalDiscriminant(5))
    assert abs(g.re - math.sqrt(5)) < 1e-12 and abs(g.im) < 1e-12
    g = gauss_sum(FundamentalDiscriminant(8))
    assert abs(g.re - math.sqrt(8)) < 1e-12 and abs(g.im) < 1e-12


def test_gauss_sum_modulus_and_purity():
    for D in enumerate_fundamentals(-300, 300):
        g = gauss_sum(D)
        assert abs(math.hypot(g.re, g.im) - math.sqrt(D.q)) < 1e-9, D.d
        if D.d > 0:
            assert abs(g.im) < 1e-9
        else:
            assert abs(g.re) < 1e-9


def test_gauss_expansion_residual_small():
    for d in (-4, -3, 5, 8, -7, 12):
        D = FundamentalDiscriminant(d)
        for n in range(1, 2 * D.q + 1):
            assert gauss_expansion_residual(D, n) < 1e-12, (d, n)


def test_chi_eval_rejects_nonpositive():
    D = FundamentalDiscriminant(-4)
    with pytest.raises(DomainError):
        chi_eval(D, 0)
    with pytest.raises(DomainError):
        chi_eval(D, -3)
