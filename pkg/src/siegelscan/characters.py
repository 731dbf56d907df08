"""Primitive real Dirichlet characters attached to fundamental discriminants.

A fundamental discriminant is an integer d != 1 with either d = 1 (mod 4) and
d squarefree, or d = 4m with m = 2, 3 (mod 4) and m squarefree.  Each such d
defines the primitive quadratic character chi(n) = (d|n) (Kronecker symbol) of
modulus q = |d|.  chi is completely multiplicative, has period q, satisfies
chi(-1) = sign(d), and its Gauss sum tau(chi) = sum_{a=1}^{q} chi(a) e(a/q)
has |tau(chi)|^2 = q, with tau purely real for d > 0 and purely imaginary for
d < 0.  Here e(t) = exp(2*pi*i*t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

__all__ = [
    "FundamentalDiscriminant",
    "GaussSum",
    "is_fundamental",
    "enumerate_fundamentals",
    "kronecker_symbol",
    "chi_eval",
    "chi_period",
    "chi_values_up_to",
    "char_partial_sum",
    "gauss_sum",
    "gauss_expansion_residual",
]


def _is_squarefree(m: int) -> bool:
    m = abs(m)
    if m == 0:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return False
        d += 1 if d == 2 else 2
    return True


def is_fundamental(d: int) -> bool:
    """True iff d is a fundamental discriminant (d = 1 is excluded)."""
    if d == 0 or d == 1:
        return False
    r = d % 4
    if r == 1:
        return _is_squarefree(d)
    if r == 0:
        m = d // 4
        return m % 4 in (2, 3) and _is_squarefree(m)
    return False


@dataclass(frozen=True)
class FundamentalDiscriminant:
    """A fundamental discriminant d with modulus q = |d|."""

    d: int

    def __post_init__(self) -> None:
        if not is_fundamental(self.d):
            raise DomainError(f"{self.d} is not a fundamental discriminant")

    @property
    def q(self) -> int:
        return abs(self.d)


def enumerate_fundamentals(lo: int, hi: int) -> list[FundamentalDiscriminant]:
    """All fundamental discriminants d with lo <= d <= hi, ascending."""
    return [FundamentalDiscriminant(d) for d in range(lo, hi + 1) if is_fundamental(d)]


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for arbitrary integers.

    Computed by the standard reduction: factor the sign and the even part out
    of n, then run the Jacobi-symbol loop with quadratic reciprocity.  No
    residue tables; (a|2) follows the 2-adic rule (0 if a even, +1 if
    a = +-1 mod 8, -1 if a = +-3 mod 8).
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        while n % 2 == 0:
            n //= 2
            if a % 8 in (3, 5):
                result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def chi_eval(D: FundamentalDiscriminant, n: int) -> int:
    """chi(n) = (d|n), in {-1, 0, +1}.  Requires n >= 1."""
    if n < 1:
        raise DomainError("chi is evaluated at integers n >= 1")
    return kronecker_symbol(D.d, n)


def _small_primes(n: int) -> list[int]:
    # local sieve; kept tiny on purpose (n is a modulus, at most ~1e6 here)
    if n < 2:
        return []
    mask = bytearray([1]) * (n + 1)
    mask[0] = mask[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i in range(2, n + 1) if mask[i]]


@lru_cache(maxsize=512)
def _period_and_prefix(d: int) -> tuple[np.ndarray, np.ndarray, int]:
    """One period of chi as an int8 array indexed by n mod q, plus prefix sums.

    chi(r) for 1 <= r < q is assembled multiplicatively from chi at primes:
    chi(p^k) = chi(p)^k, so one pass of slice multiplications over prime
    powers < q fills the period.  prefix[r] = sum_{n <= r} chi(n).
    """
    q = abs(d)
    vals = np.ones(q, dtype=np.int8)
    vals[0] = 0
    for p in _small_primes(q - 1):
        v = kronecker_symbol(d, p)
        pk = p
        while pk < q:
            vals[pk::pk] *= v
            pk *= p
    prefix = np.cumsum(vals, dtype=np.int64)
    return vals, prefix, int(prefix[-1])


def chi_period(D: FundamentalDiscriminant) -> np.ndarray:
    """chi over one period: an int8 array a with a[n % q] = chi(n)."""
    return _period_and_prefix(D.d)[0]


def chi_values_up_to(D: FundamentalDiscriminant, x: int) -> np.ndarray:
    """int8 array v of length x+1 with v[n] = chi(n); v[0] = 0."""
    if x < 0:
        raise DomainError("x must be nonnegative")
    return np.resize(chi_period(D), x + 1)


def char_partial_sum(D: FundamentalDiscriminant, N: int) -> int:
    """sum_{n<=N} chi(n), exactly, via one period and its prefix sums."""
    if N < 0:
        raise DomainError("N must be nonnegative")
    _, prefix, full = _period_and_prefix(D.d)
    k, r = divmod(N, D.q)
    return k * full + int(prefix[r])


@dataclass(frozen=True)
class GaussSum:
    """tau(chi) = sum_{a=1}^{q} chi(a) e(a/q), stored as (re, im)."""

    re: float
    im: float
    q: int

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @property
    def modulus(self) -> float:
        return math.hypot(self.re, self.im)


def gauss_sum(D: FundamentalDiscriminant) -> GaussSum:
    """Gauss sum of chi by direct summation over one period.

    |tau|^2 = q always; tau = sqrt(q) for d > 0 and i*sqrt(q) for d < 0.
    Those facts are checked by the test suite, not assumed here.
    """
    q = D.q
    if q > 10**6:
        raise DomainError("gauss_sum: modulus above the 1e6 desk limit")
    per = chi_period(D).astype(np.float64)
    ang = 2.0 * np.pi * np.arange(q, dtype=np.float64) / q
    re = float(np.sum(per * np.cos(ang)))
    im = float(np.sum(per * np.sin(ang)))
    return GaussSum(re=re, im=im, q=q)


def gauss_expansion_residual(D: FundamentalDiscriminant, n: int) -> float:
    """| chi(n) - (1/tau) sum_{a=1}^{q} chi(a) e(an/q) |.

    The additive expansion of chi through its Gauss sum; the phases a*n are
    reduced mod q exactly in integers before exponentiation so the residual
    reflects only rounding, not argument loss.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    q = D.q
    per = chi_period(D).astype(np.float64)
    idx = (np.arange(q, dtype=np.int64) * n) % q
    table = np.exp(2j * np.pi * np.arange(q) / q)
    s = complex(np.sum(per * table[idx]))
    tau = gauss_sum(D).value
    return abs(chi_eval(D, n) - s / tau)
