"""Segmented arithmetic-function sieve and divisor functionals.

For a range [lo, hi] the sieve tabulates Omega(n) (number of prime factors
with multiplicity, 8-bit), the Liouville sign lambda(n) = (-1)^Omega(n), and
the prime-power base: p when n = p^k, 0 otherwise.  The von Mangoldt value
Lambda(n) = log(base) is recomputed from the stored base prime on every read
and is never stored as a float.

On top of the sieve sit the divisor functionals used by the analytic checks:

    divisor_lambda_sum(m) = sum_{d | m} lambda(d)        (1 iff m is a square)
    rho_u(m, u)           = sum_{d | m, d > u} lambda(d)
    tau_chi(D, n)         = sum_{d | n} chi(d)
    psi_u(D, z, u)        = sum_{u < n <= z} Lambda(n) chi(n)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .characters import FundamentalDiscriminant, chi_period
from .errors import CapacityError, DomainError

__all__ = [
    "SieveTable",
    "primes_upto",
    "build_sieve",
    "shared_sieve",
    "liouville_table",
    "arith_values",
    "divisor_lambda_sum",
    "rho_u",
    "tau_chi",
    "tau_chi_table",
    "psi_u",
]

# Default cap on a single segment: 2^26 entries (~1 GB transient while
# building).  Desk-scale work tops out at 1e7.
DEFAULT_MAX_WIDTH = 1 << 26

RANGE_LIMIT = 1 << 40


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n as an int64 array."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].astype(np.int64)


@dataclass(frozen=True)
class SieveTable:
    """Immutable sieve segment over [lo, hi]."""

    lo: int
    hi: int
    omega: np.ndarray  # uint8
    lambda_sign: np.ndarray  # int8, +-1
    pp_base: np.ndarray  # int64, p if n = p^k else 0

    def _index(self, n: int) -> int:
        if not (self.lo <= n <= self.hi):
            raise DomainError(f"n={n} outside sieve range [{self.lo}, {self.hi}]")
        return n - self.lo

    def omega_of(self, n: int) -> int:
        return int(self.omega[self._index(n)])

    def liouville(self, n: int) -> int:
        return int(self.lambda_sign[self._index(n)])

    def von_mangoldt(self, n: int) -> float:
        base = int(self.pp_base[self._index(n)])
        return math.log(base) if base > 0 else 0.0

    def slice(self, lo: int, hi: int) -> "SieveTable":
        """View of a subrange; sieving is segment-independent so this is exact."""
        if not (self.lo <= lo <= hi <= self.hi):
            raise DomainError("slice outside table range")
        a, b = lo - self.lo, hi - self.lo + 1
        return SieveTable(lo, hi, self.omega[a:b], self.lambda_sign[a:b], self.pp_base[a:b])


def build_sieve(lo: int, hi: int, max_width: int = DEFAULT_MAX_WIDTH) -> SieveTable:
    """Sieve [lo, hi] using primes up to sqrt(hi).

    Each prime power pk <= hi contributes one slice pass: Omega gains 1 on
    multiples of pk, and the tracked cofactor is divided by p once per level,
    so after all passes the cofactor is the part of n built from primes above
    sqrt(hi) (always 1 or a single prime).
    """
    if not (1 <= lo <= hi <= RANGE_LIMIT):
        raise DomainError(f"need 1 <= lo <= hi <= 2^40, got [{lo}, {hi}]")
    width = hi - lo + 1
    if width > max_width:
        raise CapacityError(f"segment width {width} exceeds budget {max_width}")

    ns = np.arange(lo, hi + 1, dtype=np.int64)
    rem = ns.copy()
    omega = np.zeros(width, dtype=np.uint8)
    ppb = np.zeros(width, dtype=np.int64)

    for p in primes_upto(math.isqrt(hi)):
        p = int(p)
        pk = p
        while pk <= hi:
            start = ((lo + pk - 1) // pk) * pk
            if start <= hi:
                sl = slice(start - lo, width, pk)
                omega[sl] += 1
                rem[sl] //= p
            if pk >= lo:
                ppb[pk - lo] = p
            pk *= p

    big = rem > 1  # one prime factor above sqrt(hi) survives
    omega[big] += 1
    prime_left = (rem == ns) & (ns > 1)
    ppb[prime_left] = ns[prime_left]

    lam = np.where(omega & 1, -1, 1).astype(np.int8)
    return SieveTable(lo=lo, hi=hi, omega=omega, lambda_sign=lam, pp_base=ppb)


# One shared table rooted at 1, grown monotonically.  Callers get views.
_shared: list[SieveTable] = []


def shared_sieve(hi: int) -> SieveTable:
    """A (possibly cached) table over [1, hi]."""
    if _shared and _shared[0].hi >= hi:
        return _shared[0].slice(1, hi)
    table = build_sieve(1, hi)
    _shared[:] = [table]
    return table


def liouville_table(x: int) -> np.ndarray:
    """int8 array L of length x+1 with L[n] = lambda(n); L[0] = 0."""
    t = shared_sieve(x)
    out = np.zeros(x + 1, dtype=np.int8)
    out[1:] = t.lambda_sign
    return out


def arith_values(table: SieveTable, n: int) -> tuple[int, int, float]:
    """(Omega(n), lambda(n), Lambda(n)) for n in the table's range."""
    return table.omega_of(n), table.liouville(n), table.von_mangoldt(n)


def _factorize(m: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division; fine for m <= 2^40."""
    if m < 1:
        raise DomainError("factorization needs m >= 1")
    fac = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            fac.append((d, e))
        d += 1 if d == 2 else 2
    if m > 1:
        fac.append((m, 1))
    return fac


def _divisors_with_parity(m: int) -> Iterator[tuple[int, int]]:
    """Yield (d, total prime-factor count of d) over all divisors d of m."""
    fac = _factorize(m)
    divs = [(1, 0)]
    for p, e in fac:
        nxt = []
        for d, k in divs:
            pe = 1
            for j in range(e + 1):
                nxt.append((d * pe, k + j))
                pe *= p
        divs = nxt
    yield from divs


def divisor_lambda_sum(m: int) -> int:
    """sum_{d | m} lambda(d), by literal divisor enumeration.

    Equals 1 when m is a perfect square and 0 otherwise; that identity is
    what the verification suite checks, so this routine must not use it.
    """
    total = 0
    for _, k in _divisors_with_parity(m):
        total += -1 if k & 1 else 1
    return total


def rho_u(m: int, u: float) -> int:
    """rho_u(m) = sum_{d | m, d > u} lambda(d).  The cutoff is strict."""
    if m < 1:
        raise DomainError("m must be >= 1")
    total = 0
    for d, k in _divisors_with_parity(m):
        if d > u:
            total += -1 if k & 1 else 1
    return total


def tau_chi(D: FundamentalDiscriminant, n: int) -> int:
    """tau(n, chi) = sum_{d | n} chi(d); nonnegative for real chi."""
    if n < 1:
        raise DomainError("n must be >= 1")
    per = chi_period(D)
    q = D.q
    return int(sum(int(per[d % q]) for d, _ in _divisors_with_parity(n)))


def tau_chi_table(D: FundamentalDiscriminant, x: int) -> np.ndarray:
    """tau(n, chi) for all n <= x at once, by divisor accumulation."""
    per = chi_period(D)
    q = D.q
    acc = np.zeros(x + 1, dtype=np.int64)
    for d in range(1, x + 1):
        v = int(per[d % q])
        if v:
            acc[d::d] += v
    return acc


def psi_u(
    D: FundamentalDiscriminant,
    z: float,
    u: float,
    table: SieveTable | None = None,
) -> float:
    """psi_u(z, chi) = sum_{u < n <= z} Lambda(n) chi(n).

    Requires z > u >= 0.  Only prime powers contribute; Lambda is recovered
    as log of the stored base prime.
    """
    if u < 0:
        raise DomainError("u must be >= 0")
    if not z > u:
        raise DomainError("psi_u needs z > u")
    hi = math.floor(z)
    lo = math.floor(u) + 1
    if hi < lo:
        return 0.0
    if table is None:
        table = shared_sieve(hi)
    if not (table.lo <= lo and hi <= table.hi):
        raise DomainError("sieve table does not cover (u, z]")
    view = table.slice(lo, hi)
    idx = np.nonzero(view.pp_base)[0]
    if idx.size == 0:
        return 0.0
    ns = idx + lo
    per = chi_period(D).astype(np.float64)
    ch = per[ns % D.q]
    return float(np.sum(np.log(view.pp_base[idx].astype(np.float64)) * ch))
