"""Dirichlet L-values at s = 1, Euler products, and error functionals.

For the quadratic character chi mod q = |d| the truncated series

    L(1, chi)  ~  sum_{n<=x} chi(n)/n        (tail bound sqrt(q) log(q) / x)
    L'(1, chi) ~ -sum_{n<=x} chi(n) log(n)/n (tail bound 2 sqrt(q) log(q) (log x + 1)/x)

are computed directly, and L'(1, chi) is also recovered from the divisor
rearrangement

    sum_{n<=x} tau(n, chi)/n = L(1, chi)(log x + gamma) + L'(1, chi) + err,

with err of size O(q^{1/4} x^{-1/2} log x); the rearranged route uses
L(1, chi) truncated at x^2 so its own error stays below that envelope.

The module also carries the product quantities used by the discriminant scan

    P(q)       = prod_{p<=q} (1 - 1/p)(1 + chi(p)/p)^{-1}
    main term  = (pi^2/6) prod_{p|q} (1 + 1/p) prod_{p<=q, chi(p)=1} (1+1/p)/(1-1/p)

whose product collapses to zeta(2) prod_{p|q} (1 - 1/p^2) exactly, the class
number formula oracle for d < 0, and the two error functionals eps(x, u) and
M(x, omega) that appear in measured envelopes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import digamma

from .characters import FundamentalDiscriminant, chi_period, chi_values_up_to
from .errors import ContractError, DomainError
from .sieve import primes_upto

__all__ = [
    "EULER_GAMMA",
    "LValueEstimate",
    "ErrorFunctionals",
    "MultiplicativeFunc",
    "l_one",
    "l_one_prime_direct",
    "l_one_prime_tau",
    "tau_over_n_sum",
    "class_number_oracle",
    "euler_p_ratio",
    "main_term_product",
    "coprime_zeta2_partial",
    "epsilon_functional",
    "mean_variation_bound",
    "error_functionals",
    "theta_and_s",
    "mf_one",
    "mf_liouville",
    "mf_liouville_times_chi",
    "mf_char_flip_cutoff",
    "values_up_to",
]

EULER_GAMMA = 0.57721566490153286

# Above this truncation the character sum is evaluated by complete periods
# (digamma identity) instead of literal term-by-term summation.
_DIRECT_LIMIT = 2 * 10**7


@dataclass(frozen=True)
class LValueEstimate:
    """A truncated L-value with its truncation point and rigorous tail bound."""

    value: float
    truncation: float
    bound: float
    method: str  # "direct" | "tau-identity" | "class-number"


@dataclass(frozen=True)
class ErrorFunctionals:
    epsilon: float
    m_bound: float


@lru_cache(maxsize=2)
def _inv_n(x: int) -> np.ndarray:
    return 1.0 / np.arange(1, x + 1, dtype=np.float64)


@lru_cache(maxsize=2)
def _log_over_n(x: int) -> np.ndarray:
    ns = np.arange(1, x + 1, dtype=np.float64)
    return np.log(ns) / ns


@lru_cache(maxsize=2)
def _harmonic_and_floors(x: int) -> tuple[np.ndarray, np.ndarray]:
    """(H, F) with H[j] = sum_{k<=j} 1/k (H[0] = 0) and F[i] = x // (i+1)."""
    h = np.zeros(x + 1, dtype=np.float64)
    np.cumsum(_inv_n(x), out=h[1:])
    floors = x // np.arange(1, x + 1, dtype=np.int64)
    return h, floors


def _chi_over_n_partial(D: FundamentalDiscriminant, x: int) -> float:
    """sum_{n<=x} chi(n)/n exactly as written (up to rounding).

    Literal vectorized summation below _DIRECT_LIMIT.  Beyond that the sum is
    grouped into complete periods: with x = K q + R,

        sum_{n<=Kq} chi(n)/n = (1/q) sum_{r=1}^{q} chi(r) [psi(K + r/q) - psi(r/q)]

    (psi = digamma), plus the literal partial block of R terms.  Same value,
    O(q) work.
    """
    q = D.q
    if x <= _DIRECT_LIMIT:
        ch = chi_values_up_to(D, x)[1:].astype(np.float64)
        return float(np.sum(ch * _inv_n(x)))
    per = chi_period(D)
    K, R = divmod(x, q)
    r = np.arange(1, q + 1, dtype=np.float64)
    ch = per[np.arange(1, q + 1) % q].astype(np.float64)
    main = float(np.sum(ch * (digamma(K + r / q) - digamma(r / q)))) / q
    if R:
        rr = np.arange(1, R + 1)
        tail = float(np.sum(per[rr % q] / (K * q + rr)))
    else:
        tail = 0.0
    return main + tail


def l_one(D: FundamentalDiscriminant, x: float) -> LValueEstimate:
    """Truncated L(1, chi) = sum_{n<=x} chi(n)/n with tail bound sqrt(q) log(q)/x."""
    q = D.q
    if x < q:
        raise DomainError("truncation x must be >= q")
    value = _chi_over_n_partial(D, math.floor(x))
    bound = math.sqrt(q) * math.log(q) / x
    return LValueEstimate(value=value, truncation=float(x), bound=bound, method="direct")


def l_one_prime_direct(D: FundamentalDiscriminant, x: float) -> LValueEstimate:
    """Truncated L'(1, chi) = -sum_{n<=x} chi(n) log(n)/n.

    Tail bound 2 sqrt(q) log(q) (log x + 1)/x by partial summation against
    the Polya-Vinogradov bound.
    """
    q = D.q
    if x < q:
        raise DomainError("truncation x must be >= q")
    X = math.floor(x)
    if X > _DIRECT_LIMIT:
        raise DomainError("direct L' truncation above the desk limit")
    ch = chi_values_up_to(D, X)[1:].astype(np.float64)
    value = -float(np.sum(ch * _log_over_n(X)))
    bound = 2.0 * math.sqrt(q) * math.log(q) * (math.log(x) + 1.0) / x
    return LValueEstimate(value=value, truncation=float(x), bound=bound, method="direct")


def tau_over_n_sum(D: FundamentalDiscriminant, x: int) -> float:
    """sum_{n<=x} tau(n, chi)/n via the divisor pairing n = d k:

        sum_{d<=x} chi(d)/d * H(floor(x/d)),   H = harmonic numbers.
    """
    if x < 1:
        raise DomainError("x must be >= 1")
    h, floors = _harmonic_and_floors(x)
    ch = chi_values_up_to(D, x)[1:].astype(np.float64)
    return float(np.sum(ch * _inv_n(x) * h[floors]))


def l_one_prime_tau(
    D: FundamentalDiscriminant, x: float, c_cal: float = 10.0
) -> LValueEstimate:
    """L'(1, chi) recovered from the tau(n, chi)/n partial sum.

        L'(1, chi) ~ sum_{n<=x} tau(n, chi)/n - L(1, chi)(log x + gamma)

    using L(1, chi) truncated at x^2.  Bound: c_cal q^{1/4} x^{-1/2} log x
    plus the propagated L(1) tail, (log x + gamma) * sqrt(q) log(q) / x^2.
    """
    q = D.q
    if x < q:
        raise DomainError("truncation x must be >= q")
    if c_cal <= 0:
        raise DomainError("c_cal must be positive")
    X = math.floor(x)
    l1 = l_one(D, float(x) * float(x))
    value = tau_over_n_sum(D, X) - l1.value * (math.log(x) + EULER_GAMMA)
    bound = c_cal * q**0.25 * math.log(x) / math.sqrt(x)
    bound += (math.log(x) + EULER_GAMMA) * l1.bound
    return LValueEstimate(
        value=value, truncation=float(x), bound=bound, method="tau-identity"
    )


def class_number_oracle(D: FundamentalDiscriminant) -> LValueEstimate:
    """Exact L(1, chi) for d < 0 via the class number formula.

    h(d) is counted by enumerating reduced integral binary quadratic forms
    (a, b, c) of discriminant d: b^2 - 4ac = d with -a < b <= a <= c and
    b >= 0 whenever a = c.  Then L(1, chi) = 2 pi h / (w sqrt(q)) where the
    unit count w is 6 for d = -3, 4 for d = -4, and 2 otherwise.
    """
    d = D.d
    if d >= 0:
        raise DomainError("class number oracle is for d < 0 only")
    q = D.q
    if q > 10**6:
        raise DomainError("class number oracle limited to |d| <= 1e6")
    h = 0
    for a in range(1, math.isqrt(q // 3) + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            h += 1
    w = 6 if d == -3 else 4 if d == -4 else 2
    value = 2.0 * math.pi * h / (w * math.sqrt(q))
    return LValueEstimate(value=value, truncation=math.inf, bound=0.0, method="class-number")


def euler_p_ratio(D: FundamentalDiscriminant) -> float:
    """P(q) = prod_{p<=q} (1 - 1/p)(1 + chi(p)/p)^{-1}, accumulated in logs."""
    per = chi_period(D)
    q = D.q
    acc = 0.0
    for p in primes_upto(q):
        p = int(p)
        acc += math.log1p(-1.0 / p) - math.log1p(int(per[p % q]) / p)
    return math.exp(acc)


def main_term_product(D: FundamentalDiscriminant) -> float:
    """(pi^2/6) prod_{p|q} (1 + 1/p) prod_{p<=q, chi(p)=1} (1 + 1/p)(1 - 1/p)^{-1}.

    The product prediction for L'(1, chi) in the tiny-L(1) regime; kept in
    log space so that main_term_product(D) * euler_p_ratio(D) matches
    zeta(2) prod_{p|q} (1 - 1/p^2) to rounding.
    """
    per = chi_period(D)
    q = D.q
    acc = 0.0
    for p in primes_upto(q):
        p = int(p)
        v = int(per[p % q])
        if v == 0 and q % p == 0:
            acc += math.log1p(1.0 / p)
        elif v == 1:
            acc += math.log1p(1.0 / p) - math.log1p(-1.0 / p)
    return (math.pi**2 / 6.0) * math.exp(acc)


def coprime_zeta2_partial(q: int, K: int) -> float:
    """sum_{k < K, gcd(k, q) = 1} 1/k^2 (strict upper limit).

    Within 2/(K-1) of zeta(2) prod_{p|q} (1 - 1/p^2) since the dropped tail
    is at most sum_{k>=K} 1/k^2 <= 1/(K-1).
    """
    if q < 1 or K < 2:
        raise DomainError("need q >= 1 and K >= 2")
    ks = np.arange(1, K, dtype=np.int64)
    mask = np.gcd(ks, q) == 1
    return float(np.sum(1.0 / (ks[mask].astype(np.float64) ** 2)))


def epsilon_functional(x: float, u: float) -> float:
    """eps(x, u) = [ (log(x/u))^{sqrt(3)-2} + (log(2x/u^2)/log(x/u))^{1-2/pi} ] loglog x.

    Domain: x > u >= 1 and 2 sqrt(x) < u^2 < x.
    """
    if not x > u:
        raise DomainError("epsilon functional needs x > u")
    if u < 1:
        raise DomainError("epsilon functional needs u >= 1")
    if not 2.0 * math.sqrt(x) < u * u:
        raise DomainError("epsilon functional needs 2*sqrt(x) < u^2")
    if not u * u < x:
        raise DomainError("epsilon functional needs u^2 < x")
    lg = math.log(x / u)
    ratio = math.log(2.0 * x / (u * u)) / lg
    return (lg ** (math.sqrt(3.0) - 2.0) + ratio ** (1.0 - 2.0 / math.pi)) * math.log(
        math.log(x)
    )


def mean_variation_bound(x: float, omega: float) -> float:
    """M(x, w) = (log(2w)/log x)^{1-2/pi} log(log x / log(2w)) + loglog x / (log x)^{2-sqrt(3)}.

    Domain: x >= 16 and 1 <= w <= sqrt(x)/2.
    """
    if x < 16:
        raise DomainError("mean variation bound needs x >= 16")
    if omega < 1:
        raise DomainError("mean variation bound needs omega >= 1")
    if not omega <= math.sqrt(x) / 2.0:
        raise DomainError("mean variation bound needs omega <= sqrt(x)/2")
    lx = math.log(x)
    lw = math.log(2.0 * omega)
    first = (lw / lx) ** (1.0 - 2.0 / math.pi) * math.log(lx / lw)
    second = math.log(lx) / lx ** (2.0 - math.sqrt(3.0))
    return first + second


def error_functionals(x: float, u: float, omega: float) -> ErrorFunctionals:
    """Both envelope functionals at once; each argument checked by name."""
    return ErrorFunctionals(
        epsilon=epsilon_functional(x, u),
        m_bound=mean_variation_bound(x, omega),
    )


# ---------------------------------------------------------------------------
# Multiplicative-function descriptors and bulk evaluation


@dataclass(frozen=True)
class MultiplicativeFunc:
    """A multiplicative f described by its prime-power values f(p^k).

    All values must satisfy |f(p^k)| <= 1.  When completely_multiplicative
    is set, f(p^k) = f(p)^k is assumed and only f(p) is consulted.
    """

    name: str
    prime_power: Callable[[int, int], float]
    completely_multiplicative: bool = False

    def at(self, p: int, k: int = 1) -> float:
        v = float(self.prime_power(p, k))
        if abs(v) > 1.0 + 1e-12:
            raise ContractError(f"{self.name}: |f({p}^{k})| = {abs(v)} exceeds 1")
        return v


def mf_one() -> MultiplicativeFunc:
    return MultiplicativeFunc("one", lambda p, k: 1.0, completely_multiplicative=True)


def mf_liouville() -> MultiplicativeFunc:
    return MultiplicativeFunc(
        "liouville", lambda p, k: (-1.0) ** k, completely_multiplicative=True
    )


def mf_liouville_times_chi(D: FundamentalDiscriminant) -> MultiplicativeFunc:
    per = chi_period(D)
    q = D.q
    return MultiplicativeFunc(
        f"liouville*chi[{D.d}]",
        lambda p, k: (-float(per[p % q])) ** k,
        completely_multiplicative=True,
    )


def mf_char_flip_cutoff(D: FundamentalDiscriminant) -> MultiplicativeFunc:
    """f(p) = -chi(p) for p <= q, f(p) = 1 above, completely multiplicative.

    The construction whose mean value ties the Liouville-chi sum to P(q).
    """
    per = chi_period(D)
    q = D.q
    return MultiplicativeFunc(
        f"char-flip-cutoff[{D.d}]",
        lambda p, k: (-float(per[p % q])) ** k if p <= q else 1.0,
        completely_multiplicative=True,
    )


def values_up_to(f: MultiplicativeFunc, x: int) -> np.ndarray:
    """float64 array v of length x+1 with v[n] = f(n); v[0] = 0, v[1] = 1.

    Completely multiplicative f: one slice multiplication per prime power
    (skipping f(p) = 1).  General multiplicative f: smallest-prime-factor
    walk; slower, only used off the hot paths.
    """
    if x < 1:
        raise DomainError("x must be >= 1")
    vals = np.ones(x + 1, dtype=np.float64)
    vals[0] = 0.0
    primes = primes_upto(x)
    if f.completely_multiplicative:
        for p in primes:
            p = int(p)
            v = f.at(p)
            if v == 1.0:
                continue
            pk = p
            while pk <= x:
                vals[pk::pk] *= v
                pk *= p
        return vals

    spf = np.zeros(x + 1, dtype=np.int64)
    for p in primes:
        p = int(p)
        sl = spf[p::p]
        sl[sl == 0] = p
    pp_cache: dict[tuple[int, int], float] = {}
    for n in range(2, x + 1):
        p = int(spf[n])
        m, k = n, 0
        while m % p == 0:
            m //= p
            k += 1
        key = (p, k)
        w = pp_cache.get(key)
        if w is None:
            w = f.at(p, k)
            pp_cache[key] = w
        vals[n] = vals[m] * w
    return vals


def theta_and_s(f: MultiplicativeFunc, x: float) -> tuple[float, float]:
    """(Theta(f, x), s(f, x)) over primes p <= x:

        Theta = prod_p (1 + f(p)/p + f(p^2)/p^2 + ...) (1 - 1/p)
        s     = sum_p |1 - f(p)| / p

    The local series is summed in closed form for completely multiplicative
    f and truncated at a 1e-12 geometric tail otherwise.
    """
    if x < 2:
        return 1.0, 0.0
    log_theta = 0.0
    s = 0.0
    dead = False
    for p in primes_upto(math.floor(x)):
        p = int(p)
        fp = f.at(p)
        s += abs(1.0 - fp) / p
        if dead:
            continue
        if f.completely_multiplicative:
            local = 1.0 / (1.0 - fp / p)
        else:
            local = 1.0
            term_k, pk = 1, p
            # |f| <= 1 makes the tail geometric with ratio 1/p
            while 1.0 / pk > 1e-12 * (1.0 - 1.0 / p):
                local += f.at(p, term_k) / pk
                term_k += 1
                pk *= p
        if local <= 0.0:
            dead = True
            continue
        log_theta += math.log1p(-1.0 / p) + math.log(local)
    theta = 0.0 if dead else math.exp(log_theta)
    return theta, s
