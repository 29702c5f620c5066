"""Segmented sieve, 1-based prime indexing and prime-counting helpers."""
import math

import numpy as np
from scipy.special import expi

from .errors import DomainError, InsufficientSieveError

DEFAULT_SEGMENT = 1 << 22  # odd numbers per segment, i.e. 4 MiB of flags


class PrimeStore:
    """Immutable ordered table of all primes <= limit, indexed from p_1 = 2."""

    def __init__(self, limit, primes):
        self.limit = int(limit)
        self.primes = np.asarray(primes, dtype=np.int64)
        self.primes.setflags(write=False)

    def __len__(self):
        return int(self.primes.size)

    @property
    def count(self):
        return len(self)

    def p(self, n):
        """The n-th prime (1-based)."""
        if n < 1 or n > len(self):
            raise InsufficientSieveError(
                f"p_{n} not in store of {len(self)} primes", required_limit(n))
        return int(self.primes[n - 1])

    def pi(self, x):
        """Prime-counting function for x <= limit."""
        if x > self.limit:
            raise InsufficientSieveError(f"pi({x}) needs a sieve to {x}", int(x))
        return int(np.searchsorted(self.primes, x, side="right"))

    def require(self, n):
        if n > len(self):
            raise InsufficientSieveError(
                f"need {n} primes, store has {len(self)} (sieve to >= {required_limit(n)})",
                required_limit(n))

    def __repr__(self):
        return f"PrimeStore(limit={self.limit}, count={len(self)})"


def required_limit(n):
    """Upper bound on p_n: n(log n + log log n) for n >= 6 (Rosser)."""
    if n < 6:
        return 13
    return int(n * (math.log(n) + math.log(math.log(n)))) + 1


def _simple_sieve(n):
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for i in range(3, math.isqrt(n) + 1, 2):
        if flags[i]:
            flags[i * i::2 * i] = False
    return np.flatnonzero(flags).astype(np.int64)


def sieve(limit, segment=DEFAULT_SEGMENT):
    """All primes <= limit via an odd-only segmented sieve of Eratosthenes."""
    limit = int(limit)
    if limit < 2:
        raise DomainError("sieve limit must be >= 2")
    base = _simple_sieve(math.isqrt(limit))[1:]  # odd base primes
    n_odd = (limit + 1) // 2  # flag i stands for 2i+1
    chunks = [np.array([2], dtype=np.int64)]
    for lo in range(0, n_odd, segment):
        hi = min(lo + segment, n_odd)
        flags = np.ones(hi - lo, dtype=bool)
        lo_val, hi_val = 2 * lo + 1, 2 * hi - 1
        for p in base:
            p = int(p)
            start = p * p
            if start > hi_val:
                break
            if start < lo_val:
                start = lo_val + (-lo_val) % p
                if start % 2 == 0:
                    start += p
            flags[(start - 1) // 2 - lo::p] = False
        if lo == 0:
            flags[0] = False  # 1 is not prime
        chunks.append(2 * (lo + np.flatnonzero(flags)).astype(np.int64) + 1)
    return PrimeStore(limit, np.concatenate(chunks))


def sieve_count(n, segment=DEFAULT_SEGMENT):
    """Store holding at least the first n primes."""
    return sieve(max(required_limit(n), 2), segment)


def first_n(store, N):
    """p_1..p_N as an int64 array."""
    store.require(N)
    return store.primes[:N]


def log_integral(x):
    """Principal-value Li(x) = PV int_0^x dt/log t = Ei(log x)."""
    x = float(x)
    if x <= 1.0:
        raise DomainError("log_integral needs x > 1")
    return float(expi(math.log(x)))


def cramer_gap_violations(store):
    """Pairs (p_n, gap) with p_n > 7 and p_{n+1} - p_n >= log^2 p_n."""
    p = store.primes
    if p.size == 0:
        raise DomainError("empty store")
    gaps = np.diff(p)
    lead = p[:-1]
    bad = (lead > 7) & (gaps >= np.log(lead.astype(float)) ** 2)
    return [(int(a), int(g)) for a, g in zip(lead[bad], gaps[bad])]
