"""Trigonometric sums with incommensurate frequencies and Weyl exponential averages."""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .primes import sieve_count
from .stats_core import histogram, ks_distance, normal_fit, rng_stream

KINDS = ("independent-irrationals", "log-integers", "log-primes")
GOLDEN = (1 + math.sqrt(5)) / 2


@dataclass(frozen=True)
class FrequencySet:
    kind: str
    values: np.ndarray

    @property
    def N(self):
        return int(self.values.size)


def frequency_set(kind, N, store=None):
    """lambda_1..lambda_N of the requested kind.

    independent-irrationals: k + frac(sqrt p_k)/2, spacing in (1/2, 3/2); square
    roots of distinct primes are linearly independent over the rationals, so
    the set is too.
    """
    k = np.arange(1, N + 1, dtype=float)
    if kind == "independent-irrationals":
        p = sieve_count(N).primes[:N].astype(float)
        vals = k + 0.5 * np.modf(np.sqrt(p))[0]
    elif kind == "log-integers":
        vals = np.log(k + 1)
    elif kind == "log-primes":
        if store is None:
            raise DomainError("log-primes needs a PrimeStore")
        store.require(N)
        vals = np.log(store.primes[:N].astype(float))
    else:
        raise DomainError(f"unknown kind {kind!r}; expected one of {KINDS}")
    return FrequencySet(kind, vals)


def F_N(t, freq, chunk=256):
    """sqrt(2) sum_k cos(lambda_k t) / sqrt(N), vectorised over t."""
    t = np.asarray(t, dtype=float)
    flat = t.ravel()
    out = np.empty(flat.size)
    for lo in range(0, flat.size, chunk):
        out[lo:lo + chunk] = np.cos(np.outer(flat[lo:lo + chunk], freq.values)).sum(axis=1)
    out *= math.sqrt(2 / freq.N)
    return float(out[0]) if t.ndim == 0 else out.reshape(t.shape)


@dataclass(frozen=True)
class KacFit:
    mean: float
    std: float
    ks: float
    histogram: object
    samples: np.ndarray

    @property
    def normal_at_95(self):
        """KS distance to N(0, 1) within the 95% critical value 1.36/sqrt(n)."""
        return bool(self.ks <= 1.36 / math.sqrt(self.samples.size))

    @property
    def excess_kurtosis(self):
        z = (self.samples - self.mean) / self.std
        return float(np.mean(z**4) - 3)


def kac_histogram(freq, T, samples, seed):
    """F_N at ``samples`` points drawn uniformly from (-T, T), with a normal fit."""
    if samples < 1000:
        raise DomainError("need at least 1000 samples")
    t = rng_stream(seed).uniform(-T, T, size=samples)
    vals = F_N(t, freq)
    fit = normal_fit(vals)
    return KacFit(fit.mean, fit.std, ks_distance(vals, 0.0, 1.0), histogram(vals), vals)


def weyl_sequence(kind, N, store=None):
    """a_1..a_N: 'golden' (k phi), 'log-integers' (log k) or 'log-primes' (log p_k)."""
    k = np.arange(1, N + 1, dtype=float)
    if kind == "golden":
        return k * GOLDEN
    if kind == "log-integers":
        return np.log(k)
    if kind == "log-primes":
        if store is None:
            raise DomainError("log-primes needs a PrimeStore")
        store.require(N)
        return np.log(store.primes[:N].astype(float))
    raise DomainError(f"unknown Weyl sequence {kind!r}")


def weyl_sum(kind, N, m=1, store=None):
    """|(1/n) sum_{k<=n} exp(2 pi i m a_k)| for n = 1..N."""
    if N < 10:
        raise DomainError("N must be >= 10")
    a = weyl_sequence(kind, N, store)
    phase = np.mod(m * a, 1.0)  # reduce before the exponential to keep k*phi accurate
    z = np.cumsum(np.exp(2j * np.pi * phase))
    return np.abs(z) / np.arange(1, N + 1)
