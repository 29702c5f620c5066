"""Randomised prime states p'_n = p_n + m_n q, the walk B'_N and its Lyapunov CLT statistic."""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, DomainError
from .series import SeriesTrace, AngleSequence, prefix_sums
from .stats_core import normal_fit, rng_stream


@dataclass(frozen=True)
class RandomPrimeState:
    q: int
    M: int
    N: int
    offsets: np.ndarray
    seed: int
    stream: int = 0

    def shifted(self, primes):
        """p'_n = p_n + m_n q for the first N entries of ``primes``."""
        return primes[:self.N] + self.offsets * self.q


@dataclass(frozen=True)
class LyapunovMoments:
    mu: np.ndarray
    var: np.ndarray
    m_N: float
    s2_N: float


@dataclass(frozen=True)
class CltReport:
    t: float
    N: int
    M: int
    state_count: int
    samples: np.ndarray
    mean: float
    std: float
    m_N: float
    s_N: float
    seed: int


def sample_state(q, M, N, seed, stream=0):
    """Offsets m_n i.i.d. uniform on {0..M}, deterministic in (seed, stream)."""
    if M < 0:
        raise DomainError("M must be >= 0")
    rng = rng_stream(seed, stream)
    offsets = rng.integers(0, M + 1, size=N, dtype=np.int64) if M > 0 else np.zeros(N, np.int64)
    return RandomPrimeState(int(q), int(M), int(N), offsets, int(seed), int(stream))


def _theta(chi, primes):
    theta = AngleSequence(chi, primes).angles()
    return np.nan_to_num(theta), np.isnan(theta)


def B_prime_series(state, chi, t, store):
    """Prefix sums of cos(t log p'_n - theta(p_n)); angles stay at the original primes."""
    if chi.q != state.q:
        raise DomainError("character modulus differs from the state modulus")
    store.require(state.N)
    primes = store.primes[:state.N]
    theta, skip = _theta(chi, primes)
    shifted = state.shifted(primes).astype(float)
    terms = np.where(skip, 0.0, np.cos(t * np.log(shifted) - theta))
    return SeriesTrace(float(t), chi, prefix_sums(terms))


def _term_table(chi, t, M, N, store):
    """cos(t log(p_n + m q) - theta_n) for m = 0..M (rows) and n = 1..N (columns)."""
    store.require(N)
    primes = store.primes[:N]
    theta, skip = _theta(chi, primes)
    m = np.arange(M + 1)[:, None]
    table = np.cos(t * np.log((primes[None, :] + m * chi.q).astype(float)) - theta)
    table[:, skip] = 0.0
    return table


def lyapunov_moments(chi, t, M, N, store):
    """Per-prime mean and variance of the randomised term, and their running totals at N."""
    table = _term_table(chi, t, M, N, store)
    mu = table.mean(axis=0)
    var = np.maximum((table**2).mean(axis=0) - mu**2, 0.0)
    return LyapunovMoments(mu, var, float(np.sum(mu)), float(np.sum(var)))


def lyapunov_condition_check(chi, t, M, N, store, delta=1.0):
    """Lyapunov ratio s_n^{-(2+delta)} sum_{k<=n} E|x_k - mu_k|^{2+delta} for n = 1..N."""
    if delta <= 0:
        raise DomainError("delta must be positive")
    table = _term_table(chi, t, M, N, store)
    mu = table.mean(axis=0)
    var = np.maximum((table**2).mean(axis=0) - mu**2, 0.0)
    s2 = np.cumsum(var)
    if s2[-1] == 0:
        raise DegenerateError("s_N = 0: the randomised terms have no variance")
    absmom = np.cumsum(np.mean(np.abs(table - mu) ** (2 + delta), axis=0))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = absmom / s2 ** (1 + delta / 2)
    ratio[s2 == 0] = np.nan
    return ratio


def clt_experiment(chi, t, M, N, state_count, seed, store):
    """(B'_N - m_N)/s_N over ``state_count`` independent seeded states, with a normal fit."""
    if t == 0:
        raise DegenerateError("t = 0 gives s_N = 0")
    table = _term_table(chi, t, M, N, store)
    mu = table.mean(axis=0)
    var = np.maximum((table**2).mean(axis=0) - mu**2, 0.0)
    m_N, s_N = float(np.sum(mu)), float(np.sqrt(np.sum(var)))
    if s_N == 0:
        raise DegenerateError("s_N = 0")
    cols = np.arange(N)
    out = np.empty(state_count)
    for i in range(state_count):
        offsets = sample_state(chi.q, M, N, seed, stream=i).offsets
        out[i] = table[offsets, cols].sum()
    stat = (out - m_N) / s_N
    fit = normal_fit(stat) if state_count >= 2 else None
    return CltReport(float(t), N, M, state_count, stat,
                     fit.mean if fit else float("nan"), fit.std if fit else float("nan"),
                     m_N, s_N, int(seed))
