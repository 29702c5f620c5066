"""Angle sequences, the walk B_N(t) = sum cos(t log p_n - theta_n), block sums and growth exponents."""
from dataclasses import dataclass

import numba
import numpy as np

from .errors import DegenerateError, DomainError, InsufficientSieveError
from .stats_core import linfit

SKIP = "skip"
ZERO_ANGLE = "zero_angle"
CHUNK = 1 << 16


class AngleSequence:
    """Angle codes of chi(p_n) for n = 1..N; code -1 marks p_n | q.

    ``codes`` are numerators over ``chi.exponent``.  How a divisor of q is
    treated downstream is chosen by a policy: ``"skip"`` drops it, while
    ``"zero_angle"`` counts it as angle 0 (the convention of the residue
    frequency tables).
    """

    def __init__(self, chi, primes):
        self.chi = chi
        self.primes = primes
        self.codes = chi.codes[primes % chi.q]

    @property
    def n_max(self):
        return int(self.codes.size)

    @property
    def skips(self):
        return self.codes < 0

    def _codes(self, policy):
        if policy == ZERO_ANGLE:
            return np.where(self.codes < 0, 0, self.codes)
        if policy == SKIP:
            return self.codes
        raise DomainError(f"unknown divisor policy {policy!r}")

    def fractions(self):
        """Angles as fractions of 2 pi in (-1/2, 1/2] (None at skips)."""
        return [None if c < 0 else self.chi.angle(int(p)) for c, p in zip(self.codes, self.primes)]

    def angles(self, policy=SKIP):
        """Angles in radians in (-pi, pi]; NaN at skips under the skip policy."""
        c = self._codes(policy)
        L = self.chi.exponent
        signed = np.where(2 * c > L, c - L, c)
        out = 2 * np.pi * signed / L
        return np.where(c < 0, np.nan, out)

    def cosines(self, policy=SKIP):
        """cos(theta_n), exact for angles in multiples of pi/3 and pi/2; 0 at skips."""
        c = self._codes(policy)
        table = _cos_table(self.chi.exponent)
        return np.where(c < 0, 0.0, table[np.where(c < 0, 0, c)])

    def labels(self, policy=ZERO_ANGLE):
        """Labels a in 1..phi(q) for the equally spaced angles pi(2a - phi)/phi; 0 at skips."""
        c = self._codes(policy)
        L = self.chi.exponent
        phi = _phi(self.chi)
        signed = np.where(2 * c > L, c - L, c)
        lab = signed * phi // L + phi // 2
        return np.where(c < 0, 0, lab)


def _phi(chi):
    from .characters import totient
    return totient(chi.q)


def _cos_table(L):
    t = np.cos(2 * np.pi * np.arange(L) / L)
    for exact in (-1.0, -0.5, 0.0, 0.5, 1.0):  # snap the rational values
        t[np.abs(t - exact) < 1e-12] = exact
    return t


def angle_sequence(chi, store, N):
    store.require(N)
    return AngleSequence(chi, store.primes[:N])


def alpha_angle(a, phi):
    """Equally spaced label angle pi(2a - phi)/phi for a = 1..phi."""
    return np.pi * (2 * np.asarray(a) - phi) / phi


def b_term(t, p, theta):
    return float(np.cos(t * np.log(p) - theta))


@dataclass(frozen=True)
class SeriesTrace:
    """Prefix sums values[n-1] = B_n, n = 1..N (B_0 = 0 implicit)."""
    t: float
    chi: object
    values: np.ndarray

    @property
    def N(self):
        return int(self.values.size)

    def at(self, n):
        return 0.0 if n == 0 else float(self.values[n - 1])


@numba.njit(cache=True)
def _kahan_cumsum(x):
    out = np.empty_like(x)
    s = 0.0
    c = 0.0
    for i in range(x.size):
        y = x[i] - c
        t = s + y
        c = (t - s) - y
        s = t
        out[i] = s
    return out


def prefix_sums(terms, compensated=False):
    """Left-to-right prefix sums over fixed 2^16-term chunks combined in index order."""
    terms = np.asarray(terms, dtype=float)
    if compensated:
        return _kahan_cumsum(terms)
    out = np.empty_like(terms)
    carry = 0.0
    for lo in range(0, terms.size, CHUNK):
        part = np.cumsum(terms[lo:lo + CHUNK]) + carry
        out[lo:lo + CHUNK] = part
        carry = part[-1]
    return out


def walk_terms(chi, t, primes, policy=SKIP):
    seq = AngleSequence(chi, primes)
    theta = seq.angles(policy)
    logp = np.log(primes.astype(float))
    terms = np.cos(t * logp - np.nan_to_num(theta))
    return np.where(np.isnan(theta), 0.0, terms)


def B_series(chi, t, N, store, compensated=False):
    """B_n(t, chi) for n = 1..N; terms with p_n | q contribute 0 but keep their index."""
    if N == 0:
        return SeriesTrace(float(t), chi, np.zeros(0))
    store.require(N)
    terms = walk_terms(chi, t, store.primes[:N])
    return SeriesTrace(float(t), chi, prefix_sums(terms, compensated))


def C_series(chi, N, store, policy=SKIP):
    """B_n at t = 0 from the exact cosine table, so sums of halves stay exact."""
    store.require(N)
    cos = AngleSequence(chi, store.primes[:N]).cosines(policy)
    return SeriesTrace(0.0, chi, prefix_sums(cos))


def block_value(chi, ell, N, store, policy=SKIP):
    """C_N(ell) = sum of cos(theta_n) for n = ell..ell+N-1."""
    if ell < 1 or N < 0:
        raise DomainError("need ell >= 1 and N >= 0")
    if ell + N - 1 > len(store):
        raise InsufficientSieveError(f"block ends at index {ell + N - 1} beyond store")
    seq = AngleSequence(chi, store.primes[ell - 1:ell - 1 + N])
    return float(np.sum(seq.cosines(policy)))


def scaling_exponent(trace, window=None):
    """Growth exponent alpha in RMS(B) ~ N^alpha over dyadic blocks [2^k, 2^{k+1}).

    Returns (alpha, stderr) from a least-squares fit of log RMS against the
    log of each block's geometric centre.
    """
    values = trace.values if isinstance(trace, SeriesTrace) else np.asarray(trace, dtype=float)
    lo, hi = window if window is not None else (100, values.size)
    if lo < 100 or hi > values.size or hi <= lo:
        raise DomainError("window must satisfy 100 <= N_lo < N_hi <= N")
    xs, ys = [], []
    k = int(np.floor(np.log2(lo)))
    while 2**k <= hi:
        a, b = max(2**k, lo), min(2 ** (k + 1) - 1, hi)
        if b - a + 1 >= max(16, (2**k) // 4):
            block = values[a - 1:b]
            rms = np.sqrt(np.mean(block**2))
            if rms > 0:
                xs.append(0.5 * (np.log(a) + np.log(b)))
                ys.append(np.log(rms))
        k += 1
    if len(xs) < 3:
        raise DegenerateError("fewer than 3 non-degenerate dyadic blocks")
    fit = linfit(xs, ys)
    return fit.slope, fit.stderr
