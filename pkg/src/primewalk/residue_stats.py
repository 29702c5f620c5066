"""Frequencies, transition matrices and correlations of the residue/angle sequence of primes,
with the Lemke Oliver-Soundararajan pair-density predictions."""
import math
from dataclasses import dataclass

import numpy as np

from .characters import DirichletCharacter, totient
from .errors import DegenerateError, DomainError
from .series import ZERO_ANGLE, AngleSequence
from .stats_core import dft


@dataclass(frozen=True)
class AngleFrequencies:
    labels: np.ndarray  # angle labels a (angle pi(2a - phi)/phi), ascending
    counts: np.ndarray
    probs: np.ndarray
    N: int


@dataclass(frozen=True)
class TransitionMatrix:
    q: int
    k: int
    N: int
    labels: np.ndarray  # angle labels (character mode) or residues (modulus mode)
    counts: np.ndarray
    probs: np.ndarray


@dataclass(frozen=True)
class LosPrediction:
    q: int
    x: float
    k: int
    residues: np.ndarray
    matrix: np.ndarray  # k = 1: diagonal f_aa, off-diagonal (f_ab + f_ba)/2
    band: float


@dataclass(frozen=True)
class LosComparison:
    q: int
    k: int
    N: int
    x: int
    residues: np.ndarray
    empirical: np.ndarray
    predicted: np.ndarray
    band: float

    @property
    def difference(self):
        return self.empirical - self.predicted


def _realized_labels(chi):
    phi = totient(chi.q)
    return np.array(sorted(int(phi * (f + 0.5)) for f in chi.angle_set))


def _count(labels, universe, mask=None):
    lab = labels if mask is None else labels[mask]
    idx = np.searchsorted(universe, lab)
    return np.bincount(idx, minlength=universe.size)


def frequencies(chi, N, store, policy=ZERO_ANGLE):
    """Fraction of the first N primes at each realized angle, denominator N."""
    return windowed_frequencies(chi, 1, N, store, policy)


def windowed_frequencies(chi, ell, N, store, policy=ZERO_ANGLE):
    """Angle frequencies over prime indices ell..ell+N-1."""
    if ell < 1 or N < 1:
        raise DomainError("need ell >= 1 and N >= 1")
    store.require(ell + N - 1)
    seq = AngleSequence(chi, store.primes[ell - 1:ell - 1 + N])
    lab = seq.labels(policy)
    universe = _realized_labels(chi)
    counts = _count(lab, universe, lab > 0)
    return AngleFrequencies(universe, counts, counts / N, N)


def _label_sequence(source, N, store, policy):
    store.require(N)
    primes = store.primes[:N]
    if isinstance(source, DirichletCharacter):
        lab = AngleSequence(source, primes).labels(policy)
        return source.q, lab, _realized_labels(source)
    q = int(source)
    res = primes % q
    units = np.array([r for r in range(q) if math.gcd(r, q) == 1])
    return q, np.where(np.gcd(res, q) == 1, res, -1), units


def transition_matrix(source, k, N, store, policy=ZERO_ANGLE):
    """Counts of (label_n, label_{n+k}) for n + k <= N, rows normalised.

    ``source`` is a character (labels are its realized angles, ascending) or
    a modulus q (labels are the units mod q, ascending).
    """
    if k < 1 or N <= k:
        raise DomainError("need k >= 1 and N > k")
    q, lab, universe = _label_sequence(source, N, store, policy)
    valid = (lab > 0) if isinstance(source, DirichletCharacter) else (lab >= 0)
    a, b = lab[:-k], lab[k:]
    keep = valid[:-k] & valid[k:]
    ia = np.searchsorted(universe, a[keep])
    ib = np.searchsorted(universe, b[keep])
    n = universe.size
    counts = np.bincount(ia * n + ib, minlength=n * n).reshape(n, n)
    rows = counts.sum(axis=1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        probs = np.where(rows > 0, counts / np.maximum(rows, 1), 0.0)
    return TransitionMatrix(q, k, N, universe, counts, probs)


def markov_residual(source, k, N, store, policy=ZERO_ANGLE):
    """max |P(k) - P(1)^k| and the entry where it occurs."""
    if k < 2:
        raise DomainError("markov_residual needs k >= 2")
    pk = transition_matrix(source, k, N, store, policy).probs
    p1 = transition_matrix(source, 1, N, store, policy).probs
    diff = np.abs(pk - np.linalg.matrix_power(p1, k))
    i, j = np.unravel_index(np.argmax(diff), diff.shape)
    return float(diff[i, j]), (int(i), int(j))


def _is_prime(q):
    return q >= 2 and all(q % d for d in range(2, math.isqrt(q) + 1))


def los_prediction(q, x, k):
    """Predicted pair densities f_ab(x; q, k) for prime q.

    For k = 1 only f_aa and the symmetric sums f_ab + f_ba are predicted;
    the off-diagonal entries hold (f_ab + f_ba)/2.  ``band`` is (log x)^{-7/4}.
    """
    if not _is_prime(q):
        raise DomainError("the pair-density formulas need a prime modulus")
    if x < 100 or k < 1:
        raise DomainError("need x >= 100 and k >= 1")
    phi = q - 1
    lx = math.log(x)
    base = 1 / phi**2
    if k == 1:
        llx = math.log(lx)
        lq = math.log(q / (2 * math.pi))
        diag = base * (1 - (phi - 1) / 2 * llx / lx + (phi - 1) * lq / (2 * lx))
        pair_sum = 2 * base * (1 + llx / (2 * lx) - lq / (2 * lx))
        off = pair_sum / 2
    else:
        diag = base * (1 - (phi - 1) / (2 * (k - 1) * lx))
        off = base * (1 + 1 / (2 * (k - 1) * lx))
    m = np.full((phi, phi), off)
    np.fill_diagonal(m, diag)
    return LosPrediction(q, float(x), k, np.arange(1, q), m, lx ** -1.75)


def los_compare(q, k, N, store):
    """Empirical f_ab = #{n <= N: p_n = a, p_{n+k} = b (mod q)} / N against the prediction at x = p_N.

    For k = 1 the off-diagonal empirical entries are symmetrised like the prediction.
    """
    store.require(N + k)
    primes = store.primes[:N + k]
    res = primes % q
    a, b = res[:N], res[k:N + k]
    keep = (a > 0) & (b > 0)
    counts = np.bincount((a[keep] - 1) * (q - 1) + (b[keep] - 1),
                         minlength=(q - 1) ** 2).reshape(q - 1, q - 1)
    emp = counts / N
    if k == 1:
        emp = 0.5 * (emp + emp.T)
    x = int(primes[N - 1])
    pred = los_prediction(q, x, k)
    return LosComparison(q, k, N, x, pred.residues, emp, pred.matrix, pred.band)


def cosine_series(chi, N, store, policy=ZERO_ANGLE):
    """c_n = cos(theta_{p_n}) for n = 1..N."""
    store.require(N)
    return AngleSequence(chi, store.primes[:N]).cosines(policy)


def autocorrelation(series, max_lag):
    """C(j) = sum_{i<=N-j} (y_i - mu)(y_{i+j} - mu) / sum_i (y_i - mu)^2 for j = 0..max_lag."""
    y = np.asarray(series, dtype=float)
    if y.size <= max_lag:
        raise DomainError("series must be longer than max_lag")
    d = y - y.mean()
    denom = float(np.dot(d, d))
    if denom == 0:
        raise DegenerateError("constant series has no autocorrelation")
    n = d.size
    return np.array([np.dot(d[:n - j], d[j:]) for j in range(max_lag + 1)]) / denom


def spectral_density(corr):
    """F(k) = |unitary DFT of C(0..J)|^2."""
    return np.abs(dft(corr)) ** 2
