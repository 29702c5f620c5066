"""Block variables C_N(ell), the finite-size variance law b^2 (N lambda + rho), and ensemble fits."""
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import erf

from .errors import DegenerateError, DomainError, InsufficientEnsembleError
from .series import SKIP, AngleSequence
from .stats_core import ks_distance, linfit, normal_fit, rng_stream

EULER_GAMMA = 0.5772156649015329


def b_squared(chi):
    """Mean of cos^2 over the r realized angles: 1 for real, 1/2 for complex characters."""
    if chi.is_principal:
        raise DomainError("the principal character has no walk")
    r = chi.order
    return float(np.mean(np.cos(2 * np.pi * np.arange(r) / r) ** 2).round(15))


def harmonic(m):
    """H_m = sum_{j<=m} 1/j, with H_m = 0 for m <= 0."""
    m = int(m)
    if m <= 0:
        return 0.0
    if m < 10**6:
        return float(math.fsum(1.0 / np.arange(1, m + 1)))
    return math.log(m) + EULER_GAMMA + 1 / (2 * m) - 1 / (12 * m**2)


def _check_p(p):
    p = np.asarray(p, dtype=float)
    if np.any(p <= math.e):
        raise DomainError("lambda and rho need p_ell > e")
    return p


def lambda_from_prime(N, p):
    p = _check_p(p)
    lp = np.log(p)
    return 1 + (1 - harmonic(N - 2)) / lp - np.log(lp) / lp


def rho_from_prime(N, p, q):
    p = _check_p(p)
    lp = np.log(p)
    return (np.log(q * lp / (2 * math.pi * math.e**2)) + harmonic(N - 2)) / lp


def lambda_factor(N, ell, store):
    return float(lambda_from_prime(N, store.p(ell)))


def rho_factor(N, ell, q, store):
    return float(rho_from_prime(N, store.p(ell), q))


def predicted_variance(chi, N, ell, store):
    """sigma_N^2(ell) = b^2 (N lambda + rho) at p_ell."""
    p = store.p(ell)
    return b_squared(chi) * (N * float(lambda_from_prime(N, p)) + float(rho_from_prime(N, p, chi.q)))


@dataclass(frozen=True)
class EnsembleSpec:
    """Block layout on prime indices [n1, n2): block length N, gap ``D`` or random in ``gap_range``."""
    chi: object
    n1: int
    n2: int
    N: int
    D: int = 800
    gap_range: tuple = None
    seed: int = 0

    def __post_init__(self):
        if self.N < 1 or self.n1 < 1 or self.n2 <= self.n1:
            raise DomainError("need N >= 1 and 1 <= n1 < n2")
        if self.N > (self.n2 - self.n1) / 10:
            raise DomainError("block length must satisfy N <= (n2 - n1)/10")

    def starts(self):
        """Block start indices, left to right from n1; the last block ends before n2."""
        if self.gap_range is None:
            M = (self.n2 - self.n1) // (self.N + self.D)
            return self.n1 + np.arange(M, dtype=np.int64) * (self.N + self.D)
        lo, hi = self.gap_range
        rng = rng_stream(self.seed, 0)
        out, cur = [], self.n1
        while cur + self.N <= self.n2:
            out.append(cur)
            cur += self.N + int(rng.integers(lo, hi + 1))
        return np.array(out, dtype=np.int64)


class CosinePrefix:
    """Prefix sums of cos(theta_{p_n}) so that any block sum costs O(1)."""

    def __init__(self, chi, store, n_max, policy=SKIP):
        store.require(n_max)
        self.chi, self.store, self.n_max = chi, store, n_max
        cos = AngleSequence(chi, store.primes[:n_max]).cosines(policy)
        self.prefix = np.concatenate([[0.0], np.cumsum(cos)])

    @classmethod
    def from_values(cls, chi, values):
        """Prefix over an arbitrary cosine sequence (synthetic walks, tests)."""
        self = cls.__new__(cls)
        values = np.asarray(values, dtype=float)
        self.chi, self.store, self.n_max = chi, None, int(values.size)
        self.prefix = np.concatenate([[0.0], np.cumsum(values)])
        return self

    def block(self, starts, N):
        starts = np.asarray(starts)
        if starts.size and starts.max() + N - 1 > self.n_max:
            raise DomainError("block beyond the prefix range")
        return self.prefix[starts + N - 1] - self.prefix[starts - 1]


@dataclass(frozen=True)
class BlockEnsemble:
    spec: EnsembleSpec
    starts: np.ndarray
    C: np.ndarray
    lam: np.ndarray
    rho: np.ndarray
    b2: float
    lam_end: np.ndarray = None  # lambda evaluated at the last prime of each block

    @property
    def M(self):
        return int(self.starts.size)

    @property
    def C_tilde(self):
        """C_N / sqrt(b^2 lambda), lambda at p_ell."""
        return self.C / np.sqrt(self.b2 * self.lam)

    @property
    def sigma(self):
        return np.sqrt(self.b2 * (self.spec.N * self.lam + self.rho))

    @property
    def normalized(self):
        """C_N / sigma_N with the full variance law including rho."""
        return self.C / self.sigma

    @property
    def C_tilde_end(self):
        """C_N / sqrt(b^2 lambda) with lambda taken at p_{ell+N-1} instead."""
        return self.C / np.sqrt(self.b2 * self.lam_end)

    def second_moment(self):
        return float(np.mean(self.C_tilde**2))


def build_ensemble(spec, store, prefix=None, min_blocks=100):
    """Block sums C_N(ell) for every block of ``spec``."""
    starts = spec.starts()
    if starts.size < min_blocks:
        raise InsufficientEnsembleError(f"only {starts.size} blocks fit; need {min_blocks}")
    if prefix is None or prefix.chi != spec.chi or prefix.n_max < spec.n2 - 1:
        prefix = CosinePrefix(spec.chi, store, min(spec.n2, len(store)))
    C = prefix.block(starts, spec.N)
    p = store.primes[starts - 1]
    lam = lambda_from_prime(spec.N, p)
    rho = rho_from_prime(spec.N, p, spec.chi.q)
    lam_end = lambda_from_prime(spec.N, store.primes[starts + spec.N - 2])
    return BlockEnsemble(spec, starts, C, lam, rho, b_squared(spec.chi), lam_end)


@dataclass(frozen=True)
class VarianceRegression:
    slope: float
    intercept: float
    stderr: float
    N: np.ndarray
    second_moments: np.ndarray


def variance_regression(chi, N_list, template, store, prefix=None):
    """Least-squares line through E[C_tilde^2] against N."""
    N_list = np.asarray(sorted(set(int(n) for n in N_list)))
    if N_list.size < 5:
        raise DegenerateError("need at least 5 distinct block lengths")
    if prefix is None:
        prefix = CosinePrefix(chi, store, template.n2)
    moments = np.array([
        build_ensemble(replace(template, chi=chi, N=int(n)), store, prefix).second_moment()
        for n in N_list])
    fit = linfit(N_list, moments)
    return VarianceRegression(fit.slope, fit.intercept, fit.stderr, N_list, moments)


@dataclass(frozen=True)
class NormalityFit:
    mean: float
    std: float
    ks: float
    M: int
    degenerate: bool = False


def normality_fit(samples):
    """Sample mean and std plus the KS distance to N(0, 1)."""
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        raise DegenerateError("need at least 2 samples")
    fit = normal_fit(x)
    return NormalityFit(fit.mean, fit.std, ks_distance(x, 0.0, 1.0), int(x.size), fit.degenerate)


@dataclass(frozen=True)
class TailBound:
    asymptotic: float  # 1 - e^{-d^2/2} (2/d) / sqrt(2 pi)
    gaussian: float    # erf(d / sqrt 2) = Pr[|Z| < d]


def tail_probability_bound(d, N=None):
    """Lower bound on Pr[|C_N| < d sqrt N] for Gaussian-scaled blocks (independent of N)."""
    if d <= 0:
        raise DomainError("d must be positive")
    lead = 1 - math.exp(-d * d / 2) * (2 / d) / math.sqrt(2 * math.pi)
    return TailBound(lead, float(erf(d / math.sqrt(2))))


@dataclass(frozen=True)
class InertialReport:
    p1: int
    p2: int
    relative_change: float
    admissible: bool


def inertial_report(store, n1, n2, threshold=0.25):
    """Relative change of 1/log p across [n1, n2]; small values mean the finite-size terms are nearly uniform."""
    p1, p2 = store.p(n1), store.p(n2)
    rel = (1 / math.log(p1) - 1 / math.log(p2)) / (1 / math.log(p1))
    return InertialReport(p1, p2, rel, rel <= threshold)
