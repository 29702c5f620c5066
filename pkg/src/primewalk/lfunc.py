"""Dirichlet L-functions: Hurwitz combination, truncated Euler products, line scans."""
import math
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy.special import digamma, loggamma

from .characters import gauss_sum
from .errors import DomainError, PoleError, SingularFactorError
from .series import AngleSequence

# B_2, B_4, ..., B_10 divided by (2k)!
_BERNOULLI = [(1 / 6) / 2, (-1 / 30) / 24, (1 / 42) / 720, (-1 / 30) / 40320, (5 / 66) / 3628800]


def hurwitz_zeta(s, a):
    """zeta(s, a) = sum_{m>=0} (m + a)^{-s} by Euler-Maclaurin through B_10.

    ``s`` may be an array; ``a`` must lie in (0, 1].
    """
    if not 0 < a <= 1:
        raise DomainError("a must lie in (0, 1]")
    s_arr = np.asarray(s, dtype=complex)
    if np.any(s_arr == 1):
        raise PoleError("zeta(s, a) has a pole at s = 1", residue=1.0)
    flat = s_arr.ravel()
    M = 40 + int(math.ceil(2 * np.max(np.abs(flat)))) if flat.size else 40
    logm = np.log(np.arange(M) + a)
    head = np.exp(-np.outer(flat, logm)).sum(axis=1)
    x = M + a
    lx = math.log(x)
    tail = np.exp((1 - flat) * lx) / (flat - 1) + 0.5 * np.exp(-flat * lx)
    rising = flat.copy()  # s (s+1) ... (s+2k-2)
    power = np.exp(-(flat + 1) * lx)
    for k, b in enumerate(_BERNOULLI, start=1):
        tail += b * rising * power
        rising = rising * (flat + 2 * k - 1) * (flat + 2 * k)
        power = power / (x * x)
    out = (head + tail).reshape(s_arr.shape)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    remainder_bound: float
    converges: bool


def L_series(s, chi, terms):
    """Truncated Dirichlet series sum_{m<=terms} chi(m) m^{-s}."""
    s = complex(s)
    sigma = s.real
    if terms <= 0:
        return SeriesValue(0j, math.inf, sigma > 1)
    m = np.arange(1, terms + 1)
    v = chi.values()[m % chi.q]
    keep = v != 0
    val = complex(np.sum(v[keep] * np.exp(-s * np.log(m[keep]))))
    bound = terms ** (1 - sigma) / (sigma - 1) if sigma > 1 else math.inf
    return SeriesValue(val, bound, sigma > 1)


def L_hurwitz(s, chi):
    """L(s, chi) = q^{-s} sum_r chi(r) zeta(s, r/q); vectorised over s."""
    q = chi.q
    s_arr = np.asarray(s, dtype=complex)
    at_one = s_arr == 1
    if chi.is_principal and np.any(at_one):
        from .characters import totient
        raise PoleError("principal L-function has a pole at s = 1", residue=totient(q) / q)
    v = chi.values()
    safe = np.where(at_one, 2.0, s_arr)
    total = np.zeros(s_arr.shape, dtype=complex)
    for r in range(1, q + 1):
        if v[r % q] != 0:
            total = total + v[r % q] * hurwitz_zeta(safe, r / q)
    out = np.exp(-safe * math.log(q)) * total
    if np.any(at_one):
        # the poles cancel: L(1, chi) = -(1/q) sum_r chi(r) digamma(r/q)
        r = np.arange(1, q + 1)
        out = np.where(at_one, -np.sum(v[r % q] * digamma(r / q)) / q, out)
    return complex(out) if np.ndim(out) == 0 else out


def _neg_log1m(z):
    """-log(1 - z) with a series for small |z|."""
    small = np.abs(z) < 1e-3
    out = np.empty_like(z)
    zs = z[small]
    out[small] = zs + zs**2 / 2 + zs**3 / 3 + zs**4 / 4
    out[~small] = -np.log(1 - z[~small])
    return out


def _product_terms(chi, N, store, state):
    store.require(N)
    primes = store.primes[:N]
    seq = AngleSequence(chi, primes)
    keep = ~seq.skips
    theta = np.nan_to_num(seq.angles())
    base = primes if state is None else state.shifted(primes)
    if state is not None and state.q != chi.q:
        raise DomainError("state modulus differs from the character modulus")
    return np.log(base[keep].astype(float)), theta[keep]


def _log_product(s, log_a, theta, chunk=1 << 15):
    s_arr = np.asarray(s, dtype=complex)
    flat = s_arr.ravel()
    acc = np.zeros(flat.size, dtype=complex)
    for lo in range(0, log_a.size, chunk):
        la, th = log_a[lo:lo + chunk], theta[lo:lo + chunk]
        z = np.exp(1j * th[None, :] - np.outer(flat, la))
        if np.any(z == 1):
            raise SingularFactorError("a factor 1 - z vanishes")
        acc += _neg_log1m(z).sum(axis=1)
    return acc.reshape(s_arr.shape)


def euler_product(s, chi, N, store, state=None):
    """prod_{n<=N} (1 - chi(p_n) p_n^{-s})^{-1}, or with p'_n from a random state."""
    if N == 0:
        return np.ones(np.shape(s), dtype=complex) if np.ndim(s) else 1 + 0j
    log_a, theta = _product_terms(chi, N, store, state)
    out = np.exp(_log_product(s, log_a, theta))
    return complex(out) if np.ndim(out) == 0 else out


def chernoff_product(s, N):
    """prod_{n=2}^{N} (1 - (n log n)^{-s})^{-1}."""
    if N < 2:
        raise DomainError("N must be >= 2")
    n = np.arange(2, N + 1, dtype=float)
    log_a = np.log(n * np.log(n))
    out = np.exp(_log_product(s, log_a, np.zeros_like(log_a)))
    return complex(out) if np.ndim(out) == 0 else out


@numba.njit(cache=True)
def _log_abs_grid(log_a, theta, sigma, t0, h, n_t):
    """sum_n -log|1 - a_n^{-sigma} e^{i(theta_n - t log a_n)}| on t = t0 + j h."""
    out = np.zeros(n_t)
    for i in range(log_a.size):
        la = log_a[i]
        r = math.exp(-sigma * la)
        r2 = r * r
        ph = t0 * la - theta[i]
        c, s = math.cos(ph), math.sin(ph)
        cd, sd = math.cos(h * la), math.sin(h * la)
        if r < 0.01:
            for j in range(n_t):
                x = r2 - 2.0 * r * c
                out[j] -= 0.5 * x * (1.0 - x * (0.5 - x * (1.0 / 3.0 - x * (0.25 - 0.2 * x))))
                c, s = c * cd - s * sd, s * cd + c * sd
        else:
            for j in range(n_t):
                out[j] -= 0.5 * math.log1p(r2 - 2.0 * r * c)
                c, s = c * cd - s * sd, s * cd + c * sd
    return out


def _grid_params(t):
    t = np.asarray(t, dtype=float)
    if t.size > 1:
        h = (t[-1] - t[0]) / (t.size - 1)
        if not np.allclose(np.diff(t), h, rtol=1e-9, atol=1e-12):
            raise DomainError("product evaluators need a uniform t grid")
    else:
        h = 0.0
    return float(t[0]), float(h), int(t.size)


class HurwitzEvaluator:
    """|L(sigma + it, chi)| through the Hurwitz combination."""

    def __init__(self, chi, chunk=2048):
        self.chi, self.chunk = chi, chunk

    def __call__(self, t, sigma):
        t = np.asarray(t, dtype=float)
        out = np.empty(t.size)
        for lo in range(0, t.size, self.chunk):
            out[lo:lo + self.chunk] = np.abs(L_hurwitz(sigma + 1j * t[lo:lo + self.chunk], self.chi))
        return out


class ProductEvaluator:
    """|prod (1 - chi(a) a^{-s})^{-1}| on a uniform t grid for a fixed list of bases a."""

    def __init__(self, log_a, theta):
        self.log_a = np.ascontiguousarray(log_a, dtype=float)
        self.theta = np.ascontiguousarray(theta, dtype=float)

    def log_abs(self, t, sigma):
        t0, h, n = _grid_params(t)
        return _log_abs_grid(self.log_a, self.theta, float(sigma), t0, h, n)

    def __call__(self, t, sigma):
        return np.exp(self.log_abs(t, sigma))


def euler_evaluator(chi, N, store, state=None):
    return ProductEvaluator(*_product_terms(chi, N, store, state))


def _tail_integral(w, L, terms=40):
    """Continuation of int_L^inf exp(-(w-1)u) u^{-w} du by its optimally truncated asymptotic series."""
    w = np.asarray(w, dtype=complex)
    z = w - 1
    with np.errstate(divide="ignore", invalid="ignore"):
        pref = np.exp(-z * L - w * math.log(L)) / z
        term = np.ones_like(w)
        total = term.copy()
        best = np.abs(term)
        done = np.zeros(w.shape, dtype=bool)
        for j in range(terms):
            term = term * (-(w + j) / (z * L))
            done |= ~(np.abs(term) <= best)
            total = np.where(done, total, total + term)
            best = np.where(done, best, np.abs(term))
        return pref * total


def chernoff_tail(s, N):
    """Continued tail sum_{n>N} [a_n^{-s} + a_n^{-2s}/2], a_n = n log n, via Euler-Maclaurin."""
    s = np.asarray(s, dtype=complex)
    L = math.log(N)
    log_aN = math.log(N * L)
    out = np.zeros(s.shape, dtype=complex)
    for k in (1, 2):
        out += (_tail_integral(k * s, L) - 0.5 * np.exp(-k * s * log_aN)) / k
    return out


class ChernoffEvaluator(ProductEvaluator):
    """|zeta'(sigma + it)| from the truncated product, optionally with the continued tail added."""

    def __init__(self, N, continued=True):
        n = np.arange(2, N + 1, dtype=float)
        log_a = np.log(n * np.log(n))
        super().__init__(log_a, np.zeros_like(log_a))
        self.N, self.continued = N, continued

    def log_abs(self, t, sigma):
        out = super().log_abs(t, sigma)
        if self.continued:
            out = out + np.real(chernoff_tail(sigma + 1j * np.asarray(t, dtype=float), self.N))
        return out


@dataclass
class ChernoffScan:
    t: np.ndarray
    log_abs: np.ndarray
    stable: np.ndarray
    candidates: list

    @property
    def min_stable(self):
        return float(np.exp(self.log_abs[self.stable].min())) if self.stable.any() else math.nan


def chernoff_scan(t_range, step, N, sigma=0.5, depth=0.05, stability=0.05):
    """Scan |zeta'| and keep points whose log-magnitude moves less than ``stability`` between N/2 and N.

    Zero candidates are stable grid points with |zeta'| < ``depth``.
    """
    t0, t1 = t_range
    n = int(math.floor((t1 - t0) / step + 1e-9)) + 1
    t = t0 + step * np.arange(n)
    full = ChernoffEvaluator(N).log_abs(t, sigma)
    half = ChernoffEvaluator(N // 2).log_abs(t, sigma)
    stable = np.isfinite(full) & (np.abs(full - half) < stability)
    low = stable & (full < math.log(depth))
    cands = [(float(a), float(np.exp(b))) for a, b in zip(t[low], full[low])]
    return ChernoffScan(t, full, stable, cands)


@dataclass
class LineScan:
    sigma: float
    t: np.ndarray
    values: np.ndarray
    minima: list = field(default_factory=list)  # (refined t*, sampled |L| at the grid minimum)

    @property
    def step(self):
        return float(self.t[1] - self.t[0]) if self.t.size > 1 else 0.0


def local_minima(t, values, depth=None):
    """Strict interior local minima, optionally below ``depth``, refined by a parabola through |L|^2."""
    v = np.asarray(values)
    i = np.flatnonzero((v[1:-1] < v[:-2]) & (v[1:-1] < v[2:])) + 1
    if depth is not None:
        i = i[v[i] < depth]
    h = t[1] - t[0] if t.size > 1 else 0.0
    out = []
    for k in i:
        a, b, c = v[k - 1] ** 2, v[k] ** 2, v[k + 1] ** 2
        den = a - 2 * b + c
        shift = 0.5 * (a - c) / den if den > 0 else 0.0
        out.append((float(t[k] + shift * h), float(v[k])))
    return out


def scan_line(evaluator, sigma, t_range, step, depth=0.05):
    """Sample |evaluator| on t0, t0+step, ..., <= t1 and record minima below ``depth``."""
    if step <= 0:
        raise DomainError("step must be positive")
    t0, t1 = t_range
    n = int(math.floor((t1 - t0) / step + 1e-9)) + 1
    t = t0 + step * np.arange(n)
    values = np.asarray(evaluator(t, sigma), dtype=float)
    return LineScan(float(sigma), t, values, local_minima(t, values, depth))


def zero_count_estimate(T, q):
    """(T/pi) log(qT / (2 pi e)): zeros with |ordinate| <= T."""
    return T / math.pi * math.log(q * T / (2 * math.pi * math.e))


def count_zero_candidates(chi, T, step=0.005, depth=0.05):
    """Minima of |L(1/2 + it)| below ``depth`` for -T <= t <= T."""
    scan = scan_line(HurwitzEvaluator(chi), 0.5, (-T, T), step, depth)
    return len(scan.minima)


@dataclass
class ZeroMatch:
    reference: list
    candidates: list
    pairs: list  # (t_reference, t_candidate, distance)
    unpaired: list
    max_distance: float


def pair_minima(reference, candidates, tolerance):
    """Nearest-candidate pairing of reference minima locations."""
    cand = np.array([c[0] for c in candidates])
    pairs, unpaired = [], []
    for tr, _ in reference:
        if cand.size == 0:
            unpaired.append(tr)
            continue
        k = int(np.argmin(np.abs(cand - tr)))
        d = abs(float(cand[k]) - tr)
        (pairs if d <= tolerance else unpaired).append((tr, float(cand[k]), d) if d <= tolerance else tr)
    dists = [p[2] for p in pairs]
    return pairs, unpaired, max(dists) if dists else math.inf


def gs_zero_match(chi, state, store, sigma=0.5, t_range=(0.0, 25.0), step=0.005,
                  N=None, depth=0.05, tolerance=0.05, relative_depth=0.5):
    """Pair zeros of L (Hurwitz) with dips of the randomised Euler product.

    A product dip is a local minimum of log|L'| lying at least
    ``log(1/relative_depth)`` below both neighbouring maxima.
    """
    N = state.N if N is None else N
    ref = scan_line(HurwitzEvaluator(chi), sigma, t_range, step, depth)
    ev = euler_evaluator(chi, N, store, state)
    log_v = ev.log_abs(ref.t, sigma)
    cands = [c for c in prominent_minima(ref.t, log_v, math.log(1 / relative_depth))]
    pairs, unpaired, dmax = pair_minima(ref.minima, cands, tolerance)
    return ZeroMatch(ref.minima, cands, pairs, unpaired, dmax)


def prominent_minima(t, log_values, prominence):
    """Local minima of a log-magnitude curve whose drop from both adjacent maxima exceeds ``prominence``."""
    v = np.asarray(log_values)
    found = local_minima(t, np.exp(v))
    peaks = np.flatnonzero((v[1:-1] >= v[:-2]) & (v[1:-1] >= v[2:])) + 1
    out = []
    for tm, val in found:
        k = int(np.argmin(np.abs(t - tm)))
        left = peaks[peaks < k]
        right = peaks[peaks > k]
        lmax = v[left[-1]] if left.size else v[0]
        rmax = v[right[0]] if right.size else v[-1]
        if min(lmax, rmax) - v[k] >= prominence:
            out.append((tm, float(np.exp(v[k]))))
    return out


def completed_L(s, chi):
    """Lambda(s) = (q/pi)^{(s+delta)/2} Gamma((s+delta)/2) L(s, chi)."""
    delta = chi.parity
    s = np.asarray(s, dtype=complex)
    w = (s + delta) / 2
    return np.exp(w * math.log(chi.q / math.pi) + loggamma(w)) * L_hurwitz(s, chi)


def root_number(chi):
    """epsilon(chi) = G(chi) / (i^delta sqrt q)."""
    return gauss_sum(chi) / (1j**chi.parity * math.sqrt(chi.q))


def functional_equation_residual(s, chi):
    """|Lambda(s, chi) - epsilon(chi) Lambda(1 - s, conj chi)| for primitive chi."""
    if not chi.is_primitive:
        raise DomainError("the functional equation check needs a primitive character")
    s = np.asarray(s, dtype=complex)
    lhs = completed_L(s, chi)
    rhs = root_number(chi) * completed_L(1 - s, chi.conjugate())
    out = np.abs(lhs - rhs)
    return float(out) if out.ndim == 0 else out
