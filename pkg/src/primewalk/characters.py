"""Exact Dirichlet characters built from a cyclic decomposition of (Z/qZ)*.

Values are stored as integer numerators k over the group exponent L, so
chi(m) = exp(2 pi i k / L); non-units carry the code -1.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .errors import DomainError, ResourceError

MAX_MODULUS = 10**5


@dataclass(frozen=True)
class RootOfUnity:
    """exp(2 pi i k / L), kept reduced with 0 <= k < L."""
    k: int
    L: int

    def __post_init__(self):
        if self.L <= 0:
            raise DomainError("denominator must be positive")
        k = self.k % self.L
        g = math.gcd(k, self.L)
        object.__setattr__(self, "k", k // g)
        object.__setattr__(self, "L", self.L // g)

    def __mul__(self, other):
        if other is ZERO:
            return ZERO
        L = self.L * other.L // math.gcd(self.L, other.L)
        return RootOfUnity(self.k * (L // self.L) + other.k * (L // other.L), L)

    def __pow__(self, e):
        return RootOfUnity(self.k * e, self.L)

    def conjugate(self):
        return RootOfUnity(-self.k, self.L)

    def angle(self):
        """Angle as a fraction of 2 pi in (-1/2, 1/2]."""
        f = Fraction(self.k, self.L)
        return f - 1 if f > Fraction(1, 2) else f

    def __complex__(self):
        if self.k == 0:
            return 1 + 0j
        if 4 * self.k == 2 * self.L:
            return -1 + 0j
        return complex(np.exp(2j * np.pi * self.k / self.L))


class _Zero:
    """The value of a character on a non-unit."""

    def __mul__(self, other):
        return self

    __rmul__ = __mul__

    def __pow__(self, e):
        if e <= 0:
            raise DomainError("0 has no non-positive powers")
        return self

    def conjugate(self):
        return self

    def angle(self):
        return None

    def __complex__(self):
        return 0j

    def __repr__(self):
        return "ZERO"


ZERO = _Zero()


def totient(q):
    q = int(q)
    if q < 1:
        raise DomainError("q must be >= 1")
    out = q
    for p in _factor(q):
        out -= out // p
    return out


def _factor(q):
    f, n, d = {}, q, 2
    while d * d <= n:
        while n % d == 0:
            f[d] = f.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        f[n] = f.get(n, 0) + 1
    return f


def _least_generator(pe, order):
    """Least generator of the cyclic group (Z/pe)* of the given order."""
    primes = list(_factor(order))
    for g in range(2, pe):
        if math.gcd(g, pe) == 1 and all(pow(g, order // r, pe) != 1 for r in primes):
            return g
    return 1


def _component_logs(p, e):
    """Generator orders and discrete-log tables for (Z/p^e)*, indexed by residue mod p^e."""
    pe = p**e
    if p == 2 and e >= 3:
        # (Z/2^e)* = <-1> x <5>
        n5 = pe // 4
        log5 = np.full(pe, -1, dtype=np.int64)
        x = 1
        for i in range(n5):
            log5[x] = i
            log5[pe - x] = i  # -5^i
            x = x * 5 % pe
        sign = np.full(pe, -1, dtype=np.int64)
        odd = np.arange(1, pe, 2)
        sign[odd] = np.where(odd % 4 == 1, 0, 1)
        return [2, n5], [sign, log5]
    if pe <= 2:
        return [], []
    order = pe - pe // p
    g = _least_generator(pe, order)
    log = np.full(pe, -1, dtype=np.int64)
    x = 1
    for i in range(order):
        log[x] = i
        x = x * g % pe
    return [order], [log]


@lru_cache(maxsize=64)
def _group(q):
    """(orders, exponent L, exponent-vector matrix E of shape (len(orders), q))."""
    orders, rows = [], []
    m = np.arange(q)
    for p, e in sorted(_factor(q).items()):
        pe = p**e
        ords, logs = _component_logs(p, e)
        orders += ords
        rows += [log[m % pe] for log in logs]
    units = np.array([math.gcd(int(x), q) == 1 for x in m]) if q > 1 else np.array([True])
    E = np.array(rows, dtype=np.int64).reshape(len(orders), q)
    E[:, ~units] = -1
    L = math.lcm(*orders) if orders else 1
    return tuple(orders), L, E, units


def _codes_for(q, exps):
    """Value codes of the character with generator exponents ``exps`` (shape (k,) or (n, k))."""
    orders, L, E, units = _group(q)
    exps = np.atleast_2d(np.asarray(exps, dtype=np.int64))
    if not orders:
        codes = np.zeros((exps.shape[0], q), dtype=np.int64)
    else:
        scale = np.array([L // n for n in orders], dtype=np.int64)
        codes = ((exps * scale) @ np.where(E < 0, 0, E)) % L
    codes[:, ~units] = -1
    return codes


class DirichletCharacter:
    """A Dirichlet character mod q with exact root-of-unity values."""

    def __init__(self, q, j, exps):
        self.q = int(q)
        self.j = int(j)
        self.exps = tuple(int(x) for x in exps)
        self.exponent = _group(self.q)[1]

    @cached_property
    def codes(self):
        c = _codes_for(self.q, self.exps)[0]
        c.setflags(write=False)
        return c

    def __call__(self, m):
        c = int(self.codes[int(m) % self.q])
        return ZERO if c < 0 else RootOfUnity(c, self.exponent)

    def values(self):
        """Complex value row chi(0..q-1)."""
        c = self.codes
        v = np.exp(2j * np.pi * np.where(c < 0, 0, c) / self.exponent)
        exact = {0: 1, self.exponent // 2: -1} if self.exponent % 2 == 0 else {0: 1}
        for k, val in exact.items():
            v[c == k] = val
        v[c < 0] = 0
        return v

    def angle(self, m):
        return self(m).angle()

    @cached_property
    def order(self):
        c = self.codes[self.codes >= 0]
        g = math.gcd(self.exponent, *map(int, np.unique(c)))
        return self.exponent // g

    @property
    def parity(self):
        return 0 if self.q <= 2 or int(self.codes[self.q - 1]) == 0 else 1

    @property
    def is_principal(self):
        return not np.any(self.codes > 0)

    @property
    def is_real(self):
        return self.order <= 2

    @cached_property
    def is_primitive(self):
        for p in _factor(self.q):
            d = self.q // p
            m = 1 + d * np.arange(p)
            m = m[self.codes[m % self.q] >= 0]
            if np.all(self.codes[m % self.q] == 0):
                return False
        return True

    @property
    def angle_set(self):
        """Sorted realized angles as fractions of 2 pi in (-1/2, 1/2]."""
        r = self.order
        return sorted(RootOfUnity(k, r).angle() for k in range(r))

    def conjugate(self):
        return find_character(self.q, np.conj(self.values()))

    def __eq__(self, other):
        return isinstance(other, DirichletCharacter) and self.q == other.q and \
            np.array_equal(self.codes, other.codes)

    def __hash__(self):
        return hash((self.q, self.exps))

    def __repr__(self):
        return f"DirichletCharacter(q={self.q}, j={self.j}, order={self.order})"


def _all_exponent_vectors(orders):
    if not orders:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*[np.arange(n) for n in orders], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


@lru_cache(maxsize=64)
def _enumerate(q):
    orders, L, E, units = _group(q)
    exps = _all_exponent_vectors(orders)
    cols = np.flatnonzero(units)
    width = 16
    while True:
        keys = _codes_for(q, exps) if width >= q else \
            ((exps * np.array([L // n for n in orders], dtype=np.int64)) @ E[:, cols[:width]]) % L
        if width >= q or len(np.unique(keys, axis=0)) == len(exps):
            break
        width *= 2
    order = np.lexsort(keys.T[::-1])
    return tuple(DirichletCharacter(q, j + 1, exps[i]) for j, i in enumerate(order))


def enumerate_characters(q, max_modulus=MAX_MODULUS):
    """All phi(q) characters mod q: principal first, then lexicographic by value row."""
    q = int(q)
    if q < 1:
        raise DomainError("q must be >= 1")
    if q > max_modulus:
        raise ResourceError(f"q={q} exceeds the configured bound {max_modulus}")
    return list(_enumerate(q))


def character(q, j):
    """Character mod q with canonical label j (1-based)."""
    chars = enumerate_characters(q)
    if not 1 <= j <= len(chars):
        raise DomainError(f"label j={j} outside 1..{len(chars)}")
    return chars[j - 1]


def find_character(q, row, tol=1e-9):
    """Character mod q whose value row chi(0..q-1) (or chi(1..q)) matches ``row``."""
    row = np.asarray(row, dtype=complex)
    if row.size != q:
        raise DomainError(f"row must have {q} entries")
    for chi in enumerate_characters(q):
        v = chi.values()
        if np.allclose(v, row, atol=tol) or np.allclose(np.roll(v, -1), row, atol=tol):
            return chi
    raise DomainError("no character mod q has this value row")


def evaluate(chi, m):
    return chi(m)


def angle(chi, m):
    return chi.angle(m)


def order(chi):
    return chi.order


def parity(chi):
    return chi.parity


def is_primitive(chi):
    return chi.is_primitive


def gauss_sum(chi):
    m = np.arange(1, chi.q + 1)
    return complex(np.sum(chi.values()[m % chi.q] * np.exp(2j * np.pi * m / chi.q)))


def induce(chi, q_hat):
    """Character mod q_hat induced by chi: chi(m mod q) on units mod q_hat, 0 elsewhere."""
    q, q_hat = chi.q, int(q_hat)
    if q_hat % q:
        raise DomainError(f"{q} does not divide {q_hat}")
    m = np.arange(q_hat)
    v = chi.values()[m % q]
    v[np.gcd(m, q_hat) > 1] = 0
    return find_character(q_hat, v)
