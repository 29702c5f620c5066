"""Small numeric kernels: fits, KS distance, regression, DFT, histograms, RNG streams."""
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import DegenerateError


@dataclass(frozen=True)
class NormalFit:
    mean: float
    std: float
    degenerate: bool = False


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    stderr: float


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    total: int


def normal_fit(samples):
    """Maximum-likelihood normal fit (population std). Constant input is flagged, not raised."""
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        raise DegenerateError("normal_fit needs at least 2 samples")
    mu = float(x.mean())
    sd = float(x.std())
    return NormalFit(mu, sd, degenerate=(sd == 0.0))


def ks_distance(samples, mu=0.0, sigma=1.0):
    """Two-sided Kolmogorov-Smirnov sup distance to N(mu, sigma^2)."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise DegenerateError("empty sample")
    if sigma <= 0:
        raise DegenerateError("sigma must be positive")
    cdf = ndtr((x - mu) / sigma)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))


def linfit(x, y):
    """Ordinary least squares y = slope*x + intercept, with the slope's standard error."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size or x.size < 2:
        raise DegenerateError("linfit needs at least 2 paired points")
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0:
        raise DegenerateError("all x values are equal")
    slope = np.sum((x - xm) * (y - ym)) / sxx
    intercept = ym - slope * xm
    if x.size > 2:
        resid = y - (slope * x + intercept)
        stderr = np.sqrt(np.sum(resid**2) / (x.size - 2) / sxx)
    else:
        stderr = 0.0
    return LinearFit(float(slope), float(intercept), float(stderr))


def dft(values):
    """Unitary discrete Fourier transform, X(k) = n^{-1/2} sum_j x_j exp(-2 pi i jk/n)."""
    v = np.asarray(values, dtype=complex)
    return np.fft.fft(v) / np.sqrt(max(v.size, 1))


def idft(spectrum):
    v = np.asarray(spectrum, dtype=complex)
    return np.fft.ifft(v) * np.sqrt(max(v.size, 1))


def histogram(samples, rule="fd", bins=None):
    """Histogram with Freedman-Diaconis edges by default; explicit edges or a bin count also work."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise DegenerateError("empty sample")
    if bins is None:
        edges = np.histogram_bin_edges(x, bins=rule)
    else:
        edges = np.histogram_bin_edges(x, bins=bins)
    if edges.size < 2 or not np.all(np.diff(edges) > 0):
        lo = x.min()
        edges = np.array([lo - 0.5, lo + 0.5])
    counts, edges = np.histogram(x, bins=edges)
    return Histogram(edges, counts, int(counts.sum()))


def rng_stream(seed, index=0):
    """Independent, reproducible generator for (seed, stream index).

    PCG64 seeded through SeedSequence(seed, spawn_key=(index,)), i.e. the
    index-th child that ``SeedSequence(seed).spawn`` would hand out.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))
