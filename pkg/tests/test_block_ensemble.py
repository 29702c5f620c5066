import math

import numpy as np
import pytest

from primewalk import block_ensemble as be
from primewalk.characters import character, enumerate_characters
from primewalk.errors import DomainError, InsufficientEnsembleError
from primewalk.stats_core import rng_stream

from conftest import reference_chi


def test_b_squared():
    assert be.b_squared(reference_chi(7, 4)) == 1.0
    assert be.b_squared(reference_chi(7, 2)) == 0.5
    assert be.b_squared(reference_chi(5, 2)) == 0.5
    with pytest.raises(DomainError):
        be.b_squared(character(7, 1))


def test_harmonic():
    assert be.harmonic(0) == 0
    assert be.harmonic(4) == pytest.approx(25 / 12)
    assert be.harmonic(10**4 - 1) == pytest.approx(math.log(10**4) + be.EULER_GAMMA, abs=1e-4)
    assert be.harmonic(2 * 10**6) == pytest.approx(math.log(2e6) + be.EULER_GAMMA + 1 / 4e6, rel=1e-14)


def test_lambda_below_one_for_long_blocks():
    p = np.array([1e6, 1e8, 1e12])
    assert np.all(be.lambda_from_prime(1000, p) < 1)
    with pytest.raises(DomainError):
        be.lambda_from_prime(10, 2)


def test_spec_layout():
    chi = reference_chi(5, 2)
    spec = be.EnsembleSpec(chi, 100, 100 + 10 * 1800, 1000, 800)
    starts = spec.starts()
    assert starts.size == 10 and np.all(np.diff(starts) == 1800)
    rnd = be.EnsembleSpec(chi, 100, 10**6, 1000, gap_range=(400, 1200), seed=3).starts()
    gaps = np.diff(rnd) - 1000
    assert gaps.min() >= 400 and gaps.max() <= 1200
    with pytest.raises(DomainError):
        be.EnsembleSpec(chi, 100, 5000, 1000)


def test_block_sums_match_direct(store):
    chi = reference_chi(7, 2)
    spec = be.EnsembleSpec(chi, 1000, 400_000, 1000, 800)
    ens = be.build_ensemble(spec, store)
    from primewalk.series import block_value
    assert ens.C[3] == pytest.approx(block_value(chi, int(ens.starts[3]), 1000, store))
    assert np.all(ens.lam_end > ens.lam)  # lambda grows towards 1 with p
    with pytest.raises(InsufficientEnsembleError):
        be.build_ensemble(be.EnsembleSpec(chi, 1000, 30_000, 1000, 800), store)


@pytest.mark.parametrize("q,j,values", [(5, 2, [1.0, 0.0, -1.0, 0.0]), (7, 4, [1.0, -1.0]),
                                        (7, 3, [1.0, -0.5, -0.5])])
def test_iid_cosines_have_unit_slope(store, q, j, values):
    # i.i.d. angles from the character's angle set: E[C_N^2 / b^2] = N exactly
    chi = reference_chi(q, j)
    n = len(store)
    cos = rng_stream(11).choice(values, size=n)
    prefix = be.CosinePrefix.from_values(chi, cos)
    Ns = [100, 200, 300, 400, 500]
    moments = []
    for N in Ns:
        ens = be.build_ensemble(be.EnsembleSpec(chi, 10, n, N, 0), store, prefix)
        moments.append(np.mean(ens.C**2) / ens.b2)
    fit = be.linfit(np.array(Ns, float), np.array(moments))
    assert fit.slope == pytest.approx(1, abs=0.02)


def test_variance_regression_needs_five_lengths(store):
    chi = reference_chi(5, 2)
    tpl = be.EnsembleSpec(chi, 1000, 10**6, 100, 800)
    with pytest.raises(Exception):
        be.variance_regression(chi, [100, 200, 300], tpl, store)


def test_normality_and_tail():
    fit = be.normality_fit(rng_stream(2).normal(size=5000))
    assert fit.ks < 0.03 and fit.M == 5000
    tb = be.tail_probability_bound(3.0)
    assert tb.asymptotic <= tb.gaussian
    assert tb.gaussian == pytest.approx(math.erf(3 / math.sqrt(2)))


def test_inertial_report(store):
    r = be.inertial_report(store, 10**5, 10**6)
    assert r.p1 == 1299709 and r.admissible


@pytest.fixture(scope="module")
def big():
    from primewalk.primes import sieve_count
    return sieve_count(10**7)


def test_b_squared_examples():
    assert be.b_squared(reference_chi(3, 2)) == 1.0
    assert be.b_squared(reference_chi(7, 3)) == 0.5


def test_factor_limits_and_consistency(store):
    lam = be.lambda_from_prime(1000, np.array([1e10, 1e100, 1e300]))
    assert np.all(np.diff(lam) > 0) and lam[-1] > 0.98
    assert be.rho_from_prime(1000, 1e300, 7) < 0.02
    chi = reference_chi(7, 2)
    pv = be.predicted_variance(chi, 1000, 10**5, store)
    lam, rho = be.lambda_factor(1000, 10**5, store), be.rho_factor(1000, 10**5, 7, store)
    assert pv / be.b_squared(chi) - 1000 * lam - rho == pytest.approx(0, abs=1e-9)
    assert pv < 1000 * be.b_squared(chi)
    # the modulus enters only through rho
    d_rho = be.rho_factor(1000, 10**5, 7, store) - be.rho_factor(1000, 10**5, 5, store)
    assert d_rho == pytest.approx(np.log(7 / 5) / np.log(store.p(10**5)))


def test_layout_count_and_disjointness():
    spec = be.EnsembleSpec(reference_chi(5, 2), 10**5, 10**7, 1000, 800)
    starts = spec.starts()
    assert starts.size == 5500
    rnd = be.EnsembleSpec(reference_chi(5, 2), 10**5, 10**7, 1000, gap_range=(400, 1200), seed=9)
    for s in (starts, rnd.starts()):
        assert np.all(s[1:] >= s[:-1] + 1000)
        assert s[-1] + 1000 <= 10**7
    assert np.array_equal(rnd.starts(), rnd.starts())


def test_zero_mean_every_character(big):
    for q in (3, 5, 7):
        for chi in enumerate_characters(q)[1:]:
            prefix = be.CosinePrefix(chi, big, 10**7)
            for N in (1000, 3500, 6000):
                ens = be.build_ensemble(be.EnsembleSpec(chi, 10**5, 10**7, N, 800), big, prefix)
                assert abs(ens.C.mean()) <= 3 * np.sqrt(ens.b2 * N / ens.M)
                assert abs(ens.C_tilde.mean()) <= 3 * ens.C_tilde.std() / np.sqrt(ens.M)


def test_reference_slopes_and_conjugates(big):
    Ns = range(1000, 6001, 500)
    slope = {}
    for q, j in ((5, 2), (5, 4), (7, 4), (7, 2), (7, 6)):
        chi = reference_chi(q, j)
        slope[q, j] = be.variance_regression(chi, Ns, be.EnsembleSpec(chi, 10**5, 10**7, 1000), big).slope
    assert slope[5, 2] == pytest.approx(0.98, abs=0.03)
    assert slope[7, 4] == pytest.approx(0.99, abs=0.03)
    assert abs(slope[5, 2] - slope[5, 4]) <= 0.03
    assert abs(slope[7, 2] - slope[7, 6]) <= 0.03


def test_normality_examples():
    x = rng_stream(4).normal(size=2000)
    assert be.normality_fit(x).ks <= 1.36 / np.sqrt(2000)
    assert be.normality_fit(np.full(600, 2.0)).degenerate


def test_tail_bound_examples(big):
    assert be.tail_probability_bound(3.0).gaussian == pytest.approx(0.9973, abs=1e-4)
    assert be.tail_probability_bound(40.0).asymptotic == pytest.approx(1.0)
    chi = reference_chi(7, 2)
    ens = be.build_ensemble(be.EnsembleSpec(chi, 10**5, 10**7, 1000, 800), big)
    assert np.mean(np.abs(ens.normalized) > 3) <= 0.01
