"""A central limit theorem for the walk over randomly shifted primes p + m q.

Run: python3 demos/04_random_prime_clt.py
"""
import numpy as np

from primewalk.characters import enumerate_characters
from primewalk.primes import sieve_count
from primewalk.random_ensemble import clt_experiment, lyapunov_condition_check
from primewalk.stats_core import histogram

chi = enumerate_characters(3)[1]
store = sieve_count(10**4)

ratio = lyapunov_condition_check(chi, 100.0, 3, 10**4, store)
print("Lyapunov ratio at n = 10^2, 10^3, 10^4:", np.round(ratio[[99, 999, 9999]], 4))

rep = clt_experiment(chi, 100.0, 3, 10**4, 20000, seed=1, store=store)
print(f"normalised statistic over {rep.state_count} states: mean {rep.mean:.4f}, std {rep.std:.4f}")
h = histogram(rep.samples, bins=15)
peak = h.counts.max()
for lo, c in zip(h.edges[:-1], h.counts):
    print(f"{lo:6.2f} {'#' * int(50 * c / peak)}")
