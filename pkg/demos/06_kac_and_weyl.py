"""Sums of cosines with independent frequencies look Gaussian; Weyl averages tell frequency sets apart.

Run: python3 demos/06_kac_and_weyl.py
"""
from primewalk import kac
from primewalk.primes import sieve_count

for N in (1, 2, 10, 100, 1000):
    fit = kac.kac_histogram(kac.frequency_set("independent-irrationals", N), 1e5, 20000, seed=0)
    print(f"N={N:5d}: mean {fit.mean:+.4f} std {fit.std:.4f} KS {fit.ks:.4f} "
          f"excess kurtosis {fit.excess_kurtosis:+.3f}")

store = sieve_count(10**6)
for kind in ("golden", "log-integers", "log-primes"):
    w = kac.weyl_sum(kind, 10**6, store=store)
    print(f"{kind:>13}: |average| at n=1e3 {w[999]:.4f}, 1e6 {w[-1]:.2e}, min over n>=10 {w[9:].min():.4f}")
