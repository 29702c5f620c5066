"""Variance of block sums of cos(theta_p): slightly below N, and Gaussian once normalised.

Run: python3 demos/05_block_ensembles.py   (about 30 seconds)
"""
import numpy as np

from primewalk import block_ensemble as be
from primewalk.characters import enumerate_characters
from primewalk.primes import sieve_count

store = sieve_count(10**7)
print(be.inertial_report(store, 10**5, 10**7))

for q in (5, 7):
    for chi in enumerate_characters(q)[1:]:
        tpl = be.EnsembleSpec(chi, 10**5, 10**7, 1000, 800)
        r = be.variance_regression(chi, range(1000, 6001, 500), tpl, store)
        print(f"q={q} j={chi.j} order={chi.order}: E[C~^2] = {r.slope:.4f} N {r.intercept:+8.2f}"
              f"  (stderr {r.stderr:.4f})")

# Compare the observed block variance with b^2 (N lambda + rho), using lambda at either end of the block.
chi = enumerate_characters(7)[2]
ens = be.build_ensemble(be.EnsembleSpec(chi, 10**5, 10**7, 3000, 800), store)
print(f"\nN=3000, M={ens.M}: var(C)={ens.C.var():.1f}  predicted={np.mean(ens.sigma**2):.1f}  "
      f"uncorrelated={ens.b2 * 3000:.1f}")
print(f"E[C~^2]/N with lambda at p_ell {ens.second_moment() / 3000:.4f}, "
      f"at p_(ell+N-1) {np.mean(ens.C_tilde_end**2) / 3000:.4f}")

N, D, M = 6000, 100, 10**4
n2 = 10**5 + M * (N + D)
big = sieve_count(n2)
chi = next(c for c in enumerate_characters(7) if c.order == 6)
fit = be.normality_fit(be.build_ensemble(be.EnsembleSpec(chi, 10**5, n2, N, D), big).normalized)
print(f"\nnormalised blocks N={N}: mean {fit.mean:.4f}, std {fit.std:.4f}, KS {fit.ks:.4f}")
