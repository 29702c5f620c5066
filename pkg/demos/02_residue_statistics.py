"""How the angles of chi(p) are distributed, and how consecutive angles repel each other.

Run: python3 demos/02_residue_statistics.py
"""
from fractions import Fraction

import numpy as np

from primewalk import residue_stats as rs
from primewalk.characters import enumerate_characters
from primewalk.primes import sieve_count

store = sieve_count(5**9 + 10)
chi = next(c for c in enumerate_characters(7) if c.order == 6 and c(3).angle() == Fraction(1, 6))

print("angle frequencies (labels 1..6) as N grows:")
for k in range(3, 10):
    f = rs.frequencies(chi, 5**k, store)
    print(f"  N=5^{k}", np.array2string(f.probs, precision=5))

# One-step transitions: repeating the same angle is the least likely move.
p1 = rs.transition_matrix(chi, 1, 5**9, store)
print("\none-step transition matrix at N=5^9:")
print(np.array2string(p1.probs, precision=4))
print("diagonal is each row's minimum:", bool(np.all(np.diag(p1.probs) == p1.probs.min(axis=1))))

# If the angles formed a Markov chain then P(6) would equal P(1)^6. It doesn't quite.
for k in range(7, 10):
    res, where = rs.markov_residual(chi, 6, 5**k, store)
    print(f"max |P(6) - P(1)^6| at N=5^{k}: {res:.5f} at {where}")

# Residues of consecutive primes mod 7 against the pair-density prediction.
cmp = rs.los_compare(7, 1, 5**9, store)
print(f"\nconsecutive residues, x={cmp.x}: 36 f_aa empirical", np.round(36 * np.diag(cmp.empirical), 3))
print("                          36 f_aa predicted", np.round(36 * np.diag(cmp.predicted), 3))

# Correlations of cos(theta) die after one step, and the spectrum is nearly flat.
corr = rs.autocorrelation(rs.cosine_series(chi, 5 * 10**5, store), 1000)
spec = rs.spectral_density(corr)
print(f"\nC(1)={corr[1]:.4f}  max|C(j)|, j>=2: {np.abs(corr[2:]).max():.4f}  "
      f"spectrum max/median {spec.max() / np.median(spec):.2f}")
