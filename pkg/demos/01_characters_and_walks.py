"""Characters mod 7 and the cosine walk they drive along the primes.

Run: python3 demos/01_characters_and_walks.py
"""
import numpy as np

from primewalk.characters import enumerate_characters, gauss_sum
from primewalk.primes import sieve_count
from primewalk.series import B_series, angle_sequence, scaling_exponent

# Every character mod 7, listed by the angle (as a fraction of 2 pi) it assigns to 1..7.
for chi in enumerate_characters(7):
    row = " ".join(f"{str(chi.angle(m)):>5}" if chi.angle(m) is not None else "    -" for m in range(1, 8))
    print(f"j={chi.j} order={chi.order} parity={chi.parity} |G|^2={abs(gauss_sum(chi))**2:5.2f}  {row}")

# Pick an order-6 character. Its angles at the first primes give the walk's steps.
chi = next(c for c in enumerate_characters(7) if c.order == 6)
store = sieve_count(10**6)
seq = angle_sequence(chi, store, 12)
print("\nfirst primes     ", store.primes[:12].tolist())
print("angle labels 1..6", seq.labels().tolist())

# The walk B_N(t) = sum cos(t log p - theta_p) wanders like a random walk: RMS ~ N^alpha with alpha near 1/2.
for t in (0.0, 1.0, 15.0, 100.0):
    tr = B_series(chi, t, 10**6, store)
    alpha, err = scaling_exponent(tr, (100, 10**6))
    print(f"t={t:6.1f}  B_1e6={tr.values[-1]:9.2f}  max|B|/sqrt(N)={np.max(np.abs(tr.values)) / 1e3:5.2f}"
          f"  alpha={alpha:.3f} +- {err:.3f}")
