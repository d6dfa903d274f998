"""Coupon collector: exact answer, multiplicative drift bound, simulation.

The number of still-missing coupons drops by one with probability
proportional to itself, which is exactly the multiplicative drift
setting.  This script compares the closed-form expectation n * H_n,
the (1 + ln n)/delta upper bound and a seeded Monte Carlo run, then
checks the tail pair: exceeding (k + ln n) * n steps should happen
with probability at most e^-k.
"""

import numpy as np

from driftlab import make_simple_chain, simulate_hitting, to_finite_chain
from driftlab.bounds import multiplicative_tail, multiplicative_upper
from driftlab.montecarlo import sample_hitting_times
from driftlab.oracle import harmonic, hitting_time_exact

N = 50

process = make_simple_chain("coupon", n=N)
exact = hitting_time_exact(to_finite_chain(process)).from_start
print(f"exact expected time      {exact:10.3f}  (= n * H_n = {N * harmonic(N):.3f})")

bound = multiplicative_upper(e_x0=float(N), delta=1.0 / N)
print(f"multiplicative bound     {bound.bound:10.3f}  (= n (1 + ln n))")

stats = simulate_hitting(process, trials=20_000, seed=1, cap=100_000)
print(f"simulated mean           {stats.mean:10.3f}  99% CI {stats.ci99}")

print("\ntail pair: Pr[T > n (k + ln n)] <= e^-k")
times = sample_hitting_times(process, trials=20_000, seed=2, cap=10_000)
for k in (1.0, 2.0, 3.0):
    tail = multiplicative_tail(s=float(N), delta=1.0 / N, k=k)
    threshold = tail.extras["time_threshold"]
    observed = float(np.mean(times > threshold))
    print(f"  k={k:.0f}: threshold {threshold:8.1f}  "
          f"observed {observed:.4f}  bound {tail.bound:.4f}")
