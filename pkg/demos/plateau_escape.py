"""Randomized local search crossing a fitness plateau.

On a plateau of radius k around the optimum the search walks without
guidance; a potential with geometrically growing gaps restores
positive drift and yields an upper bound, while the exact finite-chain
solve shows how loose that construction is.  The double-sum formulas
for birth-death chains reproduce the exact answer when fed the true
transition probabilities.
"""

from driftlab import make_ea_process, to_finite_chain
from driftlab.bounds import finite_state_lower, finite_state_upper
from driftlab.oracle import hitting_time_exact
from driftlab.potentials import plateau_upper_potential

N, K = 12, 2

process = make_ea_process("RLS", "plateau", n=N, k=K)
chain = to_finite_chain(process)
solution = hitting_time_exact(chain)
print(f"exact expected time from a random start  {solution.from_start:.3f}")

g = plateau_upper_potential(N, K)
print(f"potential-based upper bound from d={K}     {g(K) + N * (N - K):.1f}")

# feed the true one-step probabilities to the double-sum formulas:
# both collapse to the exact per-state times
p_down, p_up = [], []
for d in range(N + 1):
    row = dict(process.exact_kernel(d))
    if d >= 1:
        p_down.append(row.get(d - 1, 0.0))
    p_up.append(row.get(d + 1, 0.0))

for start in (1, K, N):
    upper = finite_state_upper(p_down, p_up[:-1], start).bound
    lower = finite_state_lower(p_down, p_up[:-1], start).bound
    exact = solution.per_state[start]
    print(f"  start d={start:2d}: double sums {upper:9.3f} / {lower:9.3f}"
          f"  exact {exact:9.3f}")
