"""Fixed-budget prediction for the (1+1) EA on OneMax.

Instead of asking how long optimization takes, fix a budget of t
steps and predict the distance from the optimum at time t.  Iterating
x -> x - h(x) with the per-step drift bound h(x) = x/(e n) gives an
upper bound on the expected remaining distance; a seeded simulation
of the actual algorithm sits below it at every budget.
"""

import math

from driftlab import make_ea_process
from driftlab.bounds import DriftFunction, fixed_budget_variable
from driftlab.montecarlo import simulate_trajectory

N = 100
HORIZON = 300
en = math.e * N

h = DriftFunction(eval=lambda x: x / en, derivative=lambda x: 1.0 / en)
process = make_ea_process("OnePlusOneEA", "onemax", n=N)
traj = simulate_trajectory(process, horizon=HORIZON, trials=3000, seed=9)

print("budget t | predicted upper bound | simulated mean distance")
for t in (0, 50, 100, 200, 300):
    predicted = fixed_budget_variable(h, x0=N / 2.0, t=t).bound
    print(f"{t:8d} | {predicted:21.3f} | {traj.mean[t]:.3f}")
