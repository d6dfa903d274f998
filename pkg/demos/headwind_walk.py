"""A walk that must fight backward drift near its goal.

Close to state 0 the chain drifts away from it (a headwind); beyond a
small zone the drift turns favorable.  The headwind recurrence builds
a potential g whose total decrease bounds the expected hitting time,
and its closed form splits the cost into the easy variable-drift part
scaled by the waiting-time product through the headwind zone.  The
exact solve shows the bound is conservative but finite even though
plain drift theorems do not apply.
"""

import numpy as np

from driftlab.bounds import HeadwindParams, headwind_closed, headwind_upper
from driftlab.oracle import hitting_time_exact
from driftlab.processes import FiniteChain

p_minus = (0.0, 0.10, 0.20, 0.30, 0.40, 0.50, 0.50, 0.60, 0.60)
p_plus = (0.0, 0.30, 0.25, 0.20, 0.20, 0.20, 0.10, 0.10, 0.0)
n = len(p_minus) - 1
delta = [0.0] * (n + 1)
for i in range(1, n + 1):
    up = p_plus[i] if i < n else 0.0
    delta[i] = p_minus[i] - up
delta[0] = min(delta[1], 0.0)
params = HeadwindParams(
    p_minus=p_minus, p_plus=p_plus, delta=tuple(delta), kappa=2
)

kernel = np.zeros((n + 1, n + 1))
kernel[0, 0] = 1.0
for i in range(1, n + 1):
    up = p_plus[i] if i < n else 0.0
    kernel[i, i - 1] = p_minus[i]
    if i < n:
        kernel[i, i + 1] = up
    kernel[i, i] = 1.0 - p_minus[i] - up
start = np.zeros(n + 1)
start[n] = 1.0
chain = FiniteChain(
    states=tuple(range(n + 1)), kernel=kernel, start=start, targets=frozenset({0})
)
solution = hitting_time_exact(chain)

closed = headwind_closed(params).bound
print(f"closed-form g(0)        {closed:10.3f}")
print("state x | headwind bound g(0)-g(x) | exact E[T | X0=x]")
for x in range(n + 1):
    bound = headwind_upper(params, x).bound
    print(f"{x:7d} | {bound:24.3f} | {solution.per_state[x]:.3f}")
