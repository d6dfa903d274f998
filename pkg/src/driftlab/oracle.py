"""Exact expected-hitting-time computation.

Ground truth for every bound: absorbing-chain linear solves, the
birth-death double-sum closed form, the LeadingOnes closed formula,
harmonic numbers and exact level visit probabilities.
"""

from dataclasses import dataclass
from math import exp, log
from typing import Callable

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .errors import MonotonicityError, ParameterError, StructureError
from .processes import FiniteChain

_DENSE_LIMIT = 2000


@dataclass(frozen=True)
class HittingTimeSolution:
    """Exact expected hitting times of an absorbing chain.

    per_state maps each state label to its expected time (0 on
    targets), from_start averages per_state over the start
    distribution, residual is the max-norm residual of the linear
    solve.
    """

    per_state: dict
    from_start: float
    residual: float


def _check_absorption(chain: FiniteChain) -> None:
    """Every state must reach a target with probability 1.

    Reachability of the target set is checked by reverse traversal on
    the kernel's support graph; unreachable states are named.
    """
    n = len(chain.states)
    support = chain.kernel > 0.0
    reached = np.zeros(n, dtype=bool)
    stack = list(chain.targets)
    for t in stack:
        reached[t] = True
    while stack:
        j = stack.pop()
        for i in np.nonzero(support[:, j])[0]:
            if not reached[i]:
                reached[i] = True
                stack.append(int(i))
    bad = np.nonzero(~reached)[0]
    if bad.size:
        state = chain.states[int(bad[0])]
        raise StructureError(
            f"no target reachable from state {state!r}", offender=state
        )


def hitting_time_exact(chain: FiniteChain) -> HittingTimeSolution:
    """Solve (I - Q) t = 1 on the non-target states of a finite chain.

    Dense partial-pivot elimination up to a size threshold, sparse
    direct solve above it; the residual is recomputed either way.
    """
    _check_absorption(chain)
    n = len(chain.states)
    non_target = [i for i in range(n) if i not in chain.targets]
    if not non_target:
        per_state = {s: 0.0 for s in chain.states}
        return HittingTimeSolution(per_state=per_state, from_start=0.0, residual=0.0)

    q = chain.kernel[np.ix_(non_target, non_target)]
    ones = np.ones(len(non_target))
    if len(non_target) <= _DENSE_LIMIT:
        a = np.eye(len(non_target)) - q
        t = scipy.linalg.solve(a, ones)
        residual = float(np.max(np.abs(a @ t - ones)))
    else:
        a = scipy.sparse.eye(len(non_target), format="csc") - scipy.sparse.csc_matrix(q)
        t = scipy.sparse.linalg.spsolve(a, ones)
        residual = float(np.max(np.abs(a @ t - ones)))

    per_state = {s: 0.0 for s in chain.states}
    for idx, i in enumerate(non_target):
        per_state[chain.states[i]] = float(t[idx])
    from_start = float(
        sum(chain.start[i] * per_state[chain.states[i]] for i in range(n))
    )
    return HittingTimeSolution(
        per_state=per_state, from_start=from_start, residual=residual
    )


def _stable_double_sum(p_down_at, p_up_at, x0: int, n: int) -> float:
    """Sum over start levels s of sum over i >= s of the reciprocal
    down-probability weighted by the running up/down ratio product.

    Both inputs are indexed by state: p_down_at[i] for i in [1..n],
    p_up_at[j] for j in [1..n-1] (index 0 unused).  Products are
    tracked with running updates and switch to log space once they
    leave the safe float range; a zero up-probability truncates the
    inner sum exactly.
    """
    total = 0.0
    for s in range(1, x0 + 1):
        prod = 1.0
        log_prod = 0.0
        use_log = False
        for i in range(s, n + 1):
            pd = p_down_at[i]
            if use_log:
                term = exp(log_prod - log(pd))
            else:
                term = prod / pd
            total += term
            if i < n:
                ratio = p_up_at[i] / pd
                if ratio == 0.0:
                    break
                if use_log:
                    log_prod += log(ratio)
                else:
                    prod *= ratio
                    if not (1e-300 < prod < 1e300):
                        use_log = True
                        log_prod = log(prod)
    return total


def birth_death_exact(p_down, p_up, start: int) -> float:
    """Expected hitting time of 0 for a birth-death chain on [0..n].

    p_down[s-1] is the probability of moving from s to s-1 (s in
    [1..n]), p_up[s] the probability of moving from s to s+1 (s in
    [0..n-1], with p_up of the top state treated as 0).  With exact
    inputs this equals the absorbing-chain linear solve.
    """
    p_down = [float(p) for p in p_down]
    n = len(p_down)
    p_up = [float(p) for p in p_up]
    if len(p_up) != n:
        raise ParameterError("p_up must cover states [0..n-1]")
    if not (0 <= start <= n):
        raise ParameterError(f"start {start} outside [0..{n}]")
    for s, pd in enumerate(p_down, start=1):
        if pd <= 0.0:
            raise ParameterError(f"p_down at state {s} must be positive")
        pu = p_up[s] if s < n else 0.0
        if pd + pu > 1.0 + 1e-12:
            raise ParameterError(f"p_down + p_up exceeds 1 at state {s}")
    if start == 0:
        return 0.0
    # re-index both lists by state number (index 0 unused)
    down_at = [0.0] + p_down
    up_at = [0.0] * (n + 1)
    for s in range(1, n):
        up_at[s] = p_up[s]
    return _stable_double_sum(down_at, up_at, start, n)


def leadingones_exact(n: int, p: float) -> float:
    """Exact expected optimization time of the (1+1) EA on LeadingOnes
    with mutation rate p, summed in ascending order."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    if not (0.0 < p < 1.0):
        raise ParameterError("p must lie in (0, 1)")
    total = 0.0
    for i in range(n):
        total += 1.0 / ((1.0 - p) ** i * p)
    return 0.5 * total


def harmonic(n: int) -> float:
    """The n-th harmonic number by direct summation."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    return float(np.sum(1.0 / np.arange(1, n + 1)))


def visit_probabilities_exact(chain: FiniteChain, levels) -> dict:
    """Exact probability that each level is ever occupied.

    levels maps chain states to integer levels and must be monotone
    non-decreasing along every positive-probability transition; the
    offending edge is named otherwise.  One absorption solve per
    level: the chain restricted to levels below i is substochastic and
    the probability of entering level i (rather than jumping past it)
    solves a linear system over those states.
    """
    if callable(levels):
        level_of = levels
    else:
        table = dict(levels)
        level_of = lambda s: table[s]

    n = len(chain.states)
    lv = np.array([level_of(s) for s in chain.states])
    support = chain.kernel > 0.0
    for i in range(n):
        for j in np.nonzero(support[i])[0]:
            if lv[j] < lv[i] and i != j:
                raise MonotonicityError(
                    "level decreases along transition "
                    f"{chain.states[i]!r} -> {chain.states[j]!r}",
                    offender=(chain.states[i], chain.states[j]),
                )

    result = {}
    for level in sorted(set(int(x) for x in lv)):
        below = np.nonzero(lv < level)[0]
        at = lv == level
        # probability of ever entering the level, starting below it
        h = np.zeros(n)
        h[at] = 1.0
        if below.size:
            q = chain.kernel[np.ix_(below, below)]
            b = chain.kernel[below][:, at].sum(axis=1)
            sol = scipy.linalg.solve(np.eye(below.size) - q, b)
            h[below] = sol
        result[level] = float(np.dot(chain.start, h))
    return result
