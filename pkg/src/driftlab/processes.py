"""Stochastic process catalog and exact finite-chain extraction.

A Process couples a sampleable Markov process with a real-valued view
(the scalar sequence X_t) and a target predicate defining the hitting
time T = inf{t : X_t hits the target}.  Every catalog process that
admits a tractable exact transition kernel carries one, so that the
oracle module can solve for expected hitting times without sampling.
"""

from collections import deque
from dataclasses import dataclass, field
from math import comb
from typing import Any, Callable, Optional

import numpy as np

from .errors import CapacityError, ParameterError, StructureError, UnsupportedError

State = Any
Kernel = Callable[[State], list[tuple[State, float]]]

_KERNEL_TOL = 1e-12


@dataclass(frozen=True)
class Process:
    """A sampleable stochastic process with a scalar view and a target.

    Fields
    ------
    name : str
        Human-readable identifier, used in reports.
    sample_initial : callable(rng) -> state
        Draws a start state from the initial distribution.
    step : callable(state, rng) -> state
        One transition; deterministic given the randomness stream.
    value : callable(state) -> float
        The scalar view X_t (distance to target for catalog processes).
    is_target : callable(state) -> bool
        Target predicate defining T.
    exact_kernel : callable(state) -> [(state, prob)], optional
        Exact one-step distribution; present when tractable.
    initial_support : tuple of (state, prob), optional
        Explicit initial distribution, needed for exact solving.
    """

    name: str
    sample_initial: Callable[[np.random.Generator], State]
    step: Callable[[State, np.random.Generator], State]
    value: Callable[[State], float]
    is_target: Callable[[State], bool]
    exact_kernel: Optional[Kernel] = None
    initial_support: Optional[tuple[tuple[State, float], ...]] = None


@dataclass(frozen=True, eq=False)
class FiniteChain:
    """Explicit finite-state chain with absorbing targets.

    states is an indexed list of (hashable) state labels, kernel a
    row-stochastic matrix, start a probability vector over states and
    targets the set of absorbing target indices.
    """

    states: tuple
    kernel: np.ndarray
    start: np.ndarray
    targets: frozenset

    def __post_init__(self):
        n = len(self.states)
        if self.kernel.shape != (n, n):
            raise StructureError("kernel shape does not match state count")
        rows = self.kernel.sum(axis=1)
        if np.max(np.abs(rows - 1.0)) > 1e-12:
            bad = int(np.argmax(np.abs(rows - 1.0)))
            raise StructureError(
                f"kernel row {bad} sums to {rows[bad]!r}", offender=self.states[bad]
            )
        if abs(self.start.sum() - 1.0) > 1e-12:
            raise StructureError("start vector does not sum to 1")
        for t in self.targets:
            if abs(self.kernel[t, t] - 1.0) > 1e-12:
                raise StructureError(
                    f"target state {self.states[t]!r} is not absorbing",
                    offender=self.states[t],
                )

    def index_of(self, state) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise StructureError(f"state {state!r} not in chain", offender=state)


@dataclass(frozen=True)
class GraphInstance:
    """Undirected graph with optional planted structure.

    coloring, when present, is a proper 3-coloring (class index per
    vertex); cover, when present, is a minimum vertex cover.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    coloring: Optional[tuple[int, ...]] = None
    cover: Optional[frozenset] = None

    def __post_init__(self):
        for (u, v) in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n) or u == v:
                raise StructureError(f"edge ({u}, {v}) references invalid vertices")
        if self.coloring is not None:
            if len(self.coloring) != self.n:
                raise StructureError("coloring length does not match vertex count")
            for (u, v) in self.edges:
                if self.coloring[u] == self.coloring[v]:
                    raise StructureError(
                        f"planted coloring is not proper on edge ({u}, {v})",
                        offender=(u, v),
                    )


@dataclass(frozen=True)
class CnfInstance:
    """2-CNF formula with a planted satisfying assignment.

    Clauses are pairs of literals (variable index, polarity); polarity
    True means the positive literal.
    """

    n: int
    clauses: tuple[tuple[tuple[int, bool], tuple[int, bool]], ...]
    assignment: tuple[bool, ...]

    def __post_init__(self):
        if len(self.assignment) != self.n:
            raise StructureError("assignment length does not match variable count")
        for clause in self.clauses:
            if len(clause) != 2:
                raise StructureError("clause does not have exactly 2 literals")
            (v1, _), (v2, _) = clause
            if v1 == v2:
                raise StructureError(f"clause {clause} repeats a variable")
            if not (0 <= v1 < self.n and 0 <= v2 < self.n):
                raise StructureError(f"clause {clause} references invalid variables")
            if not _clause_satisfied(clause, self.assignment):
                raise StructureError(
                    f"planted assignment violates clause {clause}", offender=clause
                )


def _clause_satisfied(clause, assignment) -> bool:
    return any(assignment[var] == polarity for (var, polarity) in clause)


def _categorical(rng: np.random.Generator, pairs):
    """Sample from a finite distribution given as (outcome, prob) pairs."""
    u = rng.random()
    acc = 0.0
    for outcome, p in pairs:
        acc += p
        if u < acc:
            return outcome
    return pairs[-1][0]


def _chain_process(name, kernel_map, start_pairs, value, is_target) -> Process:
    """Assemble a Process from an explicit kernel over hashable states."""

    def step(state, rng):
        return _categorical(rng, kernel_map(state))

    def sample_initial(rng):
        return _categorical(rng, start_pairs)

    return Process(
        name=name,
        sample_initial=sample_initial,
        step=step,
        value=value,
        is_target=is_target,
        exact_kernel=kernel_map,
        initial_support=tuple(start_pairs),
    )


# ---------------------------------------------------------------------------
# Simple chain catalog
# ---------------------------------------------------------------------------

def make_simple_chain(kind: str, **params) -> Process:
    """Construct one of the elementary catalog chains.

    Supported kinds: coupon(n), generalized_coupon(n, p), geometric(p),
    winning_streak(k), gamblers_ruin(n), fair_walk_reflecting(n),
    rumor(n).  States are integers; value is the natural distance to the
    target (missing coupons, remaining streak, coins to a barrier,
    uninformed people).
    """
    builders = {
        "coupon": _coupon,
        "generalized_coupon": _generalized_coupon,
        "geometric": _geometric,
        "winning_streak": _winning_streak,
        "gamblers_ruin": _gamblers_ruin,
        "fair_walk_reflecting": _fair_walk_reflecting,
        "rumor": _rumor,
    }
    if kind not in builders:
        raise ParameterError(
            f"unknown chain kind {kind!r}; expected one of {sorted(builders)}"
        )
    return builders[kind](**params)


def _coupon(n: int) -> Process:
    if n < 1:
        raise ParameterError("coupon requires n >= 1")

    def kernel(d):
        if d <= 0:
            return [(0, 1.0)]
        if d == n:
            return [(d - 1, 1.0)]
        return [(d - 1, d / n), (d, 1.0 - d / n)]

    return _chain_process(
        f"coupon(n={n})", kernel, [(n, 1.0)],
        value=float, is_target=lambda d: d == 0,
    )


def _generalized_coupon(n: int, p: float) -> Process:
    # each of the d missing coupons is obtained independently with
    # probability p in every round
    if n < 1:
        raise ParameterError("generalized_coupon requires n >= 1")
    if not (0.0 < p <= 1.0):
        raise ParameterError("generalized_coupon requires p in (0, 1]")

    def kernel(d):
        if d <= 0:
            return [(0, 1.0)]
        return [
            (d - j, comb(d, j) * p**j * (1.0 - p) ** (d - j))
            for j in range(d + 1)
        ]

    return _chain_process(
        f"generalized_coupon(n={n},p={p})", kernel, [(n, 1.0)],
        value=float, is_target=lambda d: d == 0,
    )


def _geometric(p: float) -> Process:
    if not (0.0 < p <= 1.0):
        raise ParameterError("geometric requires p in (0, 1]")

    def kernel(s):
        if s == 0:
            return [(0, 1.0)]
        if p >= 1.0:
            return [(0, 1.0)]
        return [(0, p), (1, 1.0 - p)]

    return _chain_process(
        f"geometric(p={p})", kernel, [(1, 1.0)],
        value=float, is_target=lambda s: s == 0,
    )


def _winning_streak(k: int) -> Process:
    # state = current streak length; a fair coin either extends the
    # streak or resets it to 0
    if k < 1:
        raise ParameterError("winning_streak requires k >= 1")

    def kernel(i):
        if i >= k:
            return [(k, 1.0)]
        return [(i + 1, 0.5), (0, 0.5)]

    return _chain_process(
        f"winning_streak(k={k})", kernel, [(0, 1.0)],
        value=lambda i: float(k - i), is_target=lambda i: i >= k,
    )


def _gamblers_ruin(n: int) -> Process:
    # fair coin walk on [0..2n] started at n, both barriers absorbing
    if n < 1:
        raise ParameterError("gamblers_ruin requires n >= 1")

    def kernel(s):
        if s == 0 or s == 2 * n:
            return [(s, 1.0)]
        return [(s - 1, 0.5), (s + 1, 0.5)]

    return _chain_process(
        f"gamblers_ruin(n={n})", kernel, [(n, 1.0)],
        value=lambda s: float(min(s, 2 * n - s)),
        is_target=lambda s: s == 0 or s == 2 * n,
    )


def _fair_walk_reflecting(n: int) -> Process:
    # fair walk on [0..n]; 0 is reflective (moves to 1 surely), n absorbs
    if n < 1:
        raise ParameterError("fair_walk_reflecting requires n >= 1")

    def kernel(s):
        if s == n:
            return [(n, 1.0)]
        if s == 0:
            return [(1, 1.0)]
        return [(s - 1, 0.5), (s + 1, 0.5)]

    return _chain_process(
        f"fair_walk_reflecting(n={n})", kernel, [(0, 1.0)],
        value=lambda s: float(n - s), is_target=lambda s: s == n,
    )


def _rumor(n: int) -> Process:
    # state = number of informed people; a uniformly chosen person calls
    # a uniformly chosen other person
    if n < 2:
        raise ParameterError("rumor requires n >= 2")

    def kernel(i):
        if i >= n:
            return [(n, 1.0)]
        p = (n - i) * i / (n * (n - 1))
        return [(i + 1, p), (i, 1.0 - p)]

    return _chain_process(
        f"rumor(n={n})", kernel, [(1, 1.0)],
        value=lambda i: float(n - i), is_target=lambda i: i >= n,
    )


# ---------------------------------------------------------------------------
# Randomized local search and the (1+1) EA
# ---------------------------------------------------------------------------

def _binomial_start(n: int):
    """Exact distribution of the Hamming distance of a uniform start."""
    total = 2.0**n
    return tuple((d, comb(n, d) / total) for d in range(n + 1))


def _plateau_fitness(d: int, n: int, k: int) -> int:
    # fitness as a function of Hamming distance d to the optimum: the
    # optimum and all points outside the plateau score n - d, the
    # plateau ring 1 <= d < k scores n - k
    if d == 0 or d >= k:
        return n - d
    return n - k


def _binom_pmf_row(m: int, p: float) -> np.ndarray:
    q = 1.0 - p
    return np.array([comb(m, j) * p**j * q ** (m - j) for j in range(m + 1)])


def _ea_distance_kernel(n: int, p: float, fitness: Callable[[int], int]) -> Kernel:
    """Projected (1+1) EA kernel on Hamming distance, valid whenever the
    fitness depends on the bit string only through the distance."""

    cache: dict[int, list] = {}

    def kernel(d):
        if d in cache:
            return cache[d]
        down = _binom_pmf_row(d, p)        # zeros corrected
        up = _binom_pmf_row(n - d, p)      # ones destroyed
        masses: dict[int, float] = {}
        f_cur = fitness(d)
        for b in range(d + 1):
            for a in range(n - d + 1):
                prob = down[b] * up[a]
                if prob == 0.0:
                    continue
                cand = d - b + a
                succ = cand if fitness(cand) >= f_cur else d
                masses[succ] = masses.get(succ, 0.0) + prob
        row = sorted(masses.items())
        cache[d] = row
        return row

    return kernel


def _bit_flip(bits: tuple, i: int) -> tuple:
    return bits[:i] + (1 - bits[i],) + bits[i + 1:]


def _leading_ones(bits: tuple) -> int:
    lo = 0
    for b in bits:
        if b != 1:
            break
        lo += 1
    return lo


def make_ea_process(
    algorithm: str,
    objective: str,
    n: Optional[int] = None,
    k: Optional[int] = None,
    weights: Optional[tuple] = None,
    mutation_rate: Optional[float] = None,
) -> Process:
    """Construct RLS or the (1+1) EA on a benchmark objective.

    algorithm is "RLS" (flips exactly one uniformly chosen bit) or
    "OnePlusOneEA" (flips each bit independently with the mutation
    rate, default 1/n).  Offspring are accepted on ties, matching the
    greedy selection rule f(y) >= f(x).

    objective is one of "onemax", "leadingones", "plateau" (requires
    k) or "linear" (requires strictly decreasing positive weights).
    The value view is the distance to the optimum: n minus fitness for
    onemax and leadingones, Hamming distance for plateau, and the
    weighted gap for linear.

    onemax and plateau are tracked through their Hamming distance,
    which is an exact Markov projection by symmetry; leadingones and
    linear keep the full bit string as state.
    """
    if algorithm not in ("RLS", "OnePlusOneEA"):
        raise ParameterError(f"unknown algorithm {algorithm!r}")
    if objective == "linear":
        if weights is None:
            raise ParameterError("linear objective requires weights")
        weights = tuple(float(w) for w in weights)
        n = len(weights)
        if any(w <= 0 for w in weights):
            raise ParameterError("linear weights must be positive")
        if any(weights[i] <= weights[i + 1] for i in range(n - 1)):
            raise ParameterError("linear weights must be strictly decreasing")
    if n is None or n < 1:
        raise ParameterError("objective requires n >= 1")
    if objective == "plateau":
        if k is None or not (2 <= k <= n):
            raise ParameterError("plateau requires 2 <= k <= n")
    if algorithm == "OnePlusOneEA":
        p = 1.0 / n if mutation_rate is None else float(mutation_rate)
        if not (0.0 < p < 1.0):
            raise ParameterError("mutation_rate must lie in (0, 1)")
    else:
        p = None

    name = f"{algorithm}-{objective}(n={n}"
    if objective == "plateau":
        name += f",k={k}"
    if algorithm == "OnePlusOneEA":
        name += f",p={p!r}"
    name += ")"

    if objective in ("onemax", "plateau"):
        # distance-chain representation
        if objective == "onemax":
            fitness = lambda d: n - d
        else:
            fitness = lambda d: _plateau_fitness(d, n, k)

        if algorithm == "RLS":
            def kernel(d):
                if d == 0:
                    return [(0, 1.0)]
                f_cur = fitness(d)
                row: dict[int, float] = {}
                # flip one of the d zero bits
                succ = d - 1 if fitness(d - 1) >= f_cur else d
                row[succ] = row.get(succ, 0.0) + d / n
                if d < n:
                    succ = d + 1 if fitness(d + 1) >= f_cur else d
                    row[succ] = row.get(succ, 0.0) + (n - d) / n
                return sorted(row.items())
        else:
            kernel = _ea_distance_kernel(n, p, fitness)

        return _chain_process(
            name, kernel, _binomial_start(n),
            value=float, is_target=lambda d: d == 0,
        )

    # full bit-string representations
    if objective == "leadingones":
        fitness_bits = _leading_ones
        value = lambda bits: float(n - _leading_ones(bits))
    else:  # linear
        def fitness_bits(bits):
            return sum(w for w, b in zip(weights, bits) if b)

        def value(bits):
            return float(sum(w for w, b in zip(weights, bits) if not b))

    optimum = (1,) * n

    def is_target(bits):
        return bits == optimum

    if algorithm == "RLS":
        def kernel(bits):
            f_cur = fitness_bits(bits)
            row: dict[tuple, float] = {}
            for i in range(n):
                cand = _bit_flip(bits, i)
                succ = cand if fitness_bits(cand) >= f_cur else bits
                row[succ] = row.get(succ, 0.0) + 1.0 / n
            return list(row.items())

        def step(bits, rng):
            i = int(rng.integers(n))
            cand = _bit_flip(bits, i)
            return cand if fitness_bits(cand) >= fitness_bits(bits) else bits
    else:
        kernel = None

        def step(bits, rng):
            mask = rng.random(n) < p
            if not mask.any():
                return bits
            cand = tuple(int(b) ^ int(m) for b, m in zip(bits, mask))
            return cand if fitness_bits(cand) >= fitness_bits(bits) else bits

    def sample_initial(rng):
        return tuple(int(b) for b in rng.integers(0, 2, size=n))

    # enumerating the uniform start distribution is only sensible for
    # small n; larger instances rely on sampling
    support = None
    if n <= 12:
        from itertools import product
        prob = 0.5**n
        support = tuple((bits, prob) for bits in product((0, 1), repeat=n))

    return Process(
        name=name,
        sample_initial=sample_initial,
        step=step,
        value=value,
        is_target=is_target,
        exact_kernel=kernel,
        initial_support=support,
    )


# ---------------------------------------------------------------------------
# Graph and formula processes
# ---------------------------------------------------------------------------

def _triangles(instance: GraphInstance) -> tuple[tuple[int, int, int], ...]:
    adj = [set() for _ in range(instance.n)]
    for (u, v) in instance.edges:
        adj[u].add(v)
        adj[v].add(u)
    tris = []
    for (u, v) in instance.edges:
        a, b = min(u, v), max(u, v)
        for w in adj[a] & adj[b]:
            if w > b:
                tris.append((a, b, w))
    return tuple(sorted(tris))


def make_graph_process(kind: str, instance: GraphInstance) -> Process:
    """Construct the recolouring walk or the greedy vertex-cover process.

    recolour: states are 2-colorings; while a monochromatic triangle
    exists, one is chosen uniformly and one of its vertices (uniform)
    has its color flipped.  The value is the agreement count with the
    planted coloring on the union U of its first two classes, and the
    state is a target once agreement is total or zero on U, or no
    monochromatic triangle remains.

    vertex_cover: states are (vertices chosen so far, chosen set);
    while an uncovered edge exists, one is chosen uniformly and a
    uniform endpoint is added.  The value counts planted-cover vertices
    still missing.
    """
    if kind == "recolour":
        return _make_recolour(instance)
    if kind == "vertex_cover":
        return _make_vertex_cover(instance)
    raise ParameterError(f"unknown graph process kind {kind!r}")


def _make_recolour(instance: GraphInstance) -> Process:
    if instance.coloring is None:
        raise ParameterError("recolour requires a planted 3-coloring")
    n = instance.n
    tris = _triangles(instance)
    chi = instance.coloring
    u_set = tuple(v for v in range(n) if chi[v] in (0, 1))
    u_size = len(u_set)

    def mono(coloring):
        return [
            t for t in tris
            if coloring[t[0]] == coloring[t[1]] == coloring[t[2]]
        ]

    def agreement(coloring):
        # vertices of U whose current binary color matches the planted class
        return sum(1 for v in u_set if coloring[v] == chi[v])

    def value(coloring):
        # the agreement walk itself; absorbing at 0 and u_size, so the
        # generic value <= 0 target convention does not apply here
        return float(agreement(coloring))

    def is_target(coloring):
        # a clean split of U leaves no monochromatic triangle, because
        # every triangle has one vertex in each planted class
        return not mono(coloring)

    def kernel(coloring):
        ms = mono(coloring)
        if not ms or is_target(coloring):
            return [(coloring, 1.0)]
        row: dict[tuple, float] = {}
        p = 1.0 / (3 * len(ms))
        for t in ms:
            for v in t:
                succ = coloring[:v] + (1 - coloring[v],) + coloring[v + 1:]
                row[succ] = row.get(succ, 0.0) + p
        return list(row.items())

    def step(coloring, rng):
        ms = mono(coloring)
        if not ms:
            return coloring
        t = ms[int(rng.integers(len(ms)))]
        v = t[int(rng.integers(3))]
        return coloring[:v] + (1 - coloring[v],) + coloring[v + 1:]

    def sample_initial(rng):
        return tuple(int(b) for b in rng.integers(0, 2, size=n))

    return Process(
        name=f"recolour(n={n})",
        sample_initial=sample_initial,
        step=step,
        value=value,
        is_target=is_target,
        exact_kernel=kernel,
        initial_support=None,
    )


def _make_vertex_cover(instance: GraphInstance) -> Process:
    if instance.cover is None:
        raise ParameterError("vertex_cover requires a planted minimum cover")
    cover = instance.cover
    edges = instance.edges

    def uncovered(chosen):
        return [e for e in edges if e[0] not in chosen and e[1] not in chosen]

    def value(state):
        count, chosen = state
        if not uncovered(chosen):
            return 0.0
        return float(len(cover - chosen))

    def is_target(state):
        return not uncovered(state[1])

    def kernel(state):
        count, chosen = state
        unc = uncovered(chosen)
        if not unc:
            return [(state, 1.0)]
        row: dict = {}
        p = 1.0 / (2 * len(unc))
        for e in unc:
            for v in e:
                succ = (count + 1, chosen | {v})
                row[succ] = row.get(succ, 0.0) + p
        return list(row.items())

    def step(state, rng):
        count, chosen = state
        unc = uncovered(chosen)
        if not unc:
            return state
        e = unc[int(rng.integers(len(unc)))]
        v = e[int(rng.integers(2))]
        return (count + 1, chosen | {v})

    start = (0, frozenset())
    return Process(
        name=f"vertex_cover(n={instance.n})",
        sample_initial=lambda rng: start,
        step=step,
        value=value,
        is_target=is_target,
        exact_kernel=kernel,
        initial_support=((start, 1.0),),
    )


def make_two_sat_process(instance: CnfInstance) -> Process:
    """Random walk on assignments of a satisfiable 2-CNF formula.

    While some clause is unsatisfied, the lowest-index such clause is
    selected and one of its two variables (uniform) is flipped.  The
    value view is n minus the agreement count with the planted
    assignment; the target is any satisfying assignment.
    """
    n = instance.n
    clauses = instance.clauses
    planted = instance.assignment

    def first_unsat(assignment):
        for clause in clauses:
            if not _clause_satisfied(clause, assignment):
                return clause
        return None

    def value(assignment):
        agree = sum(1 for a, b in zip(assignment, planted) if a == b)
        return float(n - agree)

    def is_target(assignment):
        return first_unsat(assignment) is None

    def flip(assignment, var):
        return assignment[:var] + (not assignment[var],) + assignment[var + 1:]

    def kernel(assignment):
        clause = first_unsat(assignment)
        if clause is None:
            return [(assignment, 1.0)]
        row: dict = {}
        for (var, _) in clause:
            succ = flip(assignment, var)
            row[succ] = row.get(succ, 0.0) + 0.5
        return list(row.items())

    def step(assignment, rng):
        clause = first_unsat(assignment)
        if clause is None:
            return assignment
        var = clause[int(rng.integers(2))][0]
        return flip(assignment, var)

    def sample_initial(rng):
        return tuple(bool(b) for b in rng.integers(0, 2, size=n))

    support = None
    if n <= 12:
        from itertools import product
        prob = 0.5**n
        support = tuple((bits, prob) for bits in product((False, True), repeat=n))

    return Process(
        name=f"two_sat(n={n},m={len(clauses)})",
        sample_initial=sample_initial,
        step=step,
        value=value,
        is_target=is_target,
        exact_kernel=kernel,
        initial_support=support,
    )


def make_sorting_process(n: int, start: tuple) -> Process:
    """Random-swap sorting: pick two positions uniformly, swap them if
    they form an inversion.  The value is the inversion count."""
    if n < 2:
        raise ParameterError("sorting requires n >= 2")
    start = tuple(start)
    if sorted(start) != list(range(1, n + 1)) and sorted(start) != list(range(n)):
        raise ParameterError("start must be a permutation of [n]")

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    n_pairs = len(pairs)

    def inversions(perm):
        return sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )

    def swap(perm, i, j):
        lst = list(perm)
        lst[i], lst[j] = lst[j], lst[i]
        return tuple(lst)

    def kernel(perm):
        row: dict = {}
        p = 1.0 / n_pairs
        for (i, j) in pairs:
            succ = swap(perm, i, j) if perm[i] > perm[j] else perm
            row[succ] = row.get(succ, 0.0) + p
        return list(row.items())

    def step(perm, rng):
        idx = int(rng.integers(n_pairs))
        i, j = pairs[idx]
        if perm[i] > perm[j]:
            return swap(perm, i, j)
        return perm

    return Process(
        name=f"sorting(n={n})",
        sample_initial=lambda rng: start,
        step=step,
        value=lambda perm: float(inversions(perm)),
        is_target=lambda perm: inversions(perm) == 0,
        exact_kernel=kernel,
        initial_support=((start, 1.0),),
    )


# ---------------------------------------------------------------------------
# Finite-chain extraction
# ---------------------------------------------------------------------------

def to_finite_chain(process: Process, max_states: int = 10_000) -> FiniteChain:
    """Enumerate the reachable state space of a kernel-backed process.

    Breadth-first exploration from the support of the initial
    distribution; target states are made absorbing.  Raises a capacity
    error once more than max_states states have been discovered.
    """
    if process.exact_kernel is None:
        raise UnsupportedError(f"{process.name} has no exact kernel")
    if process.initial_support is None:
        raise UnsupportedError(f"{process.name} has no explicit initial distribution")

    index: dict = {}
    order: list = []
    queue = deque()
    for state, _ in process.initial_support:
        if state not in index:
            index[state] = len(order)
            order.append(state)
            queue.append(state)
    rows: dict[int, list[tuple[int, float]]] = {}
    while queue:
        state = queue.popleft()
        i = index[state]
        if process.is_target(state):
            rows[i] = [(i, 1.0)]
            continue
        row = process.exact_kernel(state)
        total = sum(p for _, p in row)
        if abs(total - 1.0) > _KERNEL_TOL:
            raise StructureError(
                f"kernel row at {state!r} sums to {total!r}", offender=state
            )
        entries = []
        for succ, p in row:
            if p <= 0.0:
                continue
            if succ not in index:
                if len(order) >= max_states:
                    raise CapacityError(
                        f"state space exceeds max_states={max_states}",
                        count=len(order) + 1,
                    )
                index[succ] = len(order)
                order.append(succ)
                queue.append(succ)
            entries.append((index[succ], p))
        rows[i] = entries

    m = len(order)
    kernel = np.zeros((m, m))
    for i, entries in rows.items():
        for j, p in entries:
            kernel[i, j] += p
    start = np.zeros(m)
    for state, p in process.initial_support:
        start[index[state]] += p
    targets = frozenset(i for i, s in enumerate(order) if process.is_target(s))
    return FiniteChain(
        states=tuple(order), kernel=kernel, start=start, targets=targets
    )


# ---------------------------------------------------------------------------
# Instance generators
# ---------------------------------------------------------------------------

def random_3colorable_graph(n: int, edge_probability: float, seed: int) -> GraphInstance:
    """Random graph with a planted proper 3-coloring.

    Vertices are split round-robin into three near-equal classes and
    each inter-class pair becomes an edge independently.
    """
    if n < 3:
        raise ParameterError("3-colorable generator requires n >= 3")
    rng = np.random.default_rng(seed)
    chi = tuple(v % 3 for v in range(n))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if chi[u] != chi[v] and rng.random() < edge_probability:
                edges.append((u, v))
    return GraphInstance(n=n, edges=tuple(edges), coloring=chi)


def random_graph(n: int, edge_probability: float, seed: int) -> GraphInstance:
    """Erdos-Renyi graph without planted structure."""
    if n < 1:
        raise ParameterError("random_graph requires n >= 1")
    rng = np.random.default_rng(seed)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < edge_probability:
                edges.append((u, v))
    return GraphInstance(n=n, edges=tuple(edges))


def planted_2sat(n: int, m: int, seed: int) -> CnfInstance:
    """Random 2-CNF with a planted satisfying assignment.

    The assignment is sampled uniformly; each clause picks two distinct
    variables and random polarities, then one literal is corrected (at
    random among the two) whenever the clause would be violated.
    """
    if n < 2:
        raise ParameterError("planted_2sat requires n >= 2")
    if m < 1:
        raise ParameterError("planted_2sat requires m >= 1")
    rng = np.random.default_rng(seed)
    assignment = tuple(bool(b) for b in rng.integers(0, 2, size=n))
    clauses = []
    for _ in range(m):
        v1, v2 = rng.choice(n, size=2, replace=False)
        lits = [
            (int(v1), bool(rng.integers(0, 2))),
            (int(v2), bool(rng.integers(0, 2))),
        ]
        if not any(assignment[var] == pol for (var, pol) in lits):
            fix = int(rng.integers(2))
            var = lits[fix][0]
            lits[fix] = (var, assignment[var])
        clauses.append((lits[0], lits[1]))
    return CnfInstance(n=n, clauses=tuple(clauses), assignment=assignment)


# ---------------------------------------------------------------------------
# Text serialization
# ---------------------------------------------------------------------------

def graph_to_text(instance: GraphInstance) -> str:
    """Line format: header ``n m``, then one ``u v`` line per edge, then
    optional ``c coloring ...`` / ``c cover ...`` witness lines."""
    lines = [f"{instance.n} {len(instance.edges)}"]
    lines += [f"{u} {v}" for (u, v) in instance.edges]
    if instance.coloring is not None:
        lines.append("c coloring " + " ".join(str(c) for c in instance.coloring))
    if instance.cover is not None:
        lines.append("c cover " + " ".join(str(v) for v in sorted(instance.cover)))
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> GraphInstance:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise StructureError("empty graph text")
    n, m = (int(x) for x in lines[0].split())
    edges = []
    coloring = None
    cover = None
    for ln in lines[1:]:
        if ln.startswith("c coloring "):
            coloring = tuple(int(x) for x in ln.split()[2:])
        elif ln.startswith("c cover "):
            cover = frozenset(int(x) for x in ln.split()[2:])
        else:
            u, v = (int(x) for x in ln.split())
            edges.append((u, v))
    if len(edges) != m:
        raise StructureError(f"header announces {m} edges, found {len(edges)}")
    return GraphInstance(n=n, edges=tuple(edges), coloring=coloring, cover=cover)


def cnf_to_dimacs(instance: CnfInstance) -> str:
    """DIMACS-compatible text; the planted assignment is stored in a
    ``c planted`` comment as signed variable numbers."""
    lines = [
        "c planted "
        + " ".join(str(i + 1 if val else -(i + 1)) for i, val in enumerate(instance.assignment)),
        f"p cnf {instance.n} {len(instance.clauses)}",
    ]
    for clause in instance.clauses:
        lits = [(var + 1) if pol else -(var + 1) for (var, pol) in clause]
        lines.append(f"{lits[0]} {lits[1]} 0")
    return "\n".join(lines) + "\n"


def cnf_from_dimacs(text: str) -> CnfInstance:
    n = None
    clauses = []
    planted = None
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        if ln.startswith("c planted "):
            lits = [int(x) for x in ln.split()[2:]]
            planted = tuple(x > 0 for x in sorted(lits, key=abs))
        elif ln.startswith("c"):
            continue
        elif ln.startswith("p cnf"):
            parts = ln.split()
            n = int(parts[2])
        else:
            lits = [int(x) for x in ln.split()]
            if lits[-1] == 0:
                lits = lits[:-1]
            if len(lits) != 2:
                raise StructureError(f"clause line {ln!r} is not 2-CNF")
            clauses.append(tuple((abs(x) - 1, x > 0) for x in lits))
    if n is None or planted is None:
        raise StructureError("missing problem line or planted assignment")
    return CnfInstance(n=n, clauses=tuple(clauses), assignment=planted)
