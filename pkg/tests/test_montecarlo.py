"""Monte Carlo engine: determinism, censoring, accuracy and condition checks."""

import dataclasses
import math

import numpy as np
import pytest

from driftlab import errors
from driftlab.montecarlo import (
    default_cap,
    estimate_drift,
    sample_hitting_times,
    sample_trajectory,
    simulate_hitting,
    simulate_trajectory,
    tail_frequency,
    trial_rng,
    verify_condition,
    wilson_interval,
)
from driftlab.oracle import hitting_time_exact
from driftlab.potentials import expected_time_potential, identity_potential, lift
from driftlab.processes import make_ea_process, make_simple_chain, to_finite_chain


def test_same_seed_gives_identical_times():
    proc = make_simple_chain("coupon", n=10)
    a = sample_hitting_times(proc, trials=50, seed=7, cap=10000)
    b = sample_hitting_times(proc, trials=50, seed=7, cap=10000)
    assert np.array_equal(a, b)
    c = sample_hitting_times(proc, trials=50, seed=8, cap=10000)
    assert not np.array_equal(a, c)


def test_trials_are_order_independent():
    proc = make_simple_chain("coupon", n=10)
    few = sample_hitting_times(proc, trials=5, seed=3, cap=10000)
    many = sample_hitting_times(proc, trials=12, seed=3, cap=10000)
    assert np.array_equal(few, many[:5])


def test_python_and_compiled_paths_agree():
    # the two paths consume randomness differently, so compare
    # distributions rather than individual trials
    proc = make_simple_chain("coupon", n=10)
    generic = dataclasses.replace(proc, exact_kernel=None)
    fast = sample_hitting_times(proc, trials=4000, seed=5, cap=10000)
    slow = sample_hitting_times(generic, trials=4000, seed=5, cap=10000)
    assert fast.min() >= 0 and slow.min() >= 0
    se = math.sqrt(fast.var(ddof=1) / len(fast) + slow.var(ddof=1) / len(slow))
    assert abs(fast.mean() - slow.mean()) <= 4.0 * se


def test_censoring_marks_and_bounds():
    proc = make_simple_chain("coupon", n=10)
    times = sample_hitting_times(proc, trials=20, seed=1, cap=1)
    assert np.all(times == -1)
    stats = simulate_hitting(proc, trials=20, seed=1, cap=1)
    assert stats.censored == 20
    assert math.isnan(stats.mean)
    assert stats.censored_mean_lb == 1.0


@pytest.mark.parametrize(
    "proc",
    [
        make_simple_chain("geometric", p=0.3),
        make_simple_chain("coupon", n=10),
        make_simple_chain("rumor", n=8),
    ],
)
def test_empirical_mean_matches_oracle(proc):
    truth = hitting_time_exact(to_finite_chain(proc)).from_start
    stats = simulate_hitting(proc, trials=20000, seed=11, cap=1_000_000)
    assert stats.censored == 0
    assert abs(stats.mean - truth) <= 3.0 * stats.se, (stats.mean, truth)


def test_default_cap_policy():
    assert default_cap(12.3) == 1230
    assert default_cap(None) == 10_000_000
    assert default_cap(float("inf")) == 10_000_000


def test_wilson_interval_brackets_the_point_estimate():
    lo, hi = wilson_interval(30, 100)
    assert 0.0 <= lo < 0.3 < hi <= 1.0
    assert wilson_interval(0, 10)[0] == 0.0
    assert wilson_interval(10, 10)[1] == 1.0
    with pytest.raises(errors.ParameterError):
        wilson_interval(0, 0)


def test_tail_frequency_on_deterministic_chain():
    proc = make_simple_chain("geometric", p=1.0)  # always hits at t = 1
    frac, (lo, hi) = tail_frequency(proc, 1, trials=200, seed=0)
    assert frac == 0.0
    frac0, _ = tail_frequency(proc, 0, trials=200, seed=0)
    assert frac0 == 1.0


def test_estimate_drift_exact_kernel_zero_width_ci():
    proc = make_simple_chain("coupon", n=10)
    est, ci = estimate_drift(proc, identity_potential(), 4, samples=10, seed=0)
    assert est == pytest.approx(0.4, abs=1e-12)
    assert ci == (est, est)


def test_estimate_drift_sampled_ci_covers_truth():
    proc = dataclasses.replace(make_simple_chain("coupon", n=10), exact_kernel=None)
    est, (lo, hi) = estimate_drift(proc, identity_potential(), 4, samples=20000, seed=0)
    assert lo <= 0.4 <= hi
    assert hi - lo < 0.05


def test_verify_additive_condition_on_unit_drift_lift():
    base = make_simple_chain("winning_streak", k=4)
    chain = to_finite_chain(base)
    lifted = lift(base, expected_time_potential(chain))
    g = expected_time_potential(chain)
    interior = [s for i, s in enumerate(chain.states) if i not in chain.targets]
    rep = verify_condition(
        lifted, g, "additive_D", state_set=interior, delta=1.0, sense=">="
    )
    assert rep.overall == "pass"
    rep2 = verify_condition(
        lifted, g, "additive_D", state_set=interior, delta=1.0, sense="<="
    )
    assert rep2.overall == "pass"
    rep3 = verify_condition(
        lifted, g, "additive_D", state_set=interior, delta=1.1, sense=">="
    )
    assert rep3.overall == "fail"


def test_verify_step_bound_condition():
    proc = make_simple_chain("gamblers_ruin", n=3)
    states = [1, 2, 3, 4, 5]
    ok = verify_condition(
        proc, identity_potential(), "step_bound_B", state_set=states, c=1.0
    )
    assert ok.overall == "pass"
    bad = verify_condition(
        proc, identity_potential(), "step_bound_B", state_set=states, c=0.5
    )
    assert bad.overall == "fail"


def test_verify_variance_condition():
    proc = make_simple_chain("gamblers_ruin", n=3)
    rep = verify_condition(
        proc, identity_potential(), "variance_Var", state_set=[1, 2, 3, 4, 5], delta=1.0
    )
    assert rep.overall == "pass"


def test_verify_monotone_condition_fails_on_two_sided_walk():
    proc = make_simple_chain("gamblers_ruin", n=3)
    rep = verify_condition(
        proc, identity_potential(), "monotone_M", state_set=[1, 2, 3]
    )
    assert rep.overall == "fail"
    coupon = make_simple_chain("coupon", n=6)
    rep2 = verify_condition(
        coupon, identity_potential(), "monotone_M", state_set=[1, 2, 3, 4, 5, 6]
    )
    assert rep2.overall == "pass"


def test_sampled_states_cap_verdict_at_indeterminate():
    proc = make_simple_chain("coupon", n=6)
    rep = verify_condition(
        proc, identity_potential(), "additive_D", delta=1.0 / 6.0, sense=">="
    )
    assert rep.overall == "indeterminate"
    assert rep.extras["sampled_states"]


def test_unknown_condition_rejected():
    with pytest.raises(errors.ParameterError):
        verify_condition(
            make_simple_chain("coupon", n=4), identity_potential(), "no_such"
        )


def test_trajectory_holds_value_after_absorption():
    proc = make_simple_chain("geometric", p=1.0)
    vals = sample_trajectory(proc, horizon=5, seed=0)
    assert vals[0] == 1.0
    assert np.all(vals[1:] == 0.0)


def test_trajectory_stats_shape_and_monotone_mean_for_coupon():
    proc = make_simple_chain("coupon", n=10)
    stats = simulate_trajectory(proc, horizon=30, trials=2000, seed=2)
    assert stats.mean.shape == (31,)
    assert stats.mean[0] == pytest.approx(10.0)
    assert np.all(np.diff(stats.mean) <= 1e-12)
    assert np.all(stats.ci_lo <= stats.mean) and np.all(stats.mean <= stats.ci_hi)


def test_trajectory_compiled_and_python_paths_agree():
    proc = make_simple_chain("coupon", n=8)
    generic = dataclasses.replace(proc, exact_kernel=None)
    a = simulate_trajectory(proc, horizon=20, trials=4000, seed=9)
    b = simulate_trajectory(generic, horizon=20, trials=4000, seed=9)
    # pointwise agreement within the union of the 99% bands
    assert np.all(a.ci_lo <= b.ci_hi) and np.all(b.ci_lo <= a.ci_hi)


def test_leadingones_compiled_walk_matches_generic_stepper():
    proc = make_ea_process("OnePlusOneEA", "leadingones", n=8, mutation_rate=0.1)
    generic = dataclasses.replace(proc, name="generic-lo(n=8)")
    fast = sample_hitting_times(proc, trials=2000, seed=21, cap=100000)
    slow = sample_hitting_times(generic, trials=2000, seed=21, cap=100000)
    assert fast.min() >= 0 and slow.min() >= 0
    # paths consume randomness differently, so compare distributions
    se = math.sqrt(fast.var(ddof=1) / len(fast) + slow.var(ddof=1) / len(slow))
    assert abs(fast.mean() - slow.mean()) <= 4.0 * se


def test_parameter_validation():
    proc = make_simple_chain("coupon", n=4)
    with pytest.raises(errors.ParameterError):
        sample_hitting_times(proc, trials=0, seed=0, cap=10)
    with pytest.raises(errors.ParameterError):
        sample_hitting_times(proc, trials=10, seed=0, cap=0)
    with pytest.raises(errors.ParameterError):
        simulate_trajectory(proc, horizon=-1, trials=10, seed=0)
    with pytest.raises(errors.ParameterError):
        estimate_drift(proc, identity_potential(), 2, samples=0, seed=0)


def test_trial_rng_streams_are_distinct():
    a = trial_rng(0, 0).random(4)
    b = trial_rng(0, 1).random(4)
    c = trial_rng(0, 0).random(4)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, c)
