"""Exact reference costs: exhaustive partition search and certificate checks."""

import random
from fractions import Fraction

import pytest

from rentlab import (
    InfeasibleScheduleError,
    cost,
    first_fit,
    make_instance,
    make_schedule,
    next_fit,
    span,
    utilization,
    active_count,
)
from rentlab.generators import ggu_extended, random_equal_duration
from rentlab.optimal import (
    active_ceil_bound,
    brute_force_opt,
    lower_bounds,
    verify_certificate,
)


F = Fraction


def min_bins(sizes):
    """Reference bin count by exhaustive search (test-local oracle)."""
    best = [len(sizes)]

    def place(i, bins):
        if len(bins) >= best[0]:
            return
        if i == len(sizes):
            best[0] = len(bins)
            return
        for b in range(len(bins)):
            if bins[b] + sizes[i] <= 1:
                bins[b] += sizes[i]
                place(i + 1, bins)
                bins[b] -= sizes[i]
        bins.append(sizes[i])
        place(i + 1, bins)
        bins.pop()

    place(0, [])
    return best[0]


# ---------------------------------------------------------------------------
# Exhaustive optimum
# ---------------------------------------------------------------------------

def test_brute_force_examples():
    inst = make_instance([(F(1, 2), 0, 2)])
    assert brute_force_opt(inst).cost == 2

    inst = make_instance([(F(6, 10), 0, 2), (F(6, 10), 0, 2)])
    assert brute_force_opt(inst).cost == 4

    inst = make_instance([(F(1, 2), 0, 2), (F(1, 2), 0, 2), (F(1, 2), 1, 3)])
    assert brute_force_opt(inst).cost == 4


def test_brute_force_empty_instance():
    opt = brute_force_opt(make_instance([]))
    assert opt.cost == 0
    assert opt.partitions_examined == 1


def test_brute_force_respects_job_limit():
    inst = make_instance([(F(1, 10), 0, 1)] * 11)
    with pytest.raises(ValueError, match="brute-force limit"):
        brute_force_opt(inst)
    assert brute_force_opt(inst, max_jobs=11).cost == 2


def test_brute_force_result_is_feasible_and_certified():
    for seed in range(20):
        inst = random_equal_duration(8, seed=seed)
        opt = brute_force_opt(inst)
        assert verify_certificate(inst, opt.schedule) == opt.cost


def test_brute_force_early_stop_at_floor():
    # a perfect packing matches the utilization floor, so search halts
    inst = make_instance([(F(1, 2), 0, 2), (F(1, 2), 0, 2)])
    opt = brute_force_opt(inst)
    assert opt.cost == 2
    assert opt.partitions_examined == 1


def test_brute_force_never_beats_lower_bounds_or_loses_to_online():
    for seed in range(25):
        inst = random_equal_duration(9, seed=seed + 100)
        opt = brute_force_opt(inst)
        util, spn = lower_bounds(inst)
        assert opt.cost >= util
        assert opt.cost >= spn
        assert opt.util_bound == util
        assert opt.span_bound == spn
        assert opt.cost <= cost(next_fit(inst).schedule)
        assert opt.cost <= cost(first_fit(inst).schedule)


def test_brute_force_matches_bin_packing_on_shared_interval():
    # all jobs alive on one common window: renting cost is
    # duration times the classical minimum bin count
    for seed in range(15):
        rng = random.Random(seed)
        sizes = [F(rng.randint(1, 8), 8) for _ in range(rng.randint(2, 7))]
        inst = make_instance([(s, 0, 3) for s in sizes])
        opt = brute_force_opt(inst)
        assert opt.cost == 3 * min_bins(sizes)


# ---------------------------------------------------------------------------
# Lower bounds
# ---------------------------------------------------------------------------

def test_lower_bounds_examples():
    assert lower_bounds(make_instance([(F(1, 2), 0, 2)])) == (1, 2)
    assert lower_bounds(make_instance([])) == (0, 0)

    from rentlab.generators import long_uniform

    inst = long_uniform(3, 4)
    util, spn = lower_bounds(inst)
    assert util == 13
    assert spn == 6
    assert util == utilization(inst)
    assert spn == span(inst)


# ---------------------------------------------------------------------------
# Per-time bound for unit-duration instances
# ---------------------------------------------------------------------------

def test_active_ceil_bound_examples():
    inst = make_instance([(F(1, 2), 0, 1)] * 3)
    assert active_ceil_bound(inst, F(1, 2)) == 2
    assert active_ceil_bound(inst, F(5)) == 0

    inst = make_instance([(F(1), 0, 1), (F(1), 0, 1)])
    assert active_ceil_bound(inst, F(1, 2)) == 2


def test_active_ceil_bound_requires_unit_durations():
    inst = make_instance([(F(1, 2), 0, 2)])
    with pytest.raises(ValueError):
        active_ceil_bound(inst, F(1))


def test_active_ceil_bound_lower_bounds_opt_schedule():
    for seed in range(20):
        inst = random_equal_duration(8, seed=seed, horizon=2)
        opt = brute_force_opt(inst)
        times = sorted({jb.start for jb in inst.jobs})
        for t in times:
            assert active_ceil_bound(inst, t) <= active_count(opt.schedule, t)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

def test_verify_certificate_singletons():
    inst = make_instance([(F(1, 2), 0, 2), (F(1, 3), 1, 4)])
    sched = make_schedule(inst, [[0], [1]])
    assert verify_certificate(inst, sched) == 5


def test_verify_certificate_rejects_overload():
    inst = make_instance([(F(6, 10), 0, 2), (F(6, 10), 0, 2)])
    sched = make_schedule(inst, [[0, 1]])
    with pytest.raises(InfeasibleScheduleError):
        verify_certificate(inst, sched)


def test_verify_certificate_rejects_foreign_instance():
    inst = make_instance([(F(1, 2), 0, 2)])
    other = make_instance([(F(1, 3), 0, 2)])
    sched = make_schedule(inst, [[0]])
    with pytest.raises(ValueError):
        verify_certificate(other, sched)


def test_adversarial_certificate_value():
    inst, cert = ggu_extended(6, F(1, 2))
    assert verify_certificate(inst, cert) == 82
