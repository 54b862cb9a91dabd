"""Accounting tools behind the competitive-ratio arguments.

Three independent certifying mechanisms live here:

* a weight scheme for the two-arrival, unit-duration setting: every item
  gets a weight, almost every FirstFit server collects weight at least its
  rental length, and no feasible server can collect weight faster than
  168/131 per rented time unit (valid for second arrivals t in [1/28, 1));
* layer mass profiles for the duration-2 escalating families, whose
  pairwise inequalities force utilization to stay near 2/3 of cost;
* the multiplier sequences describing how much new size a chain of
  just-fitting arrivals can add, with matching recurrence and closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

import random

from .algorithms import AlgorithmTrace, first_fit
from .generators import random_two_arrival
from .model import (
    Schedule,
    as_rational,
    cost,
    format_rational,
    utilization,
)
from .optimal import verify_certificate

T_MIN = Fraction(1, 28)

# Weight per unit size for first-arrival items (times 1+t), the flat bonus
# for items over 1/2, and the per-size rate for second-arrival items.  The
# second rate is also the fastest any feasible server collects weight per
# rented time unit, which is what caps the optimum's total weight.
_W1_RATE = Fraction(156, 131)
_W1_BONUS = Fraction(12, 131)
_W2_RATE = Fraction(168, 131)


def _check_weight_domain(x: Fraction, t: Fraction) -> tuple[Fraction, Fraction]:
    x = as_rational(x)
    t = as_rational(t)
    if not 0 < x <= 1:
        raise ValueError(f"size {format_rational(x)} outside (0, 1]")
    if not T_MIN <= t < 1:
        raise ValueError(
            f"second arrival {format_rational(t)} outside [1/28, 1)"
        )
    return x, t


def weight_w1(x, t) -> Fraction:
    """Weight of a first-arrival item: linear in size, bonus above 1/2."""
    x, t = _check_weight_domain(x, t)
    weight = _W1_RATE * (1 + t) * x
    if x > Fraction(1, 2):
        weight += _W1_BONUS * (1 + t)
    return weight


def weight_w2(x, t) -> Fraction:
    """Weight of a second-arrival item: purely linear in size."""
    x, t = _check_weight_domain(x, t)
    return _W2_RATE * (1 + t) * x


class ServerType(str, Enum):
    """Buckets for FirstFit servers by first-arrival and total load."""

    TYPE_I = "I"
    TYPE_IIA = "IIa"
    TYPE_IIB = "IIb"
    TYPE_IIC = "IIc"
    TYPE_IIIA = "IIIa"
    TYPE_IIIB = "IIIb"
    TYPE_IIIC = "IIIc"
    BELOW_THRESHOLD = "below-threshold"


@dataclass(frozen=True)
class ServerTypeInfo:
    """Classification of one FirstFit server in the two-arrival setting.

    The gap fields measure how far the server sits below its bucket's
    nominal thresholds (first-arrival load, then total load); they are only
    set for the bucket families whose weight argument runs on those gaps.
    """

    server_id: int
    load_at_zero: Fraction
    total_load: Fraction
    items_at_zero: int
    label: ServerType
    start_load_gap: Optional[Fraction] = None
    total_load_gap: Optional[Fraction] = None


def _check_two_arrival_uniform(trace: AlgorithmTrace, t: Fraction) -> Fraction:
    """Every job unit-duration starting at 0 or t; every server spans [0, 1+t]."""
    t = as_rational(t)
    if not 0 < t < 1:
        raise ValueError("second arrival t must lie strictly between 0 and 1")
    instance = trace.schedule.instance
    for i, jb in enumerate(instance.jobs):
        if jb.duration != 1:
            raise ValueError(f"job {i} is not unit duration")
        if jb.start not in (0, t):
            raise ValueError(
                f"job {i} starts at {format_rational(jb.start)}, "
                f"expected 0 or {format_rational(t)}"
            )
    for srv in trace.schedule.servers:
        if srv.open_time != 0 or srv.close_time != 1 + t:
            raise ValueError(
                f"server {srv.id} spans "
                f"[{format_rational(srv.open_time)}, "
                f"{format_rational(srv.close_time)}], expected [0, {format_rational(1 + t)}]"
            )
    return t


def classify_servers(trace: AlgorithmTrace, t) -> list[ServerTypeInfo]:
    """Bucket every FirstFit server of a uniform two-arrival trace.

    Thresholds are half-open downward: a first-arrival load of exactly 1/2
    falls below the lowest bucket, and type-III buckets require exactly one
    first-arrival item.  Servers matching no bucket come back labelled
    below-threshold rather than raising; the weight argument budgets for a
    bounded number of them.
    """
    t = _check_two_arrival_uniform(trace, t)
    jobs = trace.schedule.instance.jobs
    out: list[ServerTypeInfo] = []
    for srv in trace.schedule.servers:
        at_zero = [jobs[i].size for i in srv.job_indices if jobs[i].start == 0]
        x0 = sum(at_zero, Fraction(0))
        total = sum((jobs[i].size for i in srv.job_indices), Fraction(0))
        items0 = len(at_zero)
        label = ServerType.BELOW_THRESHOLD
        gap1: Optional[Fraction] = None
        gap2: Optional[Fraction] = None
        if x0 >= Fraction(5, 6):
            if total >= Fraction(11, 12):
                label = ServerType.TYPE_I
        elif x0 >= Fraction(2, 3):
            if total >= Fraction(11, 12):
                label = ServerType.TYPE_IIA
            elif total >= Fraction(5, 6):
                label = ServerType.TYPE_IIB if items0 == 1 else ServerType.TYPE_IIC
                gap1 = Fraction(5, 6) - x0
                gap2 = Fraction(11, 12) - total
        elif x0 > Fraction(1, 2) and items0 == 1:
            if total >= Fraction(11, 12):
                label = ServerType.TYPE_IIIA
            elif total >= Fraction(5, 6):
                label = ServerType.TYPE_IIIB
            elif total >= Fraction(3, 4):
                label = ServerType.TYPE_IIIC
                gap1 = Fraction(2, 3) - x0
                gap2 = Fraction(5, 6) - total
        out.append(
            ServerTypeInfo(
                server_id=srv.id,
                load_at_zero=x0,
                total_load=total,
                items_at_zero=items0,
                label=label,
                start_load_gap=gap1,
                total_load_gap=gap2,
            )
        )
    return out


# The weight argument brushes aside at most this many servers in total: two
# with total load under 3/4, one per threshold class stuck below its total
# target, and two low-or-crowded stragglers at the bottom bucket.
IGNORED_BUDGET = 7


@dataclass(frozen=True)
class OptServerCheck:
    server_id: int
    weight: Fraction
    bound: Fraction
    ok: bool


@dataclass(frozen=True)
class WeightReport:
    """Both sides of the weight ledger for one instance.

    server_weights lists (server id, first-arrival weight, second-arrival
    weight) for the FirstFit schedule; ff_violations are the servers whose
    total falls short of 1+t (at most ignored_budget may, for the argument
    to stand); opt_checks cap every reference server's weight by 168/131 *
    (1+t) * its rental length.  Totals on both sides must agree exactly
    with the per-item total, since weights just move between ledgers.
    """

    t: Fraction
    server_weights: tuple[tuple[int, Fraction, Fraction], ...]
    ff_violations: tuple[int, ...]
    opt_checks: tuple[OptServerCheck, ...]
    ignored_budget: int
    ff_total: Fraction
    opt_total: Fraction
    item_total: Fraction

    @property
    def passed(self) -> bool:
        return (
            len(self.ff_violations) <= self.ignored_budget
            and all(chk.ok for chk in self.opt_checks)
            and self.ff_total == self.item_total
            and self.opt_total == self.item_total
        )


def verify_weights(trace: AlgorithmTrace, opt_schedule: Schedule, t) -> WeightReport:
    """Run the full weight ledger against a FirstFit trace and a reference.

    The reference schedule may be a true optimum or any feasible certificate;
    it is checked for feasibility first.  Requires the uniform two-arrival
    setting and t in [1/28, 1).
    """
    t = _check_two_arrival_uniform(trace, t)
    if t < T_MIN:
        raise ValueError("weight scheme needs t >= 1/28")
    instance = trace.schedule.instance
    verify_certificate(instance, opt_schedule)
    jobs = instance.jobs

    def split_weight(indices) -> tuple[Fraction, Fraction]:
        w1 = sum(
            (weight_w1(jobs[i].size, t) for i in indices if jobs[i].start == 0),
            Fraction(0),
        )
        w2 = sum(
            (weight_w2(jobs[i].size, t) for i in indices if jobs[i].start != 0),
            Fraction(0),
        )
        return w1, w2

    server_weights = []
    violations = []
    ff_total = Fraction(0)
    for srv in trace.schedule.servers:
        w1, w2 = split_weight(srv.job_indices)
        server_weights.append((srv.id, w1, w2))
        ff_total += w1 + w2
        if w1 + w2 < 1 + t:
            violations.append(srv.id)

    opt_checks = []
    opt_total = Fraction(0)
    for srv in opt_schedule.servers:
        w1, w2 = split_weight(srv.job_indices)
        weight = w1 + w2
        bound = _W2_RATE * (1 + t) * (srv.close_time - srv.open_time)
        opt_checks.append(
            OptServerCheck(
                server_id=srv.id, weight=weight, bound=bound, ok=weight <= bound
            )
        )
        opt_total += weight

    item_total = sum(
        (
            weight_w1(jb.size, t) if jb.start == 0 else weight_w2(jb.size, t)
            for jb in jobs
        ),
        Fraction(0),
    )
    return WeightReport(
        t=t,
        server_weights=tuple(server_weights),
        ff_violations=tuple(violations),
        opt_checks=tuple(opt_checks),
        ignored_budget=IGNORED_BUDGET,
        ff_total=ff_total,
        opt_total=opt_total,
        item_total=item_total,
    )


@dataclass(frozen=True)
class LayerProfile:
    """Arrival-time mass per layer over a designated set of busy servers."""

    server_ids: tuple[int, ...]
    layer_mass: tuple[Fraction, ...]  # index u = total size arriving at time u


def _check_escalating(trace: AlgorithmTrace, level_count: int) -> None:
    if level_count <= 0:
        raise ValueError("level_count must be positive")
    for i, jb in enumerate(trace.schedule.instance.jobs):
        if jb.duration != 2:
            raise ValueError(f"job {i} is not duration 2")
        if jb.start.denominator != 1 or not 0 <= jb.start <= level_count:
            raise ValueError(
                f"job {i} must arrive at an integer time in [0, {level_count}]"
            )


def layer_profile(trace: AlgorithmTrace, k: int, level_count: int) -> LayerProfile:
    """Mass per arrival layer over the servers rented for the whole horizon.

    The designated set is every server opened at 0 and closed at
    level_count + 2; there must be exactly k >= 2 of them.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    _check_escalating(trace, level_count)
    designated = [
        srv
        for srv in trace.schedule.servers
        if srv.open_time == 0 and srv.close_time == level_count + 2
    ]
    if not designated:
        raise ValueError("no server spans the full horizon")
    if len(designated) != k:
        raise ValueError(
            f"expected {k} full-horizon servers, found {len(designated)}"
        )
    jobs = trace.schedule.instance.jobs
    mass = [Fraction(0)] * (level_count + 1)
    for srv in designated:
        for i in srv.job_indices:
            mass[int(jobs[i].start)] += jobs[i].size
    return LayerProfile(
        server_ids=tuple(srv.id for srv in designated), layer_mass=tuple(mass)
    )


def check_layer_inequalities(profile: LayerProfile, k: int) -> list[str]:
    """The busy-server mass inequalities; returns the failures (none expected).

    Layer 0 must exceed k/2, and every adjacent pair must satisfy
    mass[u] + mass[u-1]/2 > (k-1)/2; both follow from each arrival wave
    nearly filling k already-loaded servers.
    """
    failures = []
    mass = profile.layer_mass
    if not mass[0] > Fraction(k, 2):
        failures.append(
            f"layer 0 mass {format_rational(mass[0])} not above {format_rational(Fraction(k, 2))}"
        )
    for u in range(1, len(mass)):
        lhs = mass[u] + mass[u - 1] / 2
        if not lhs > Fraction(k - 1, 2):
            failures.append(
                f"layers {u - 1},{u}: {format_rational(lhs)} not above "
                f"{format_rational(Fraction(k - 1, 2))}"
            )
    return failures


@dataclass(frozen=True)
class UtilRatioBound:
    ratio: Fraction
    bound: Fraction
    passed: bool


def util_ratio_bound(trace: AlgorithmTrace, k: int, level_count: int) -> UtilRatioBound:
    """Utilization-to-cost ratio against its guaranteed floor.

    Applies when FirstFit rented exactly k servers, each for the whole
    horizon [0, level_count + 2].  The floor 2/3 - 2/(3k) - 2/(3(l+2))
    tends to 2/3 as both parameters grow.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    _check_escalating(trace, level_count)
    servers = trace.schedule.servers
    if len(servers) != k or any(
        srv.open_time != 0 or srv.close_time != level_count + 2 for srv in servers
    ):
        raise ValueError(
            f"trace must rent exactly {k} servers over the full horizon"
        )
    ratio = utilization(trace.schedule.instance) / cost(trace.schedule)
    bound = (
        Fraction(2, 3)
        - Fraction(2, 3 * k)
        - Fraction(2, 3 * (level_count + 2))
    )
    return UtilRatioBound(ratio=ratio, bound=bound, passed=ratio > bound)


@dataclass(frozen=True)
class MultiplierSequences:
    """How much size a chain of just-fitting arrivals can stack per server.

    multipliers[i] is the fraction of capacity a fresh arrival wave can add
    after i waves (each wave must overflow the previous load); partial_sums
    accumulates them, and closed_form is the same sequence in closed form.
    """

    multipliers: tuple[Fraction, ...]
    partial_sums: tuple[Fraction, ...]
    closed_form: tuple[Fraction, ...]


def multiplier_sequences(n: int) -> MultiplierSequences:
    """Sequences up to index n: step multipliers, their sums, closed form.

    The multipliers halve away from 2/3 (each wave fills what the previous
    one left over half-empty); the sums then grow by 2/3 per step around a
    damped oscillation.  The partial sums are cross-checked against their
    own two-term recurrence before returning.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    mult = [Fraction(1)]
    for _ in range(n):
        mult.append(1 - mult[-1] / 2)
    sums = [Fraction(1)]
    for i in range(1, n + 1):
        sums.append(sums[-1] + mult[i])
    recur = [Fraction(1), Fraction(3, 2)]
    for j in range(2, n + 1):
        recur.append(1 + recur[j - 1] / 2 + recur[j - 2] / 2)
    recur = recur[: n + 1]
    if sums != recur:
        raise RuntimeError("partial sums disagree with their recurrence")
    closed = [
        (6 * j + Fraction(-1, 2) ** j - 4 * Fraction(-1) ** (2 * j) + 12) / 9
        for j in range(n + 1)
    ]
    return MultiplierSequences(
        multipliers=tuple(mult),
        partial_sums=tuple(sums),
        closed_form=tuple(closed),
    )


def find_uniform_two_arrival(
    t,
    seed: int,
    n_range: tuple[int, int] = (4, 8),
    size_grid: int = 12,
    max_attempts: int = 50000,
):
    """Rejection-sample a two-arrival instance whose FF servers are uniform.

    Draws seeded random instances until FirstFit rents every server over the
    whole [0, 1+t] window (so the weight scheme's setting applies), then
    returns (instance, trace, accepted seed).  Deterministic in (t, seed).
    """
    t = as_rational(t)
    for attempt in range(max_attempts):
        cand_seed = seed + attempt
        n = random.Random(cand_seed).randint(*n_range)
        instance = random_two_arrival(n=n, t=t, seed=cand_seed, size_grid=size_grid)
        trace = first_fit(instance)
        servers = trace.schedule.servers
        if servers and all(
            srv.open_time == 0 and srv.close_time == 1 + t for srv in servers
        ):
            return instance, trace, cand_seed
    raise RuntimeError(
        f"no uniform-server instance found in {max_attempts} attempts"
    )


RATIO_KINDS = ("exact-opt", "certificate-upper", "lower-bound")


@dataclass(frozen=True)
class RatioReport:
    """A cost ratio plus how it relates to the true algorithm/optimum ratio.

    relation is read as 'true ratio <relation> value': an exact optimum
    gives '=', dividing by a certificate's cost gives '>=' (certificates
    only overestimate the optimum), and dividing by a lower bound gives '<='.
    """

    value: Fraction
    kind: str
    relation: str

    @property
    def decimal(self) -> float:
        return float(self.value)

    def as_dict(self) -> dict:
        return {
            "ratio": format_rational(self.value),
            "ratio_decimal": self.decimal,
            "kind": self.kind,
            "relation": self.relation,
        }


def ratio_report(alg_cost, reference_cost, kind: str) -> RatioReport:
    """Form alg_cost / reference_cost and label what the quotient means."""
    if kind not in RATIO_KINDS:
        raise ValueError(f"kind must be one of {RATIO_KINDS}")
    alg_cost = as_rational(alg_cost)
    reference_cost = as_rational(reference_cost)
    if reference_cost <= 0:
        raise ValueError("reference cost must be positive")
    relation = {"exact-opt": "=", "certificate-upper": ">=", "lower-bound": "<="}[kind]
    return RatioReport(value=alg_cost / reference_cost, kind=kind, relation=relation)
