"""Instance families: adversarial constructions and seeded random batches.

All generators emit jobs sorted by start, use exact rationals, and are
deterministic functions of their parameters (including the seed).  The
adversarial families come with tightly tuned size perturbations; the scale
separation between groups is why everything downstream runs on Fractions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import Instance, Job, Schedule, as_rational, make_schedule

SIXTH = Fraction(1, 6)
THIRD = Fraction(1, 3)
HALF = Fraction(1, 2)

# Per-group perturbation multiples for the two opening waves of the
# first-fit adversary.  Within a group with offset d, the first wave packs
# pairwise into two servers of load 5/6+3d and 5/6+d; the second wave packs
# into five servers of load 2/3+12d (twice) and 2/3+2d (three times).
_WAVE1_MULTIPLES = (33, -3, -7, -7, -13, 9, -2, -2, -2, -2)
_WAVE2_MULTIPLES = (46, -34, 6, 6, 12, -10, 1, 1, 1, 1)


def ggu_extended(
    k: int, t, delta=None
) -> tuple[Instance, Schedule]:
    """Adversarial two-round family driving FirstFit to cost 17k(1+t).

    Round one (time 0) presents k groups of ten near-1/6 jobs, then k groups
    of ten near-1/3 jobs, then 10k jobs just over 1/2.  Group g's sizes are
    perturbed by multiples of d_g = delta * 18**(k-g), a geometric separation
    that stops any job from fitting into an earlier group's servers.
    FirstFit opens 2k + 5k + 10k servers.  Round two (time t < 1) tops every
    one of those servers up with a single filler job (1/12, 1/6 or 1/4), so
    all 17k servers stay rented until t+1.

    Returns the instance together with a feasible certificate schedule that
    instead pairs pathological jobs across waves and costs 27k/2 + 1,
    putting the cost ratio on a path toward 34/27 * (1+t).

    Requires k a positive multiple of 6 (so the filler jobs tile whole
    certificate servers) and 0 < delta < 18**-k / 100 (default 18**-k / 1000).
    """
    if k <= 0 or k % 6 != 0:
        raise ValueError("k must be a positive multiple of 6")
    t = as_rational(t)
    if not 0 < t < 1:
        raise ValueError("second arrival t must lie strictly between 0 and 1")
    ceiling = Fraction(1, 100 * 18**k)
    if delta is None:
        delta = Fraction(1, 1000 * 18**k)
    delta = as_rational(delta)
    if not 0 < delta < ceiling:
        raise ValueError(f"delta must lie in (0, 1/{100 * 18**k})")

    offsets = [delta * 18 ** (k - g) for g in range(1, k + 1)]
    jobs: list[Job] = []

    def emit(size: Fraction, start: Fraction, finish: Fraction) -> int:
        jobs.append(Job(size, start, finish))
        return len(jobs) - 1

    wave1 = [
        [emit(SIXTH + m * d, Fraction(0), Fraction(1)) for m in _WAVE1_MULTIPLES]
        for d in offsets
    ]
    wave2 = [
        [emit(THIRD + m * d, Fraction(0), Fraction(1)) for m in _WAVE2_MULTIPLES]
        for d in offsets
    ]
    wave3 = [emit(HALF + delta, Fraction(0), Fraction(1)) for _ in range(10 * k)]
    fill12 = [emit(Fraction(1, 12), t, t + 1) for _ in range(2 * k)]
    fill6 = [emit(SIXTH, t, t + 1) for _ in range(5 * k)]
    fill4 = [emit(Fraction(1, 4), t, t + 1) for _ in range(10 * k)]

    instance = Instance(tuple(jobs))

    # Certificate: each just-over-1/2 job shares a server with one
    # cross-wave pair summing to just under 1/2; the two leftover jobs share
    # one extra server; the fillers tile servers of their own exactly.
    pairs: list[tuple[int, int]] = []
    for g in range(k):
        pairs.append((wave1[g][0], wave2[g][1]))  # sums to 1/2 - d_g
        for j in range(2, 10):
            pairs.append((wave1[g][j], wave2[g][j]))  # sums to 1/2 - d_g
    for g in range(k - 1):
        pairs.append((wave1[g][1], wave2[g + 1][0]))  # sums to 1/2 - 8*d_{g+1}
    groups: list[list[int]] = []
    for m, big in enumerate(wave3):
        group = [big]
        if m < len(pairs):
            group.extend(pairs[m])
        groups.append(group)
    groups.append([wave1[k - 1][1], wave2[0][0]])
    for chunk_start in range(0, len(fill12), 12):
        groups.append(fill12[chunk_start : chunk_start + 12])
    for chunk_start in range(0, len(fill6), 6):
        groups.append(fill6[chunk_start : chunk_start + 6])
    for chunk_start in range(0, len(fill4), 4):
        groups.append(fill4[chunk_start : chunk_start + 4])
    certificate = make_schedule(instance, groups)
    return instance, certificate


def long_uniform(k: int, level_count: int) -> Instance:
    """Duration-2 jobs over arrivals 0..level_count keeping k servers busy.

    Time 0 brings k jobs of size 2/3; every later time u brings k jobs of
    size 1/3 (u odd) or 1/3 + eps (u even) with eps = 1/(k*level_count).
    FirstFit settles into exactly k servers rented over [0, level_count+2],
    while utilization stays near two thirds of that cost.  Requires k >= 2
    and an even, positive level_count.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if level_count <= 0 or level_count % 2 != 0:
        raise ValueError("level_count must be a positive even integer")
    eps = Fraction(1, k * level_count)
    jobs = [Job(Fraction(2, 3), Fraction(0), Fraction(2)) for _ in range(k)]
    for u in range(1, level_count + 1):
        size = THIRD if u % 2 == 1 else THIRD + eps
        jobs.extend(Job(size, Fraction(u), Fraction(u + 2)) for _ in range(k))
    return Instance(tuple(jobs))


def nf_nemesis(n_pairs_half: int) -> Instance:
    """Alternating halves and slivers that waste every NextFit server.

    Emits 2N pairs (1/2 then 1/(2N)), all unit duration at time 0.  NextFit
    burns one server per pair (2N total); packing halves together and all
    slivers into one server costs N+1, so the ratio 2N/(N+1) climbs toward 2
    as N grows.
    """
    n = n_pairs_half
    if n < 1:
        raise ValueError("N must be at least 1")
    sliver = Fraction(1, 2 * n)
    jobs = []
    for _ in range(2 * n):
        jobs.append(Job(HALF, Fraction(0), Fraction(1)))
        jobs.append(Job(sliver, Fraction(0), Fraction(1)))
    return Instance(tuple(jobs))


def random_two_arrival(n: int, t, seed: int, size_grid: int = 12) -> Instance:
    """n unit-duration jobs arriving at 0 or t, sizes uniform on the grid.

    Sizes are drawn from {1/D, ..., D/D} and each start is a fair coin over
    {0, t}.  Deterministic in (n, t, seed, size_grid); jobs come out sorted
    by start.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if size_grid < 1:
        raise ValueError("size_grid must be at least 1")
    t = as_rational(t)
    if not 0 < t < 1:
        raise ValueError("second arrival t must lie strictly between 0 and 1")
    rng = random.Random(seed)
    drawn = []
    for _ in range(n):
        size = Fraction(rng.randint(1, size_grid), size_grid)
        start = Fraction(0) if rng.random() < 0.5 else t
        drawn.append((start, size))
    drawn.sort(key=lambda pair: pair[0])
    return Instance(tuple(Job(size, start, start + 1) for start, size in drawn))


def random_equal_duration(
    n: int,
    seed: int,
    size_grid: int = 8,
    start_grid: int = 4,
    horizon: int = 3,
) -> Instance:
    """n unit-duration jobs with grid starts anywhere in [0, horizon].

    Starts land on multiples of 1/start_grid, sizes on multiples of
    1/size_grid; deterministic in the parameters, sorted by start.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if size_grid < 1 or start_grid < 1 or horizon < 0:
        raise ValueError("grids must be positive and horizon non-negative")
    rng = random.Random(seed)
    drawn = []
    for _ in range(n):
        size = Fraction(rng.randint(1, size_grid), size_grid)
        start = Fraction(rng.randint(0, horizon * start_grid), start_grid)
        drawn.append((start, size))
    drawn.sort(key=lambda pair: pair[0])
    return Instance(tuple(Job(size, start, start + 1) for start, size in drawn))


FAMILIES = (
    "ggu",
    "long-uniform",
    "nf-nemesis",
    "random-two-arrival",
    "random-equal-duration",
)


@dataclass(frozen=True)
class GeneratorSpec:
    """A named family plus its parameters; builds on demand.

    build() returns (instance, certificate-or-None): only the ggu family
    carries a packing certificate.
    """

    family: str
    parameters: dict

    def build(self) -> tuple[Instance, Optional[Schedule]]:
        p = self.parameters
        if self.family == "ggu":
            instance, certificate = ggu_extended(
                k=p["k"], t=p["t"], delta=p.get("delta")
            )
            return instance, certificate
        if self.family == "long-uniform":
            return long_uniform(k=p["k"], level_count=p["l"]), None
        if self.family == "nf-nemesis":
            return nf_nemesis(p["N"]), None
        if self.family == "random-two-arrival":
            return (
                random_two_arrival(
                    n=p["n"],
                    t=p["t"],
                    seed=p["seed"],
                    size_grid=p.get("size_grid", 12),
                ),
                None,
            )
        if self.family == "random-equal-duration":
            return (
                random_equal_duration(
                    n=p["n"],
                    seed=p["seed"],
                    size_grid=p.get("size_grid", 8),
                    start_grid=p.get("start_grid", 4),
                    horizon=p.get("horizon", 3),
                ),
                None,
            )
        raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
