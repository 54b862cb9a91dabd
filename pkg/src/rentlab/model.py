"""Exact-arithmetic model of jobs, instances, servers and schedules.

Every size, time and cost in this package is a ``fractions.Fraction``.  The
adversarial families in :mod:`rentlab.generators` separate servers by gaps far
below float resolution, so fit tests and cost comparisons must be exact.
Floats are rejected at the boundary rather than silently converted.

Conventions:

* a job is a triple ``(size, start, finish)`` with ``0 < size <= 1``,
  ``start >= 0`` and ``finish > start``; it is active on the half-open
  interval ``[start, finish)``;
* jobs in an instance are ordered by non-decreasing start (arrival order);
* a server is rented from the earliest start to the latest finish of the
  jobs assigned to it, so idle gaps inside that window are still paid for;
* schedule cost is the total rented time over all servers.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence, Union

Rational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def as_rational(value: Union[int, str, Fraction]) -> Fraction:
    """Coerce an int, Fraction or 'p/q' string into an exact rational.

    Floats are refused: 0.1 is not 1/10, and a silent conversion would
    poison every downstream comparison.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(
            f"refusing {value!r}: pass int, Fraction or a 'p/q' string"
        )
    if isinstance(value, str):
        return parse_rational(value)
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    """Parse 'p' or 'p/q' (no decimals, no whitespace inside) exactly."""
    token = text.strip()
    if not _RATIONAL_RE.match(token):
        raise ValueError(f"not an integer or p/q rational: {text!r}")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator: {text!r}") from None


def format_rational(value: Fraction) -> str:
    """Render in lowest terms, as 'p' when the denominator is 1, else 'p/q'."""
    return str(Fraction(value))


@dataclass(frozen=True)
class Job:
    """One job: ``size`` of server capacity held on ``[start, finish)``."""

    size: Fraction
    start: Fraction
    finish: Fraction

    def __post_init__(self):
        object.__setattr__(self, "size", as_rational(self.size))
        object.__setattr__(self, "start", as_rational(self.start))
        object.__setattr__(self, "finish", as_rational(self.finish))

    @property
    def duration(self) -> Fraction:
        return self.finish - self.start

    def active_at(self, t: Fraction) -> bool:
        return self.start <= t < self.finish


@dataclass(frozen=True)
class Instance:
    """An ordered sequence of jobs, presented to the algorithms one by one."""

    jobs: tuple[Job, ...]

    def __post_init__(self):
        object.__setattr__(self, "jobs", tuple(self.jobs))

    def __len__(self) -> int:
        return len(self.jobs)


def make_instance(rows: Iterable[Sequence]) -> Instance:
    """Build an instance from (size, start, finish) triples."""
    return Instance(tuple(Job(*row) for row in rows))


@dataclass(frozen=True)
class Server:
    """A rented server: which jobs it holds and its rental window."""

    id: int
    job_indices: tuple[int, ...]
    open_time: Fraction
    close_time: Fraction


@dataclass(frozen=True)
class Schedule:
    """An assignment of every job of an instance to rented servers."""

    instance: Instance
    servers: tuple[Server, ...]


@dataclass(frozen=True)
class Violation:
    """One broken rule, pointing at the offending job and/or server."""

    rule: str
    job_index: int | None = None
    server_id: int | None = None
    time: Fraction | None = None
    load: Fraction | None = None

    def __str__(self) -> str:
        parts = [self.rule]
        if self.job_index is not None:
            parts.append(f"job {self.job_index}")
        if self.server_id is not None:
            parts.append(f"server {self.server_id}")
        if self.time is not None:
            parts.append(f"time {format_rational(self.time)}")
        if self.load is not None:
            parts.append(f"load {format_rational(self.load)}")
        return ": ".join([parts[0], ", ".join(parts[1:])]) if len(parts) > 1 else parts[0]


class InfeasibleScheduleError(ValueError):
    """Raised when a claimed schedule breaks capacity or completeness."""


def validate(instance: Instance) -> list[Violation]:
    """Check instance well-formedness; returns every broken rule.

    Rules: 0 < size <= 1, start >= 0, finish > start, and starts
    non-decreasing in presentation order.  Empty instances are valid.
    """
    violations: list[Violation] = []
    prev_start: Fraction | None = None
    for i, jb in enumerate(instance.jobs):
        if not 0 < jb.size:
            violations.append(Violation("size must be positive", job_index=i))
        if jb.size > 1:
            violations.append(Violation("size must be at most 1", job_index=i))
        if jb.start < 0:
            violations.append(Violation("start must be non-negative", job_index=i))
        if jb.finish <= jb.start:
            violations.append(Violation("finish must exceed start", job_index=i))
        if prev_start is not None and jb.start < prev_start:
            violations.append(Violation("starts must be non-decreasing", job_index=i))
        prev_start = jb.start
    return violations


def utilization(instance: Instance) -> Fraction:
    """Total work: sum of size * duration over all jobs."""
    return sum((jb.size * jb.duration for jb in instance.jobs), Fraction(0))


def span(instance: Instance) -> Fraction:
    """Total length of time during which at least one job is active."""
    intervals = sorted((jb.start, jb.finish) for jb in instance.jobs)
    total = Fraction(0)
    cur_start: Fraction | None = None
    cur_end: Fraction | None = None
    for s, f in intervals:
        if cur_end is None or s > cur_end:
            if cur_end is not None:
                total += cur_end - cur_start
            cur_start, cur_end = s, f
        elif f > cur_end:
            cur_end = f
    if cur_end is not None:
        total += cur_end - cur_start
    return total


def mu(instance: Instance) -> Fraction:
    """Max-to-min duration ratio; 1 means equal-length jobs."""
    if not instance.jobs:
        raise ValueError("undefined on empty instance")
    durations = [jb.duration for jb in instance.jobs]
    return max(durations) / min(durations)


def arrival_mass(instance: Instance, t1: Fraction, t2: Fraction) -> Fraction:
    """Total size of jobs whose start falls in the half-open window (t1, t2]."""
    t1 = as_rational(t1)
    t2 = as_rational(t2)
    if t1 >= t2:
        raise ValueError("window must satisfy t1 < t2")
    return sum(
        (jb.size for jb in instance.jobs if t1 < jb.start <= t2), Fraction(0)
    )


def arrival_mass_at(instance: Instance, t: Fraction) -> Fraction:
    """Total size of jobs arriving exactly at time t."""
    t = as_rational(t)
    return sum((jb.size for jb in instance.jobs if jb.start == t), Fraction(0))


def event_times(instance: Instance) -> list[Fraction]:
    """Sorted distinct job starts and finishes; loads are constant between them."""
    points = {jb.start for jb in instance.jobs} | {jb.finish for jb in instance.jobs}
    return sorted(points)


def load(schedule: Schedule, server: Union[Server, int], t: Fraction) -> Fraction:
    """Total size of the server's jobs active at time t."""
    if isinstance(server, int):
        server = schedule.servers[server]
    t = as_rational(t)
    jobs = schedule.instance.jobs
    return sum(
        (jobs[i].size for i in server.job_indices if jobs[i].active_at(t)),
        Fraction(0),
    )


def active_count(schedule: Schedule, t: Fraction) -> int:
    """Number of servers with at least one active job at time t."""
    t = as_rational(t)
    jobs = schedule.instance.jobs
    count = 0
    for server in schedule.servers:
        if any(jobs[i].active_at(t) for i in server.job_indices):
            count += 1
    return count


def cost(schedule: Schedule) -> Fraction:
    """Total rented time: sum over servers of close - open."""
    return sum(
        (srv.close_time - srv.open_time for srv in schedule.servers), Fraction(0)
    )


def active_count_integral(schedule: Schedule) -> Fraction:
    """Integral of the active-server count over time.

    Equals cost(schedule) exactly when no server has an idle gap inside its
    rental window; in general cost is at least this integral.
    """
    points = event_times(schedule.instance)
    total = Fraction(0)
    for left, right in zip(points, points[1:]):
        total += active_count(schedule, left) * (right - left)
    return total


def make_schedule(instance: Instance, groups: Sequence[Sequence[int]]) -> Schedule:
    """Assemble a schedule from groups of job indices.

    Rental windows are derived (min start to max finish per group).  Groups
    must reference valid, distinct job indices; capacity is not checked here,
    see check_schedule.
    """
    servers = []
    seen: set[int] = set()
    n = len(instance.jobs)
    for sid, group in enumerate(groups):
        if not group:
            raise ValueError("empty server group")
        for i in group:
            if not 0 <= i < n:
                raise ValueError(f"job index {i} out of range")
            if i in seen:
                raise ValueError(f"job index {i} assigned twice")
            seen.add(i)
        jobs = [instance.jobs[i] for i in group]
        servers.append(
            Server(
                id=sid,
                job_indices=tuple(group),
                open_time=min(jb.start for jb in jobs),
                close_time=max(jb.finish for jb in jobs),
            )
        )
    return Schedule(instance=instance, servers=tuple(servers))


def check_schedule(schedule: Schedule) -> list[Violation]:
    """Check completeness, rental-window consistency and capacity.

    Capacity only needs testing at job starts within each server: once a job
    is running, the concurrent load can only drop until the next start.
    """
    violations: list[Violation] = []
    n = len(schedule.instance.jobs)
    jobs = schedule.instance.jobs
    assigned: dict[int, int] = {}
    for server in schedule.servers:
        if not server.job_indices:
            violations.append(Violation("server holds no jobs", server_id=server.id))
            continue
        for i in server.job_indices:
            if not 0 <= i < n:
                violations.append(
                    Violation("job index out of range", job_index=i, server_id=server.id)
                )
                continue
            if i in assigned:
                violations.append(
                    Violation("job assigned twice", job_index=i, server_id=server.id)
                )
            assigned[i] = server.id
        members = [jobs[i] for i in server.job_indices if 0 <= i < n]
        if not members:
            continue
        open_t = min(jb.start for jb in members)
        close_t = max(jb.finish for jb in members)
        if server.open_time != open_t or server.close_time != close_t:
            violations.append(
                Violation(
                    "rental window must span min start to max finish",
                    server_id=server.id,
                )
            )
        for s in sorted({jb.start for jb in members}):
            here = sum(
                (jb.size for jb in members if jb.active_at(s)), Fraction(0)
            )
            if here > 1:
                violations.append(
                    Violation(
                        "capacity exceeded", server_id=server.id, time=s, load=here
                    )
                )
    for i in range(n):
        if i not in assigned:
            violations.append(Violation("job never assigned", job_index=i))
    return violations


def scale_time(instance: Instance, factor: Fraction) -> Instance:
    """Stretch the time axis by a positive factor; sizes are untouched.

    Fit decisions are invariant under this map, so it converts between
    unit-duration and duration-k variants of the same packing behaviour.
    """
    factor = as_rational(factor)
    if factor <= 0:
        raise ValueError("factor must be positive")
    return Instance(
        tuple(
            Job(jb.size, jb.start * factor, jb.finish * factor)
            for jb in instance.jobs
        )
    )


# ---------------------------------------------------------------------------
# Plain-text instance files and JSON schedule reports.
# ---------------------------------------------------------------------------

def parse_instance(text: str) -> Instance:
    """Parse an instance file: one 'size start finish' line per job.

    Fields are integers or p/q rationals; '#' starts a comment line and
    blank lines are skipped.
    """
    jobs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ValueError(
                f"line {lineno}: expected 'size start finish', got {raw!r}"
            )
        try:
            size, start, finish = (parse_rational(f) for f in fields)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        jobs.append(Job(size, start, finish))
    return Instance(tuple(jobs))


def format_instance(instance: Instance, header: str | None = None) -> str:
    """Render an instance file; optional '#' header for provenance notes."""
    lines = []
    if header:
        for h in header.splitlines():
            lines.append(f"# {h}")
    for jb in instance.jobs:
        lines.append(
            f"{format_rational(jb.size)} "
            f"{format_rational(jb.start)} "
            f"{format_rational(jb.finish)}"
        )
    return "\n".join(lines) + "\n"


def read_instance(path) -> Instance:
    return parse_instance(Path(path).read_text())


def write_instance(path, instance: Instance, header: str | None = None) -> None:
    Path(path).write_text(format_instance(instance, header=header))


def schedule_to_dict(schedule: Schedule) -> dict:
    """JSON-ready form: job indices plus open/close times as p/q strings."""
    return {
        "servers": [
            {
                "id": srv.id,
                "jobs": list(srv.job_indices),
                "open": format_rational(srv.open_time),
                "close": format_rational(srv.close_time),
            }
            for srv in schedule.servers
        ]
    }


def schedule_from_dict(instance: Instance, data: dict) -> Schedule:
    """Rebuild a schedule against its instance.

    Strict on structure: every job of the instance must appear exactly once
    and indices must be in range (stored schedules are claims about a known
    instance; a silent partial read would hide a mismatched file).
    """
    servers = tuple(
        Server(
            id=entry["id"],
            job_indices=tuple(entry["jobs"]),
            open_time=parse_rational(entry["open"]),
            close_time=parse_rational(entry["close"]),
        )
        for entry in data["servers"]
    )
    n = len(instance.jobs)
    seen: set[int] = set()
    for server in servers:
        for i in server.job_indices:
            if not 0 <= i < n:
                raise ValueError(f"job index {i} out of range for this instance")
            if i in seen:
                raise ValueError(f"job index {i} assigned twice")
            seen.add(i)
    if len(seen) != n:
        missing = sorted(set(range(n)) - seen)
        raise ValueError(f"schedule does not cover jobs {missing}")
    return Schedule(instance=instance, servers=servers)


def read_schedule(path, instance: Instance) -> Schedule:
    return schedule_from_dict(instance, json.loads(Path(path).read_text()))


def write_schedule(path, schedule: Schedule) -> None:
    Path(path).write_text(json.dumps(schedule_to_dict(schedule), indent=2) + "\n")
