"""Minimum-energy preemptive scheduling of a fixed job set.

Critical-interval algorithm: repeatedly pick the interval [s, t] (s a release
date, t a deadline) whose contained work divided by its still-free length is
maximal, run its jobs at that density in EDF order over the free time, then
remove the interval. Free time is kept as a list of real-time pieces, so the
windows of the remaining jobs never need rewriting.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .model import Job, Schedule, Segment, edf_key, energy_of_schedule, merge_adjacent

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CriticalInterval:
    s: Fraction
    t: Fraction
    density: Fraction
    members: FrozenSet[int]
    available: Fraction  # free length of [s, t] when the interval was selected


@dataclass(frozen=True)
class PropertyReport:
    constant_job_speed: bool
    no_idle_in_windows: bool
    constant_between_events: bool
    slower_jobs_dominated: bool

    @property
    def all_hold(self) -> bool:
        return (self.constant_job_speed and self.no_idle_in_windows
                and self.constant_between_events and self.slower_jobs_dominated)


class FreeTime:
    """Disjoint, sorted pieces of the time axis not yet given to a critical interval."""

    def __init__(self, start: Fraction, end: Fraction):
        self.pieces: List[Tuple[Fraction, Fraction]] = [(start, end)] if start < end else []

    def within(self, s: Fraction, t: Fraction) -> List[Tuple[Fraction, Fraction]]:
        clipped = []
        for a, b in self.pieces:
            lo, hi = max(a, s), min(b, t)
            if lo < hi:
                clipped.append((lo, hi))
        return clipped

    def length(self, s: Fraction, t: Fraction) -> Fraction:
        return sum((b - a for a, b in self.within(s, t)), Fraction(0))

    def remove(self, s: Fraction, t: Fraction) -> None:
        kept = []
        for a, b in self.pieces:
            if b <= s or a >= t:
                kept.append((a, b))
                continue
            if a < s:
                kept.append((a, s))
            if b > t:
                kept.append((t, b))
        self.pieces = kept


def _edf_run(members: Sequence[Job], pieces: List[Tuple[Fraction, Fraction]], speed: Fraction) -> List[Segment]:
    """EDF at a constant speed over the given free pieces."""
    left: Dict[int, Fraction] = {job.id: Fraction(job.p) for job in members}
    segments: List[Segment] = []
    for a, b in pieces:
        now = a
        while now < b:
            ready = [job for job in members if job.r <= now and left[job.id] > 0]
            pending = [job.r for job in members if job.r > now and left[job.id] > 0]
            if not ready:
                if not pending or min(pending) >= b:
                    break
                now = Fraction(min(pending))
                continue
            job = min(ready, key=edf_key)
            end = min(now + left[job.id] / speed, b)
            arrivals = [r for r in pending if r < end]
            if arrivals:
                end = Fraction(min(arrivals))
            segments.append(Segment(job.id, now, end, speed))
            left[job.id] -= (end - now) * speed
            now = end
    unfinished = [job_id for job_id, work in left.items() if work != 0]
    if unfinished:
        raise RuntimeError(f"EDF left work unfinished for jobs {unfinished} at speed {speed}")
    return segments


def yds_critical_intervals(jobs: Iterable[Job]) -> List[Tuple[CriticalInterval, List[Segment]]]:
    """Selected critical intervals in selection order, each with its EDF pieces."""
    remaining = sorted(jobs, key=edf_key)
    if not remaining:
        return []
    free = FreeTime(Fraction(min(j.r for j in remaining)), Fraction(max(j.d for j in remaining)))
    selected: List[Tuple[CriticalInterval, List[Segment]]] = []

    while remaining:
        best: Optional[CriticalInterval] = None
        releases = sorted({j.r for j in remaining})
        deadlines = sorted({j.d for j in remaining})
        for s in releases:
            for t in deadlines:
                if t <= s:
                    continue
                members = [j for j in remaining if j.r >= s and j.d <= t]
                if not members:
                    continue
                available = free.length(Fraction(s), Fraction(t))
                if available == 0:
                    continue
                density = Fraction(sum(j.p for j in members)) / available
                # strict comparison keeps the smallest s, then the smallest t, on ties
                if best is None or density > best.density:
                    best = CriticalInterval(Fraction(s), Fraction(t), density,
                                            frozenset(j.id for j in members), available)
        if best is None:
            raise RuntimeError("no critical interval found for the remaining jobs")

        members = [j for j in remaining if j.id in best.members]
        pieces = free.within(best.s, best.t)
        segments = _edf_run(members, pieces, best.density)
        logger.debug(f"Critical interval [{best.s}, {best.t}] density {best.density} "
                     f"members {sorted(best.members)} free length {best.available}")
        selected.append((best, segments))
        free.remove(best.s, best.t)
        remaining = [j for j in remaining if j.id not in best.members]
    return selected


def yds_min_energy(jobs: Iterable[Job], alpha: int = 3) -> Schedule:
    """Feasible preemptive schedule of all ``jobs`` with minimum energy.

    Speeds are unbounded, so every job set is schedulable. ``alpha`` does not
    change the schedule, only its energy.
    """
    jobs = list(jobs)
    segments: List[Segment] = []
    for _, pieces in yds_critical_intervals(jobs):
        segments.extend(pieces)
    return Schedule.build(merge_adjacent(segments), (j.id for j in jobs))


def min_energy_of_set(jobs: Iterable[Job], alpha: int) -> Fraction:
    return energy_of_schedule(yds_min_energy(jobs, alpha), alpha)


def _overlap(a: Fraction, b: Fraction, c: Fraction, d: Fraction) -> Fraction:
    return max(Fraction(0), min(b, d) - max(a, c))


def check_optimality_properties(schedule: Schedule, jobs: Iterable[Job]) -> PropertyReport:
    """Audit the four properties that characterize a minimum-energy schedule.

    1. each job runs at a single speed;
    2. no idle time inside any window (r_j, d_j] of the given jobs;
    3. a single speed on each interval between consecutive release/deadline points;
    4. every job running inside [r_j, d_j] is at least as fast as job j.
    """
    jobs = list(jobs)
    segs = schedule.segments

    speeds: Dict[int, set] = {}
    for seg in segs:
        speeds.setdefault(seg.job_id, set()).add(seg.speed)
    constant_job_speed = all(len(v) == 1 for v in speeds.values())

    no_idle = True
    for job in jobs:
        busy = sum((_overlap(seg.start, seg.end, Fraction(job.r), Fraction(job.d)) for seg in segs), Fraction(0))
        if busy != job.d - job.r:
            no_idle = False
            break

    events = sorted({Fraction(j.r) for j in jobs} | {Fraction(j.d) for j in jobs})
    constant_between = True
    for lo, hi in zip(events, events[1:]):
        inside = {seg.speed for seg in segs if _overlap(seg.start, seg.end, lo, hi) > 0}
        if len(inside) > 1:
            constant_between = False
            break

    dominated = True
    for job in jobs:
        own = speeds.get(job.id)
        if not own:
            continue
        own_speed = min(own)
        for seg in segs:
            if seg.job_id != job.id and _overlap(seg.start, seg.end, Fraction(job.r), Fraction(job.d)) > 0:
                if seg.speed < own_speed:
                    dominated = False
                    break
        if not dominated:
            break

    return PropertyReport(constant_job_speed, no_idle, constant_between, dominated)
