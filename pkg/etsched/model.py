"""Domain types, exact-arithmetic conventions, energy evaluation and schedule
validation shared by every solver.

All times, speeds and energies are ``fractions.Fraction`` values. Release
dates, deadlines, works and weights are integers. Processor power is
``speed ** alpha`` with an integer ``alpha >= 2``, so every energy stays
rational and every comparison is exact.
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from collections import Counter
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .errors import (
    AlphaTooSmall, DeadlineBeforeRelease, DuplicateJobId, EmptyJobSet,
    InvalidInstance, NonIntegerField, NonPositiveField, NotEqualWork, ParseError,
)

logger = logging.getLogger(__name__)

Rat = Fraction

PREEMPTIVE = "preemptive"
NONPREEMPTIVE = "nonpreemptive"
MINENERGY = "minenergy"
MODES = (PREEMPTIVE, NONPREEMPTIVE, MINENERGY)


def parse_rational(value: Any) -> Fraction:
    """Parse an int, a Fraction or a "num/den" string. Floats are rejected."""
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            numerator = int(num)
            denominator = int(den) if sep else 1
        except ValueError:
            raise ParseError(f"not a rational: {value!r}")
        if denominator == 0:
            raise ParseError(f"zero denominator in {value!r}")
        return Fraction(numerator, denominator)
    raise ParseError(f"not a rational: {value!r}")


def format_rational(value: Fraction) -> Any:
    """Lowest-terms wire form: a bare int or a "num/den" string."""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Job:
    id: int
    r: int
    d: int
    p: int
    w: int = 1

    def shifted(self, offset: int) -> "Job":
        return replace(self, r=self.r - offset, d=self.d - offset)


def edf_key(job: Job) -> Tuple[int, int]:
    """Earliest deadline first, ties by ascending id."""
    return (job.d, job.id)


@dataclass(frozen=True)
class Instance:
    """A normalized instance: earliest release at 0, jobs in EDF order."""
    jobs: Tuple[Job, ...]
    alpha: int = 3
    budget: Fraction = Fraction(0)
    origin: int = 0  # r_min of the raw input, subtracted from every time

    @classmethod
    def build(cls, jobs: Iterable[Job], alpha: int = 3, budget: Any = 0) -> "Instance":
        jobs = list(jobs)
        origin = min((j.r for j in jobs), default=0)
        ordered = tuple(sorted((j.shifted(origin) for j in jobs), key=edf_key))
        return cls(jobs=ordered, alpha=alpha, budget=Fraction(budget), origin=origin)

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def span(self) -> int:
        """L = d_max - r_min."""
        if not self.jobs:
            return 0
        return max(j.d for j in self.jobs) - min(j.r for j in self.jobs)

    @property
    def total_work(self) -> int:
        return sum(j.p for j in self.jobs)

    @property
    def total_weight(self) -> int:
        return sum(j.w for j in self.jobs)

    @property
    def d_max(self) -> int:
        return max((j.d for j in self.jobs), default=0)

    @property
    def job_ids(self) -> Tuple[int, ...]:
        return tuple(j.id for j in self.jobs)

    def job(self, job_id: int) -> Job:
        for j in self.jobs:
            if j.id == job_id:
                return j
        raise KeyError(job_id)

    def is_equal_work(self) -> bool:
        return len({j.p for j in self.jobs}) <= 1

    def with_budget(self, budget: Any) -> "Instance":
        return replace(self, budget=Fraction(budget))

    def with_unit_weights(self) -> "Instance":
        return replace(self, jobs=tuple(replace(j, w=1) for j in self.jobs))


@dataclass(frozen=True)
class Segment:
    job_id: int
    start: Fraction
    end: Fraction
    speed: Fraction

    @property
    def duration(self) -> Fraction:
        return self.end - self.start

    @property
    def work(self) -> Fraction:
        return (self.end - self.start) * self.speed


@dataclass(frozen=True)
class Schedule:
    segments: Tuple[Segment, ...] = ()
    completed: FrozenSet[int] = frozenset()

    @classmethod
    def build(cls, segments: Iterable[Segment], completed: Iterable[int]) -> "Schedule":
        ordered = tuple(sorted(segments, key=lambda seg: (seg.start, seg.end, seg.job_id)))
        return cls(segments=ordered, completed=frozenset(completed))

    def segments_of(self, job_id: int) -> List[Segment]:
        return [seg for seg in self.segments if seg.job_id == job_id]

    def work_of(self, job_id: int) -> Fraction:
        return sum((seg.work for seg in self.segments_of(job_id)), Fraction(0))


def merge_adjacent(segments: Iterable[Segment]) -> List[Segment]:
    """Fuse back-to-back pieces of the same job running at the same speed."""
    merged: List[Segment] = []
    for seg in sorted(segments, key=lambda s: (s.start, s.end, s.job_id)):
        if merged:
            last = merged[-1]
            if last.job_id == seg.job_id and last.end == seg.start and last.speed == seg.speed:
                merged[-1] = Segment(last.job_id, last.start, seg.end, last.speed)
                continue
        merged.append(seg)
    return merged


@dataclass(frozen=True)
class SolveResult:
    objective: int
    energy: Fraction
    schedule: Schedule
    mode: str = PREEMPTIVE
    weighted: bool = False


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    job_id: Optional[int] = None


@dataclass
class ValidationReport:
    energy: Fraction
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> List[str]:
        return [v.kind for v in self.violations]

    def add(self, kind: str, message: str, job_id: Optional[int] = None) -> None:
        self.violations.append(Violation(kind, message, job_id))


def _require_int(value: Any, name: str, job_id: Any = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        where = f" of job {job_id}" if job_id is not None else ""
        raise NonIntegerField(f"field '{name}'{where} must be an integer, got {value!r}")
    return value


def validate_instance(raw: Mapping[str, Any], default_alpha: int = 3) -> Instance:
    """Check a raw instance document and return it normalized.

    Release dates and deadlines are shifted so the earliest release is 0 and
    jobs are sorted by deadline, ties by id.
    """
    raw_jobs = raw.get("jobs") or []
    if not raw_jobs:
        raise EmptyJobSet("instance has no jobs")

    alpha = raw.get("alpha")
    alpha = default_alpha if alpha is None else _require_int(alpha, "alpha")
    if alpha < 2:
        raise AlphaTooSmall(f"alpha must be an integer >= 2, got {alpha}")

    try:
        budget = parse_rational(raw.get("budget", 0))
    except ParseError as e:
        raise NonIntegerField(f"budget: {e.message}")
    if budget < 0:
        raise InvalidInstance(f"budget must be nonnegative, got {budget}")

    jobs: List[Job] = []
    seen: Dict[int, Mapping[str, Any]] = {}
    for entry in raw_jobs:
        job_id = _require_int(entry.get("id"), "id")
        if job_id in seen:
            raise DuplicateJobId(f"job id {job_id} appears twice")
        seen[job_id] = entry
        r = _require_int(entry.get("r"), "r", job_id)
        d = _require_int(entry.get("d"), "d", job_id)
        p = _require_int(entry.get("p"), "p", job_id)
        w = _require_int(entry.get("w", 1), "w", job_id)
        if d <= r:
            raise DeadlineBeforeRelease(f"job {job_id}: deadline {d} is not after release {r}")
        if p <= 0:
            raise NonPositiveField(f"job {job_id}: work must be positive, got {p}")
        if w <= 0:
            raise NonPositiveField(f"job {job_id}: weight must be positive, got {w}")
        jobs.append(Job(id=job_id, r=r, d=d, p=p, w=w))

    inst = Instance.build(jobs, alpha=alpha, budget=budget)
    logger.debug(f"Validated instance: n={inst.n}, L={inst.span}, P={inst.total_work}, "
                 f"alpha={alpha}, budget={budget}, shifted by {inst.origin}")
    return inst


def require_equal_work(inst: Instance) -> int:
    """Return the work shared by every job of ``inst`` or raise NotEqualWork naming the outliers."""
    if inst.n == 0:
        return 1
    counts = Counter(job.p for job in inst.jobs)
    work, _ = max(counts.items(), key=lambda item: (item[1], -item[0]))
    if len(counts) > 1:
        raise NotEqualWork([job.id for job in inst.jobs if job.p != work], work)
    return work


def energy_of_schedule(schedule: Schedule, alpha: int) -> Fraction:
    """Sum of duration * speed**alpha over all segments."""
    return sum((seg.duration * seg.speed ** alpha for seg in schedule.segments), Fraction(0))


def validate_schedule(inst: Instance, schedule: Schedule, mode: str = PREEMPTIVE) -> ValidationReport:
    """Report every feasibility violation of ``schedule`` for ``inst``."""
    report = ValidationReport(energy=energy_of_schedule(schedule, inst.alpha))
    by_id = {j.id: j for j in inst.jobs}

    for seg in schedule.segments:
        if seg.start >= seg.end:
            report.add("bad_segment", f"segment [{seg.start}, {seg.end}] of job {seg.job_id} is empty", seg.job_id)
        if seg.speed <= 0:
            report.add("bad_segment", f"segment of job {seg.job_id} has speed {seg.speed}", seg.job_id)
        job = by_id.get(seg.job_id)
        if job is None:
            report.add("unknown_job", f"segment refers to unknown job {seg.job_id}", seg.job_id)
        elif seg.start < job.r or seg.end > job.d:
            report.add("window", f"job {job.id} runs in [{seg.start}, {seg.end}] outside [{job.r}, {job.d}]", job.id)

    ordered = sorted(schedule.segments, key=lambda s: (s.start, s.end))
    for before, after in zip(ordered, ordered[1:]):
        if after.start < before.end:
            report.add("overlap", f"job {before.job_id} [{before.start}, {before.end}] overlaps "
                                  f"job {after.job_id} [{after.start}, {after.end}]", after.job_id)

    for job_id in sorted(schedule.completed):
        job = by_id.get(job_id)
        if job is None:
            report.add("unknown_job", f"completed set names unknown job {job_id}", job_id)
            continue
        work = schedule.work_of(job_id)
        if work != job.p:
            report.add("work_mismatch", f"job {job_id} receives work {work}, needs {job.p}", job_id)

    if mode == NONPREEMPTIVE:
        for job_id in sorted({seg.job_id for seg in schedule.segments}):
            count = len(schedule.segments_of(job_id))
            if count > 1:
                report.add("preemption", f"job {job_id} runs in {count} pieces", job_id)

    if report.energy > inst.budget:
        report.add("energy_budget", f"energy exceeds budget: {report.energy} > {inst.budget}")
    return report
