"""Exhaustive solvers used as ground truth for the dynamic programs."""

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .config import config
from .errors import TooLarge
from .model import Instance, Job, Schedule, Segment, require_equal_work
from .timepoints import build_omega, build_theta
from .yds import min_energy_of_set, yds_min_energy

logger = logging.getLogger(__name__)

ZERO = Fraction(0)


@dataclass(frozen=True)
class OracleResult:
    objective: int
    best_subset: FrozenSet[int] = frozenset()
    energy: Fraction = ZERO
    schedule: Schedule = field(default_factory=Schedule)


def _rank(objective: int, energy: Fraction, ids: Tuple[int, ...]):
    """Sort key: larger objective, then smaller energy, then smaller id tuple."""
    return (-objective, energy, ids)


def _subset_energy(args: Tuple[Tuple[Job, ...], int]) -> Fraction:
    jobs, alpha = args
    return min_energy_of_set(jobs, alpha)


def _check_size(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise TooLarge(f"{what} oracle is limited to {cap} jobs, instance has {n}")


def oracle_preemptive(inst: Instance, weighted: bool = False, max_jobs: Optional[int] = None,
                      workers: int = 1) -> OracleResult:
    """Best subset over all subsets whose YDS energy fits the budget.

    Unweighted search walks subsets by size and stops at the first size with
    no feasible subset: a subset of a feasible set is feasible.
    """
    cap = max_jobs if max_jobs is not None else config.get_limits()["oracle_preemptive_max_jobs"]
    _check_size(inst.n, cap, "preemptive")
    jobs = sorted(inst.jobs, key=lambda j: j.id)
    logger.info(f"Preemptive oracle: n={inst.n}, weighted={weighted}, workers={workers}")

    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None

    def evaluate(subsets: List[Tuple[Job, ...]]) -> List[Fraction]:
        tasks = [(subset, inst.alpha) for subset in subsets]
        if pool is not None and len(tasks) > 1:
            return list(pool.map(_subset_energy, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
        return [_subset_energy(task) for task in tasks]

    best = (0, ZERO, ())
    sizes = range(1, inst.n + 1)
    try:
        if weighted:
            subsets = [combo for size in sizes for combo in itertools.combinations(jobs, size)]
            for subset, energy in zip(subsets, evaluate(subsets)):
                if energy <= inst.budget:
                    candidate = (sum(j.w for j in subset), energy, tuple(j.id for j in subset))
                    if _rank(*candidate) < _rank(*best):
                        best = candidate
        else:
            for size in sizes:
                subsets = list(itertools.combinations(jobs, size))
                feasible = [(energy, tuple(j.id for j in subset))
                            for subset, energy in zip(subsets, evaluate(subsets)) if energy <= inst.budget]
                if not feasible:
                    break
                energy, ids = min(feasible)
                best = (size, energy, ids)
    finally:
        if pool is not None:
            pool.shutdown()

    objective, energy, ids = best
    chosen = [inst.job(job_id) for job_id in ids]
    schedule = yds_min_energy(chosen, inst.alpha) if chosen else Schedule()
    logger.info(f"Preemptive oracle done: objective={objective}, subset={list(ids)}, energy={energy}")
    return OracleResult(objective, frozenset(ids), energy, schedule)


def theta_with_midpoints(inst: Instance) -> List[Fraction]:
    """Theta plus the midpoint of every pair of consecutive Theta points."""
    points = list(build_theta(inst))
    mids = [(a + b) / 2 for a, b in zip(points, points[1:])]
    return sorted(set(points) | set(mids))


def oracle_nonpreemptive(inst: Instance, weighted: bool = False, max_jobs: Optional[int] = None,
                         grid: Optional[Sequence[Fraction]] = None) -> OracleResult:
    """Best subset with one contiguous interval per job, endpoints on ``grid`` (Theta by default).

    best[i][mask] is the least energy to run the jobs of ``mask`` from grid
    point i on: either stay idle until the next point or start a released job
    right at point i. One table answers every subset at once.
    """
    cap = max_jobs if max_jobs is not None else config.get_limits()["oracle_nonpreemptive_max_jobs"]
    _check_size(inst.n, cap, "non-preemptive")
    require_equal_work(inst)
    points = sorted(set(grid)) if grid is not None else list(build_theta(inst))
    jobs = sorted(inst.jobs, key=lambda j: j.id)
    alpha = inst.alpha
    full = 1 << len(jobs)
    logger.info(f"Non-preemptive oracle: n={inst.n}, grid={len(points)} points, weighted={weighted}")

    best: List[List[Optional[Fraction]]] = [[None] * full for _ in points]
    choice: List[List[tuple]] = [[("idle",)] * full for _ in points]
    for i in range(len(points) - 1, -1, -1):
        now = points[i]
        best[i][0] = ZERO
        for mask in range(1, full):
            value = best[i + 1][mask] if i + 1 < len(points) else None
            picked: tuple = ("idle",)
            for j, job in enumerate(jobs):
                if not mask >> j & 1 or job.r > now:
                    continue
                rest_mask = mask & ~(1 << j)
                for e in range(i + 1, len(points)):
                    end = points[e]
                    if end > job.d:
                        break
                    rest = best[e][rest_mask]
                    if rest is None:
                        continue
                    total = rest + Fraction(job.p) ** alpha / (end - now) ** (alpha - 1)
                    if value is None or total < value:
                        value, picked = total, ("run", j, e)
            best[i][mask], choice[i][mask] = value, picked

    def rebuild(mask: int) -> List[Segment]:
        segments, i = [], 0
        while mask:
            if choice[i][mask][0] == "idle":
                i += 1
                continue
            _, j, e = choice[i][mask]
            job = jobs[j]
            segments.append(Segment(job.id, points[i], points[e], job.p / (points[e] - points[i])))
            mask &= ~(1 << j)
            i = e
        return segments

    chosen_mask, top = 0, (0, ZERO, ())
    for mask in range(1, full):
        energy = best[0][mask] if points else None
        if energy is None or energy > inst.budget:
            continue
        members = [job for j, job in enumerate(jobs) if mask >> j & 1]
        objective = sum(job.w for job in members) if weighted else len(members)
        candidate = (objective, energy, tuple(job.id for job in members))
        if _rank(*candidate) < _rank(*top):
            chosen_mask, top = mask, candidate

    objective, energy, ids = top
    segments = rebuild(chosen_mask) if chosen_mask else []
    logger.info(f"Non-preemptive oracle done: objective={objective}, subset={list(ids)}, energy={energy}")
    return OracleResult(objective, frozenset(ids), energy, Schedule.build(segments, ids))


def oracle_knapsack(items: Sequence[Tuple[int, Fraction]], capacity, max_items: Optional[int] = None) -> int:
    """Largest total value of a subset of (value, capacity) items fitting in ``capacity``."""
    cap = max_items if max_items is not None else config.get_limits()["knapsack_max_items"]
    if len(items) > cap:
        raise TooLarge(f"knapsack oracle is limited to {cap} items, got {len(items)}")
    limit = Fraction(capacity)
    best = 0
    for size in range(1, len(items) + 1):
        for combo in itertools.combinations(items, size):
            if sum((Fraction(c) for _, c in combo), ZERO) <= limit:
                best = max(best, sum(v for v, _ in combo))
    return best


def _compositions(total: int, parts: int) -> Iterable[Tuple[int, ...]]:
    """All ways to write ``total`` as an ordered sum of ``parts`` nonnegative ints."""
    if parts == 1:
        yield (total,)
        return
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        previous, sizes = -1, []
        for bar in bars:
            sizes.append(bar - previous - 1)
            previous = bar
        sizes.append(total + parts - 2 - previous)
        yield tuple(sizes)


def grid_min_energy(jobs: Iterable[Job], alpha: int) -> Fraction:
    """Minimum energy over all work splits on the elementary intervals between event points.

    Work is split in units of 1/lcm(1..L). A split is realizable when every
    group of jobs fits in the intervals its windows cover; inside an interval
    the work runs at one constant speed.
    """
    jobs = list(jobs)
    if not jobs:
        return ZERO
    inst = Instance.build(jobs, alpha=alpha)
    anchors = list(build_omega(inst))
    intervals = [(a, b) for a, b in zip(anchors, anchors[1:])
                 if any(j.r <= a and b <= j.d for j in inst.jobs)]
    unit = lcm(*range(1, inst.span + 1))
    covers: Dict[int, int] = {
        pos: sum(1 << x for x, (a, b) in enumerate(intervals) if job.r <= a and b <= job.d)
        for pos, job in enumerate(inst.jobs)
    }
    groups = []
    for size in range(1, inst.n + 1):
        for combo in itertools.combinations(range(inst.n), size):
            reach = 0
            for pos in combo:
                reach |= covers[pos]
            groups.append((sum(inst.jobs[pos].p for pos in combo) * unit, reach))

    best: Optional[Fraction] = None
    for split in _compositions(inst.total_work * unit, len(intervals)):
        if any(sum(split[x] for x in range(len(intervals)) if reach >> x & 1) < need
               for need, reach in groups):
            continue
        energy = sum((Fraction(w, unit) ** alpha / Fraction(b - a) ** (alpha - 1)
                      for w, (a, b) in zip(split, intervals) if w), ZERO)
        if best is None or energy < best:
            best = energy
    return best
