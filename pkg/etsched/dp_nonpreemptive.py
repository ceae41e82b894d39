"""Dynamic program for non-preemptive throughput maximization when every job
has the same work p.

E_k(s, x, t, u) is the minimum energy of a non-preemptive schedule of exactly
u jobs (or weight u) of J(k, s, t) inside [s, t] that keeps [s, x] idle.
Job k either is skipped or runs alone on [s', x'] at speed p / (x' - s'):

    E_{k-1}(s, x, s', l) + E_{k-1}(s', x', t, u - w_k - l) + p^alpha / (x' - s')^(alpha-1)

with s' in Theta, x' in Gamma(s') (or all of Theta when ``wide_x`` is set),
max(x, r_k) <= s' < x' <= min(t, d_k).

Time points are integer ticks of 1/lcm(1..n).
"""

import bisect
import csv
import logging
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Tuple

from .errors import KeyOutOfRange
from .model import (
    NONPREEMPTIVE, Instance, Schedule, Segment, SolveResult, energy_of_schedule,
    format_rational, require_equal_work,
)
from .timepoints import build_omega, build_theta, gamma_table

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
SKIP = ("skip",)


class NonPreemptiveSolver:
    def __init__(self, inst: Instance, weighted: bool = False, wide_x: bool = False):
        self.work_per_job = require_equal_work(inst)
        self.inst = inst
        self.weighted = weighted
        self.wide_x = wide_x
        self.n = inst.n
        self.alpha = inst.alpha
        self.scale = lcm(*range(1, max(self.n, 1) + 1))

        omega = build_omega(inst)
        self.theta = build_theta(inst, omega)
        self.theta_ticks: List[int] = [self._to_ticks(point) for point in self.theta]
        gamma = gamma_table(inst, omega)
        self.successors: Dict[int, Tuple[int, ...]] = {
            self._to_ticks(point): tuple(self._to_ticks(nxt) for nxt in succ)
            for point, succ in gamma.items()
        }

        self.release = [job.r * self.scale for job in inst.jobs]
        self.deadline = [job.d * self.scale for job in inst.jobs]
        self.weight = [job.w if weighted else 1 for job in inst.jobs]
        self.capacity = sum(self.weight)

        self._e: Dict[Tuple[int, int, int, int, int], Tuple[Optional[Fraction], tuple]] = {}
        self._windows: Dict[Tuple[int, int, int], Optional[Tuple[int, int, int]]] = {}
        self._costs: Dict[int, Fraction] = {}

    def _to_ticks(self, value: Fraction) -> int:
        scaled = Fraction(value) * self.scale
        if scaled.denominator != 1:
            raise KeyOutOfRange(f"{value} is not a point of Theta")
        return scaled.numerator

    def _time(self, ticks: int) -> Fraction:
        return Fraction(ticks, self.scale)

    def _window(self, k: int, s: int, t: int) -> Optional[Tuple[int, int, int]]:
        key = (k, s, t)
        if key not in self._windows:
            members = [j for j in range(k) if s <= self.release[j] < t]
            if not members:
                self._windows[key] = None
            else:
                mask = 1
                for j in members:
                    mask |= mask << self.weight[j]
                self._windows[key] = (min(self.release[j] for j in members),
                                      min(t, max(self.deadline[j] for j in members)),
                                      mask)
        return self._windows[key]

    def _cost(self, length: int) -> Fraction:
        """Energy of one job run alone on an interval of ``length`` ticks."""
        if length not in self._costs:
            self._costs[length] = (Fraction(self.work_per_job) ** self.alpha
                                   * Fraction(self.scale, length) ** (self.alpha - 1))
        return self._costs[length]

    def _ends(self, start: int, hi: int) -> List[int]:
        if self.wide_x:
            lo_pos = bisect.bisect_right(self.theta_ticks, start)
            hi_pos = bisect.bisect_right(self.theta_ticks, hi)
            return self.theta_ticks[lo_pos:hi_pos]
        return [end for end in self.successors.get(start, ()) if start < end <= hi]

    def _e_eval(self, k: int, s: int, x: int, t: int, u: int) -> Optional[Fraction]:
        if u == 0:
            return ZERO
        if k == 0:
            return None
        window = self._window(k, s, t)
        if window is None:
            return None
        s, t, sums = window
        x = max(x, s)
        if x >= t or not (sums >> u) & 1:
            return None
        key = (k, s, x, t, u)
        entry = self._e.get(key)
        if entry is not None:
            return entry[0]

        best = self._e_eval(k - 1, s, x, t, u)
        choice = SKIP
        idx = k - 1
        r_k, w_k = self.release[idx], self.weight[idx]
        if s <= r_k < t and w_k <= u:
            hi = min(t, self.deadline[idx])
            spare = u - w_k
            lo_pos = bisect.bisect_left(self.theta_ticks, max(x, r_k))
            hi_pos = bisect.bisect_left(self.theta_ticks, hi)
            for start in self.theta_ticks[lo_pos:hi_pos]:
                ends = self._ends(start, hi)
                if not ends:
                    continue
                for left in range(spare + 1):
                    before = self._e_eval(k - 1, s, x, start, left)
                    if before is None or (best is not None and before >= best):
                        continue
                    for end in ends:
                        base = before + self._cost(end - start)
                        if best is not None and base >= best:
                            continue
                        after = self._e_eval(k - 1, start, end, t, spare - left)
                        if after is not None and (best is None or base + after < best):
                            best = base + after
                            choice = ("place", start, end, left)
        self._e[key] = (best, choice)
        return best

    def e_value(self, k: int, s: Fraction, x: Fraction, t: Fraction, u: int) -> Optional[Fraction]:
        """E_k(s, x, t, u); None means +infinity."""
        if not 0 <= k <= self.n:
            raise KeyOutOfRange(f"k={k} outside 0..{self.n}")
        if not 0 <= u <= self.capacity:
            raise KeyOutOfRange(f"u={u} outside 0..{self.capacity}")
        for name, value in (("s", s), ("t", t)):
            if value not in self.theta:
                raise KeyOutOfRange(f"{name}={value} is not a point of Theta")
        s_ticks, x_ticks, t_ticks = self._to_ticks(s), self._to_ticks(x), self._to_ticks(t)
        if x_ticks != s_ticks and x_ticks not in self.successors.get(s_ticks, ()):
            raise KeyOutOfRange(f"x={x} is neither s nor in Gamma({s})")
        if not s_ticks <= x_ticks <= t_ticks:
            raise KeyOutOfRange(f"need s <= x <= t, got {s}, {x}, {t}")
        return self._e_eval(k, s_ticks, x_ticks, t_ticks, u)

    def memo_size(self) -> int:
        return len(self._e)

    def memo_items(self):
        for (k, s, x, t, u), (value, _) in list(self._e.items()):
            yield k, self._time(s), self._time(x), self._time(t), u, value

    def dump_table(self, path: str) -> int:
        """Write the E memo as CSV rows k,s,x,t,u,value; returns the row count."""
        rows = sorted(self.memo_items(), key=lambda row: row[:5])
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["k", "s", "x", "t", "u", "value"])
            for k, s, x, t, u, value in rows:
                writer.writerow([k, format_rational(s), format_rational(x), format_rational(t), u,
                                 "inf" if value is None else format_rational(value)])
        logger.info(f"Wrote {len(rows)} memo entries to {path}")
        return len(rows)

    def _rebuild(self, k: int, s: int, x: int, t: int, u: int) -> List[Segment]:
        if u == 0:
            return []
        s, t, _ = self._window(k, s, t)
        x = max(x, s)
        _, choice = self._e[(k, s, x, t, u)]
        if choice == SKIP:
            return self._rebuild(k - 1, s, x, t, u)
        _, start, end, left = choice
        job = self.inst.jobs[k - 1]
        own = Segment(job.id, self._time(start), self._time(end),
                      Fraction(job.p * self.scale, end - start))
        right = u - self.weight[k - 1] - left
        return self._rebuild(k - 1, s, x, start, left) + [own] + self._rebuild(k - 1, start, end, t, right)

    def solve(self) -> SolveResult:
        budget = self.inst.budget
        top = self.inst.d_max * self.scale
        logger.info(f"Non-preemptive DP: n={self.n}, p={self.work_per_job}, |Theta|={len(self.theta)}, "
                    f"weighted={self.weighted}, wide_x={self.wide_x}, budget={budget}")

        objective, value = 0, ZERO
        if self.weighted:
            for u in range(self.capacity, 0, -1):
                e = self._e_eval(self.n, 0, 0, top, u)
                if e is not None and e <= budget:
                    objective, value = u, e
                    break
        else:
            for u in range(1, self.capacity + 1):
                e = self._e_eval(self.n, 0, 0, top, u)
                if e is None or e > budget:
                    break
                objective, value = u, e

        segments = self._rebuild(self.n, 0, 0, top, objective) if objective else []
        schedule = Schedule.build(segments, {seg.job_id for seg in segments})
        energy = energy_of_schedule(schedule, self.alpha)
        if energy != value:
            raise RuntimeError(f"witness energy {energy} differs from the DP value {value}")
        logger.info(f"Non-preemptive DP done: objective={objective}, energy={energy}, memo={len(self._e)}")
        return SolveResult(objective=objective, energy=energy, schedule=schedule,
                           mode=NONPREEMPTIVE, weighted=self.weighted)


def solve_nonpreemptive(inst: Instance, wide_x: bool = False) -> SolveResult:
    return NonPreemptiveSolver(inst, weighted=False, wide_x=wide_x).solve()


def solve_nonpreemptive_weighted(inst: Instance, wide_x: bool = False) -> SolveResult:
    return NonPreemptiveSolver(inst, weighted=True, wide_x=wide_x).solve()
