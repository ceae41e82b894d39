"""Pseudo-polynomial dynamic program for preemptive throughput maximization
under an energy budget, and its weighted variant.

G_k(s, t, u)
    minimum energy of a schedule of exactly u jobs (or weight u) chosen among
    J(k, s, t) = {j <= k : s <= r_j < t}, entirely inside [s, t].
F_{k-1}(x, y, u, l, i, a, h)
    minimum energy of u jobs of J(k-1, x, y) packed in [x, y] into blocks
    that start at release dates and last a' + h'*l/i each, a + h*l/i in total.

G_k either skips job k or runs it at speed i/l between its first start x and
last completion y, around the F blocks:

    G_{k-1}(s, x, u1) + F_{k-1}(x, y, u2, l, i, a, h) + p_k (i/l)^(alpha-1) + G_{k-1}(y, t, u3)
    with y - x = a + (p_k + h) * l / i and r_k <= x <= y <= d_k.

Times are handled internally as integer ticks of 1/lcm(1..P); every point of
Phi is a whole number of ticks. Memo tables are sparse dicts. ``None`` stands
for +infinity throughout.
"""

import bisect
import csv
import logging
from fractions import Fraction
from math import lcm
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import KeyOutOfRange
from .model import (
    PREEMPTIVE, Instance, Schedule, Segment, SolveResult, energy_of_schedule,
    format_rational, merge_adjacent,
)
from .timepoints import build_phi

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
SKIP = ("skip",)

MemoRow = Tuple[int, Fraction, Fraction, int, Optional[Fraction]]


class PreemptiveSolver:
    def __init__(self, inst: Instance, weighted: bool = False, phi_cap: Optional[int] = None):
        self.inst = inst
        self.weighted = weighted
        self.n = inst.n
        self.L = inst.span
        self.P = inst.total_work
        self.alpha = inst.alpha
        self.phi = build_phi(inst, cap=phi_cap)
        self.scale = lcm(*range(1, max(self.P, 1) + 1))

        self.phi_ticks: List[int] = [self._to_ticks(point) for point in self.phi]
        self.phi_tick_set = set(self.phi_ticks)
        # l/i only matters as a ratio, so equal ratios are enumerated once
        self.units: List[int] = sorted({l * self.scale // i
                                        for l in range(1, self.L + 1)
                                        for i in range(1, self.P + 1)})

        self.release = [job.r * self.scale for job in inst.jobs]
        self.deadline = [job.d * self.scale for job in inst.jobs]
        self.work = [job.p for job in inst.jobs]
        self.weight = [job.w if weighted else 1 for job in inst.jobs]
        self.capacity = sum(self.weight)

        self._g: Dict[Tuple[int, int, int, int], Tuple[Optional[Fraction], tuple]] = {}
        self._f: Dict[tuple, Tuple[Optional[Fraction], tuple]] = {}
        self._windows: Dict[Tuple[int, int, int], Optional[Tuple[int, int, int]]] = {}
        self._anchor_windows: Dict[Tuple[int, int, int], Optional[Tuple[int, Tuple[int, ...], int]]] = {}
        self._placements: Dict[Tuple[int, int, int], list] = {}

    # -- conversions ---------------------------------------------------------

    def _to_ticks(self, value: Fraction) -> int:
        scaled = Fraction(value) * self.scale
        if scaled.denominator != 1:
            raise KeyOutOfRange(f"{value} is not a point of Phi")
        return scaled.numerator

    def _time(self, ticks: int) -> Fraction:
        return Fraction(ticks, self.scale)

    def _phi_point(self, value: Fraction, name: str) -> int:
        if value not in self.phi:
            raise KeyOutOfRange(f"{name}={value} is not a point of Phi")
        return self._to_ticks(value)

    # -- job-set windows -----------------------------------------------------

    def _subset_sums(self, indices) -> int:
        mask = 1
        for j in indices:
            mask |= mask << self.weight[j]
        return mask

    def _window(self, k: int, s: int, t: int) -> Optional[Tuple[int, int, int]]:
        """Canonical (s, t) of J(k, s, t) plus the bitmask of its reachable weights.

        The set only depends on s through the earliest release it contains, and
        a t past every member deadline constrains nothing.
        """
        key = (k, s, t)
        if key not in self._windows:
            members = [j for j in range(k) if s <= self.release[j] < t]
            if not members:
                self._windows[key] = None
            else:
                s_star = min(self.release[j] for j in members)
                t_star = min(t, max(self.deadline[j] for j in members))
                self._windows[key] = (s_star, t_star, self._subset_sums(members))
        return self._windows[key]

    def _anchor_window(self, kk: int, x: int, y: int) -> Optional[Tuple[int, Tuple[int, ...], int]]:
        """Block anchors of F_kk in [x, y]: release dates of jobs 1..kk+1."""
        key = (kk, x, y)
        if key not in self._anchor_windows:
            anchors = tuple(sorted({self.release[j] for j in range(min(kk + 1, self.n))
                                    if x <= self.release[j] <= y}))
            if not anchors:
                self._anchor_windows[key] = None
            else:
                members = [j for j in range(kk) if anchors[0] <= self.release[j] < y]
                self._anchor_windows[key] = (anchors[0], anchors, self._subset_sums(members))
        return self._anchor_windows[key]

    def _job_placements(self, k: int, x: int, hi: int) -> list:
        """For each unit l/i: job k's energy and the (y, a, h) with y in Phi, y <= hi."""
        key = (k, x, hi)
        if key not in self._placements:
            p_k = self.work[k - 1]
            options = []
            for q in self.units:
                tight = x + p_k * q
                if tight > hi:
                    break
                entries = []
                for h in range(self.P + 1):
                    base = tight + h * q
                    if base > hi:
                        break
                    for a in range(self.L + 1):
                        y = base + a * self.scale
                        if y > hi:
                            break
                        if y in self.phi_tick_set:
                            entries.append((y, a, h))
                if entries:
                    entries.sort()
                    cost = p_k * Fraction(self.scale, q) ** (self.alpha - 1)
                    options.append((q, cost, entries))
            self._placements[key] = options
        return self._placements[key]

    # -- recurrences ---------------------------------------------------------

    def _g_eval(self, k: int, s: int, t: int, u: int) -> Optional[Fraction]:
        if u == 0:
            return ZERO
        if k == 0:
            return None
        window = self._window(k, s, t)
        if window is None:
            return None
        s, t, sums = window
        if not (sums >> u) & 1:
            return None
        key = (k, s, t, u)
        entry = self._g.get(key)
        if entry is not None:
            return entry[0]

        best = self._g_eval(k - 1, s, t, u)
        choice = SKIP
        idx = k - 1
        r_k, w_k = self.release[idx], self.weight[idx]
        if s <= r_k < t and w_k <= u:
            hi = min(t, self.deadline[idx])
            spare = u - w_k
            lo_pos = bisect.bisect_left(self.phi_ticks, r_k)
            hi_pos = bisect.bisect_left(self.phi_ticks, hi)
            for x in self.phi_ticks[lo_pos:hi_pos]:
                options = self._job_placements(k, x, hi)
                if not options:
                    continue
                for u1 in range(spare + 1):
                    g1 = self._g_eval(k - 1, s, x, u1)
                    if g1 is None or (best is not None and g1 >= best):
                        continue
                    rest = spare - u1
                    for q, cost, entries in options:
                        base = g1 + cost
                        if best is not None and base >= best:
                            continue
                        # nothing inside [x, y]: the earliest completion dominates
                        y, a, h = entries[0]
                        g3 = self._g_eval(k - 1, y, t, rest)
                        if g3 is not None and (best is None or base + g3 < best):
                            best = base + g3
                            choice = ("place", x, y, q, a, h, u1, 0)
                        for u2 in range(1, rest + 1):
                            for y, a, h in entries:
                                if a == 0 and h == 0:
                                    continue
                                f = self._f_eval(k - 1, x, y, u2, q, a, h)
                                if f is None or (best is not None and base + f >= best):
                                    continue
                                g3 = self._g_eval(k - 1, y, t, rest - u2)
                                if g3 is not None and (best is None or base + f + g3 < best):
                                    best = base + f + g3
                                    choice = ("place", x, y, q, a, h, u1, u2)
        self._g[key] = (best, choice)
        return best

    def _f_eval(self, kk: int, x: int, y: int, u: int, q: int, a: int, h: int) -> Optional[Fraction]:
        if u == 0:
            return ZERO
        if a == 0 and h == 0:
            return None
        window = self._anchor_window(kk, x, y)
        if window is None:
            return None
        x, anchors, sums = window
        if not (sums >> u) & 1:
            return None
        key = (kk, x, y, u, q, a, h)
        entry = self._f.get(key)
        if entry is not None:
            return entry[0]

        best: Optional[Fraction] = None
        choice: tuple = ()
        for x1 in anchors:
            for a1 in range(a + 1):
                if x1 + a1 * self.scale > y:
                    break
                for h1 in range(h + 1):
                    if a1 == 0 and h1 == 0:
                        continue
                    y1 = x1 + a1 * self.scale + h1 * q
                    if y1 > y:
                        break
                    if y1 not in self.phi_tick_set:
                        continue
                    for beta in range(1, u + 1):
                        gb = self._g_eval(kk, x1, y1, beta)
                        if gb is None or (best is not None and gb >= best):
                            continue
                        tail = self._f_eval(kk, y1, y, u - beta, q, a - a1, h - h1)
                        if tail is not None and (best is None or gb + tail < best):
                            best = gb + tail
                            choice = (x1, y1, beta, a1, h1)
        self._f[key] = (best, choice)
        return best

    # -- public accessors ----------------------------------------------------

    def g_value(self, k: int, s: Fraction, t: Fraction, u: int) -> Optional[Fraction]:
        """G_k(s, t, u); None means +infinity."""
        if not 0 <= k <= self.n:
            raise KeyOutOfRange(f"k={k} outside 0..{self.n}")
        if not 0 <= u <= self.capacity:
            raise KeyOutOfRange(f"u={u} outside 0..{self.capacity}")
        s_ticks, t_ticks = self._phi_point(s, "s"), self._phi_point(t, "t")
        if s_ticks > t_ticks:
            raise KeyOutOfRange(f"s={s} is after t={t}")
        return self._g_eval(k, s_ticks, t_ticks, u)

    def f_value(self, k: int, x: Fraction, y: Fraction, u: int, l: int, i: int, a: int, h: int) -> Optional[Fraction]:
        """F_k(x, y, u, l, i, a, h) over jobs 1..k with anchors among jobs 1..k+1."""
        if not 0 <= k <= self.n - 1:
            raise KeyOutOfRange(f"k={k} outside 0..{self.n - 1}")
        if not (1 <= l <= self.L and 1 <= i <= self.P and 0 <= a <= self.L and 0 <= h <= self.P):
            raise KeyOutOfRange(f"(l, i, a, h)=({l}, {i}, {a}, {h}) outside its ranges")
        if not 0 <= u <= self.capacity:
            raise KeyOutOfRange(f"u={u} outside 0..{self.capacity}")
        x_ticks, y_ticks = self._phi_point(x, "x"), self._phi_point(y, "y")
        if x_ticks > y_ticks:
            raise KeyOutOfRange(f"x={x} is after y={y}")
        return self._f_eval(k, x_ticks, y_ticks, u, l * self.scale // i, a, h)

    def memo_size(self) -> int:
        return len(self._g)

    def memo_items(self) -> Iterator[MemoRow]:
        for (k, s, t, u), (value, _) in list(self._g.items()):
            yield k, self._time(s), self._time(t), u, value

    def dump_table(self, path: str) -> int:
        """Write the G memo as CSV rows k,s,t,u,value; returns the row count."""
        rows = sorted(self.memo_items(), key=lambda row: row[:4])
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["k", "s", "t", "u", "value"])
            for k, s, t, u, value in rows:
                writer.writerow([k, format_rational(s), format_rational(t), u,
                                 "inf" if value is None else format_rational(value)])
        logger.info(f"Wrote {len(rows)} memo entries to {path}")
        return len(rows)

    # -- witness reconstruction ----------------------------------------------

    def _rebuild_g(self, k: int, s: int, t: int, u: int) -> List[Segment]:
        if u == 0:
            return []
        s, t, _ = self._window(k, s, t)
        _, choice = self._g[(k, s, t, u)]
        if choice == SKIP:
            return self._rebuild_g(k - 1, s, t, u)
        _, x, y, q, a, h, u1, u2 = choice
        u3 = u - self.weight[k - 1] - u1 - u2
        inner, blocks = self._rebuild_f(k - 1, x, y, u2, q, a, h)
        own = self._fill_gaps(k - 1, x, y, blocks, q)
        return self._rebuild_g(k - 1, s, x, u1) + inner + own + self._rebuild_g(k - 1, y, t, u3)

    def _rebuild_f(self, kk: int, x: int, y: int, u: int, q: int, a: int, h: int):
        if u == 0:
            return [], []
        x, _, _ = self._anchor_window(kk, x, y)
        _, (x1, y1, beta, a1, h1) = self._f[(kk, x, y, u, q, a, h)]
        block = self._rebuild_g(kk, x1, y1, beta)
        rest, blocks = self._rebuild_f(kk, y1, y, u - beta, q, a - a1, h - h1)
        return block + rest, [(x1, y1)] + blocks

    def _fill_gaps(self, idx: int, x: int, y: int, blocks: List[Tuple[int, int]], q: int) -> List[Segment]:
        """Run job idx at speed 1/q in the earliest time of [x, y] outside the blocks."""
        job_id = self.inst.jobs[idx].id
        speed = Fraction(self.scale, q)
        needed = self.work[idx] * q
        segments: List[Segment] = []
        now = x
        for start, end in sorted(blocks) + [(y, y)]:
            if needed == 0:
                break
            gap = min(start, y) - now
            if gap > 0:
                used = min(gap, needed)
                segments.append(Segment(job_id, self._time(now), self._time(now + used), speed))
                needed -= used
            now = max(now, end)
        if needed:
            raise RuntimeError(f"job {job_id} does not fit around its blocks in [{x}, {y}]")
        return segments

    # -- objective -----------------------------------------------------------

    def solve(self) -> SolveResult:
        budget = self.inst.budget
        top = self.inst.d_max * self.scale
        logger.info(f"Preemptive DP: n={self.n}, L={self.L}, P={self.P}, |Phi|={len(self.phi)}, "
                    f"units={len(self.units)}, weighted={self.weighted}, budget={budget}")

        objective, value = 0, ZERO
        if self.weighted:
            for u in range(self.capacity, 0, -1):
                g = self._g_eval(self.n, 0, top, u)
                if g is not None and g <= budget:
                    objective, value = u, g
                    break
        else:
            # G is nondecreasing in the job count
            for u in range(1, self.capacity + 1):
                g = self._g_eval(self.n, 0, top, u)
                if g is None or g > budget:
                    break
                objective, value = u, g

        segments = merge_adjacent(self._rebuild_g(self.n, 0, top, objective)) if objective else []
        schedule = Schedule.build(segments, {seg.job_id for seg in segments})
        energy = energy_of_schedule(schedule, self.alpha)
        if energy != value:
            raise RuntimeError(f"witness energy {energy} differs from the DP value {value}")
        logger.info(f"Preemptive DP done: objective={objective}, energy={energy}, memo={len(self._g)}")
        return SolveResult(objective=objective, energy=energy, schedule=schedule,
                           mode=PREEMPTIVE, weighted=self.weighted)


def solve_preemptive(inst: Instance, phi_cap: Optional[int] = None) -> SolveResult:
    return PreemptiveSolver(inst, weighted=False, phi_cap=phi_cap).solve()


def solve_preemptive_weighted(inst: Instance, phi_cap: Optional[int] = None) -> SolveResult:
    return PreemptiveSolver(inst, weighted=True, phi_cap=phi_cap).solve()
