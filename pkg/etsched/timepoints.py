"""Event-time sets indexing the dynamic programs.

  Omega     release dates and deadlines
  Phi       s + h*l/i  for integer s in [0, L], l <= L, i <= P, h <= i  (preemptive grid)
  Theta     a + h*(b-a)/i  for a < b in Omega, i <= n, h <= i        (non-preemptive grid)
  Gamma(s)  the next slot end a + (h+1)*(b-a)/i of each decomposition of s

Every point keeps one generator tuple that reproduces it exactly.
"""

import bisect
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Iterator, List, Optional, Tuple

from .config import config
from .errors import BudgetExceeded, PointNotInTheta
from .model import Instance

logger = logging.getLogger(__name__)

OMEGA = "omega"
PHI = "phi"
THETA = "theta"
GAMMA = "gamma"


@dataclass(frozen=True)
class TimePointSet:
    points: Tuple[Fraction, ...]
    kind: str
    provenance: Dict[Fraction, Tuple[int, ...]] = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.points)

    def __contains__(self, value) -> bool:
        pos = bisect.bisect_left(self.points, value)
        return pos < len(self.points) and self.points[pos] == value

    def index(self, value: Fraction) -> int:
        pos = bisect.bisect_left(self.points, value)
        if pos < len(self.points) and self.points[pos] == value:
            return pos
        raise ValueError(f"{value} is not in {self.kind}")

    def between(self, lo: Fraction, hi: Fraction) -> Tuple[Fraction, ...]:
        """Points p with lo <= p <= hi."""
        return self.points[bisect.bisect_left(self.points, lo):bisect.bisect_right(self.points, hi)]


def _from_generators(kind: str, generated: Dict[Fraction, Tuple[int, ...]]) -> TimePointSet:
    return TimePointSet(points=tuple(sorted(generated)), kind=kind, provenance=generated)


def build_omega(inst: Instance) -> TimePointSet:
    generated: Dict[Fraction, Tuple[int, ...]] = {}
    for job in inst.jobs:
        generated.setdefault(Fraction(job.r), (job.r,))
        generated.setdefault(Fraction(job.d), (job.d,))
    return _from_generators(OMEGA, generated)


def farey_size(P: int) -> int:
    """Number of fractions in [0, 1) whose reduced denominator is at most P."""
    count = 0
    for den in range(1, P + 1):
        count += sum(1 for num in range(den) if gcd(num, den) == 1)
    return count


def phi_size(L: int, P: int) -> int:
    if P == 0:
        return L + 1
    return L * farey_size(P) + 1


def build_phi(inst: Instance, cap: Optional[int] = None) -> TimePointSet:
    """All s + h*l/i <= L. The set equals the rationals of [0, L] whose reduced
    denominator is at most P, which is how it is enumerated: the point
    s + num/den comes from the generator (s, l=1, i=den, h=num)."""
    L, P = inst.span, inst.total_work
    cap = config.phi_cap() if cap is None else cap
    size = phi_size(L, P)
    if size > cap:
        raise BudgetExceeded(f"|Phi| would be {size} for L={L}, P={P}, above the cap of {cap}")

    generated: Dict[Fraction, Tuple[int, ...]] = {Fraction(L): (L, 1, 1, 0)}
    for s in range(L):
        for den in range(1, max(P, 1) + 1):
            for num in range(den):
                if gcd(num, den) == 1:
                    generated.setdefault(Fraction(s) + Fraction(num, den), (s, 1, den, num))
    logger.debug(f"Built Phi with {len(generated)} points for L={L}, P={P}")
    return _from_generators(PHI, generated)


def _theta_generators(inst: Instance, omega: TimePointSet) -> Iterator[Tuple[Fraction, Tuple[int, int, int, int]]]:
    anchors = [int(a) for a in omega]
    n = inst.n
    for ai, a in enumerate(anchors):
        for b in anchors[ai + 1:]:
            for i in range(1, n + 1):
                for h in range(i + 1):
                    yield Fraction(a) + Fraction(h * (b - a), i), (a, b, i, h)


def build_theta(inst: Instance, omega: Optional[TimePointSet] = None) -> TimePointSet:
    omega = omega or build_omega(inst)
    generated: Dict[Fraction, Tuple[int, ...]] = {}
    for point, gen in _theta_generators(inst, omega):
        generated.setdefault(point, gen)
    logger.debug(f"Built Theta with {len(generated)} points from |Omega|={len(omega)}, n={inst.n}")
    return _from_generators(THETA, generated)


def build_gamma(s: Fraction, inst: Instance, omega: Optional[TimePointSet] = None) -> TimePointSet:
    """Successors a + (h+1)(b-a)/i of every decomposition s = a + h(b-a)/i.

    Decompositions with h = i sit on the right end b; their successor would
    leave [a, b], so they contribute nothing.
    """
    s = Fraction(s)
    omega = omega or build_omega(inst)
    found = False
    generated: Dict[Fraction, Tuple[int, ...]] = {}
    for point, (a, b, i, h) in _theta_generators(inst, omega):
        if point != s:
            continue
        found = True
        if h < i:
            generated.setdefault(Fraction(a) + Fraction((h + 1) * (b - a), i), (a, b, i, h))
    if not found:
        raise PointNotInTheta(f"{s} has no decomposition a + h(b-a)/i over Omega")
    return _from_generators(GAMMA, generated)


def gamma_table(inst: Instance, omega: Optional[TimePointSet] = None) -> Dict[Fraction, Tuple[Fraction, ...]]:
    """Gamma(s) for every s in Theta, built in one pass over the generators."""
    omega = omega or build_omega(inst)
    table: Dict[Fraction, set] = {}
    for point, (a, b, i, h) in _theta_generators(inst, omega):
        successors = table.setdefault(point, set())
        if h < i:
            successors.add(Fraction(a) + Fraction((h + 1) * (b - a), i))
    return {point: tuple(sorted(successors)) for point, successors in table.items()}


def build_points(kind: str, inst: Instance, s: Optional[Fraction] = None) -> TimePointSet:
    if kind == OMEGA:
        return build_omega(inst)
    if kind == PHI:
        return build_phi(inst)
    if kind == THETA:
        return build_theta(inst)
    if kind == GAMMA:
        if s is None:
            raise PointNotInTheta("gamma needs a point s")
        return build_gamma(s, inst)
    raise ValueError(f"unknown time-point kind: {kind}")
