"""Knapsack to scheduling transformation.

Item i becomes a unit-work job whose window [sum of earlier capacities,
sum up to c_i] has length c_i and whose weight is v_i; the energy budget is
the knapsack capacity C.

Windows are disjoint, so chosen jobs never interact and each one costs the
least when it runs alone over its whole window: c_i * (1/c_i)**alpha =
c_i**(1 - alpha). The scheduling optimum is therefore the knapsack optimum
over those costs. It matches the knapsack over the capacities c_i exactly
when every capacity is 1.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .config import config
from .errors import BadSpec, InvalidInstance
from .model import Instance, Job

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KnapsackInstance:
    items: Tuple[Tuple[int, int], ...]
    capacity: int

    @classmethod
    def build(cls, items: Sequence[Tuple[int, int]], capacity: int) -> "KnapsackInstance":
        for pos, (value, size) in enumerate(items, start=1):
            for name, field in (("v", value), ("c", size)):
                if isinstance(field, bool) or not isinstance(field, int) or field <= 0:
                    raise InvalidInstance(f"item {pos}: {name} must be a positive integer, got {field!r}")
        if isinstance(capacity, bool) or not isinstance(capacity, int) or capacity < 0:
            raise InvalidInstance(f"C must be a nonnegative integer, got {capacity!r}")
        return cls(items=tuple((v, c) for v, c in items), capacity=capacity)


def knapsack_to_schedule(kp: KnapsackInstance, alpha: Optional[int] = None) -> Instance:
    alpha = alpha if alpha is not None else config.default_alpha()
    jobs: List[Job] = []
    start = 0
    for pos, (value, size) in enumerate(kp.items, start=1):
        jobs.append(Job(id=pos, r=start, d=start + size, p=1, w=value))
        start += size
    inst = Instance.build(jobs, alpha=alpha, budget=kp.capacity)
    logger.debug(f"Reduced knapsack with {len(kp.items)} items to an instance with L={inst.span}, E={kp.capacity}")
    return inst


def unit_job_costs(kp: KnapsackInstance, alpha: int) -> List[Fraction]:
    """Least energy of each reduced job: c**(1 - alpha)."""
    return [Fraction(1, size ** (alpha - 1)) for _, size in kp.items]


def reduction_knapsack(kp: KnapsackInstance, alpha: int) -> Tuple[List[Tuple[int, Fraction]], Fraction]:
    """The knapsack the reduced instance actually solves: values v_i, costs c_i**(1 - alpha), capacity C."""
    costs = unit_job_costs(kp, alpha)
    return [(value, cost) for (value, _), cost in zip(kp.items, costs)], Fraction(kp.capacity)


def generate_knapsack(items: int, max_value: int, max_capacity: int, seed: int) -> KnapsackInstance:
    if items < 0 or max_value < 1 or max_capacity < 1:
        raise BadSpec(f"bad knapsack spec: items={items}, max_value={max_value}, max_capacity={max_capacity}")
    rng = random.Random(seed)
    drawn = [(rng.randint(1, max_value), rng.randint(1, max_capacity)) for _ in range(items)]
    capacity = rng.randint(0, sum(c for _, c in drawn))
    return KnapsackInstance.build(drawn, capacity)
