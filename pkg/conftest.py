import random
from fractions import Fraction
from typing import List, Sequence, Tuple

import pytest

from etsched.model import Instance, Job


def make_instance(*jobs: Tuple[int, ...], alpha: int = 3, budget=0) -> Instance:
    """Instance from (r, d, p) or (r, d, p, w) tuples; ids are 1, 2, ..."""
    built = [Job(id=pos, r=spec[0], d=spec[1], p=spec[2], w=spec[3] if len(spec) > 3 else 1)
             for pos, spec in enumerate(jobs, start=1)]
    return Instance.build(built, alpha=alpha, budget=Fraction(budget))


def random_jobs(rng: random.Random, n: int, max_time: int, max_work: int,
                max_weight: int = 1, equal_work: bool = False) -> List[Job]:
    shared = rng.randint(1, max_work)
    jobs = []
    for job_id in range(1, n + 1):
        r = rng.randint(0, max_time - 1)
        d = rng.randint(r + 1, max_time)
        p = shared if equal_work else rng.randint(1, max_work)
        jobs.append(Job(id=job_id, r=r, d=d, p=p, w=rng.randint(1, max_weight)))
    return jobs


def random_instances(count: int, seed: int, max_n: int, max_time: int, max_work: int,
                     max_weight: int = 1, equal_work: bool = False) -> List[Instance]:
    rng = random.Random(seed)
    return [Instance.build(random_jobs(rng, rng.randint(1, max_n), max_time, max_work, max_weight, equal_work))
            for _ in range(count)]


def sweep_budgets(energies: Sequence[Fraction]) -> List[Fraction]:
    """Zero, every given energy, and a little on either side of each."""
    budgets = {Fraction(0)}
    for energy in energies:
        budgets.update({energy, energy - Fraction(1, 100), energy + Fraction(1, 100)})
    return sorted(b for b in budgets if b >= 0)


@pytest.fixture
def two_unit_jobs() -> Instance:
    """J1 and J2 both (r=0, d=2, p=1)."""
    return make_instance((0, 2, 1), (0, 2, 1))


@pytest.fixture
def nested_jobs() -> Instance:
    """J1 (0, 4, 2) around J2 (1, 2, 2)."""
    return make_instance((0, 4, 2), (1, 2, 2))
