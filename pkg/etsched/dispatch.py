"""Mode dispatch shared by the command line and the HTTP routes."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .dp_nonpreemptive import NonPreemptiveSolver
from .dp_preemptive import PreemptiveSolver
from .errors import BadSpec
from .model import (
    MINENERGY, NONPREEMPTIVE, PREEMPTIVE, Instance, SolveResult, energy_of_schedule,
)
from .oracle import OracleResult, oracle_nonpreemptive, oracle_preemptive
from .yds import yds_min_energy

logger = logging.getLogger(__name__)


def make_solver(inst: Instance, mode: str, weighted: bool = False, wide_x: bool = False,
                phi_cap: Optional[int] = None):
    if mode == PREEMPTIVE:
        return PreemptiveSolver(inst, weighted=weighted, phi_cap=phi_cap)
    if mode == NONPREEMPTIVE:
        return NonPreemptiveSolver(inst, weighted=weighted, wide_x=wide_x)
    raise BadSpec(f"mode {mode!r} has no dynamic program")


def solve_instance(inst: Instance, mode: str, weighted: bool = False, wide_x: bool = False,
                   phi_cap: Optional[int] = None) -> SolveResult:
    if mode == MINENERGY:
        schedule = yds_min_energy(inst.jobs, inst.alpha)
        return SolveResult(objective=inst.total_weight if weighted else inst.n,
                           energy=energy_of_schedule(schedule, inst.alpha),
                           schedule=schedule, mode=MINENERGY, weighted=weighted)
    return make_solver(inst, mode, weighted, wide_x, phi_cap).solve()


def run_oracle(inst: Instance, mode: str, weighted: bool = False, workers: int = 1) -> OracleResult:
    if mode == PREEMPTIVE:
        return oracle_preemptive(inst, weighted=weighted, workers=workers)
    if mode == NONPREEMPTIVE:
        return oracle_nonpreemptive(inst, weighted=weighted)
    raise BadSpec(f"no oracle for mode {mode!r}")


def budget_sweep(inst: Instance, budgets: Sequence[Fraction], mode: str = PREEMPTIVE,
                 weighted: bool = False) -> List[Tuple[Fraction, int, Fraction]]:
    """(budget, objective, energy) per budget; one solver and its memo serve the whole sweep."""
    solver = make_solver(inst, mode, weighted) if mode != MINENERGY else None
    rows = []
    for budget in budgets:
        current = inst.with_budget(budget)
        if solver is None:
            result = solve_instance(current, mode, weighted)
        else:
            solver.inst = current
            result = solver.solve()
        rows.append((current.budget, result.objective, result.energy))
    return rows


@dataclass(frozen=True)
class ComparisonRow:
    solver: str
    objective: Optional[int]
    energy: Optional[Fraction]
    note: str = ""


def compare(inst: Instance, weighted: bool = False, workers: int = 1) -> Tuple[List[ComparisonRow], List[str]]:
    """Run both DPs and both oracles; return the table and every disagreement found."""
    rows: List[ComparisonRow] = []
    problems: List[str] = []

    p_dp = solve_instance(inst, PREEMPTIVE, weighted)
    p_or = run_oracle(inst, PREEMPTIVE, weighted, workers)
    rows.append(ComparisonRow("preemptive-dp", p_dp.objective, p_dp.energy))
    rows.append(ComparisonRow("preemptive-oracle", p_or.objective, p_or.energy))
    if p_dp.objective != p_or.objective:
        problems.append(f"preemptive DP {p_dp.objective} != oracle {p_or.objective}")

    if inst.is_equal_work():
        np_dp = solve_instance(inst, NONPREEMPTIVE, weighted)
        np_or = run_oracle(inst, NONPREEMPTIVE, weighted)
        rows.append(ComparisonRow("nonpreemptive-dp", np_dp.objective, np_dp.energy))
        rows.append(ComparisonRow("nonpreemptive-oracle", np_or.objective, np_or.energy))
        if np_dp.objective != np_or.objective:
            problems.append(f"non-preemptive DP {np_dp.objective} != oracle {np_or.objective}")
        if np_dp.objective > p_dp.objective:
            problems.append(f"non-preemptive {np_dp.objective} beats preemptive {p_dp.objective}")
    else:
        rows.append(ComparisonRow("nonpreemptive-dp", None, None, "unequal work"))
        rows.append(ComparisonRow("nonpreemptive-oracle", None, None, "unequal work"))

    for problem in problems:
        logger.warning(f"Disagreement: {problem}")
    return rows, problems
