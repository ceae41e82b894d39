from fastapi import APIRouter, HTTPException
from typing import List, Optional
from pydantic import BaseModel
import logging

from . import __version__
from .dispatch import run_oracle, solve_instance
from .errors import EmptyJobSet, EtschedError
from .model import MODES, PREEMPTIVE, parse_rational, validate_schedule
from .reductions import knapsack_to_schedule
from .schemas import (
    InstanceModel, KnapsackModel, OracleResultModel, RationalValue, ScheduleModel, SolveResultModel,
    ValidationReportModel, instance_to_document, load_instance_document, load_knapsack_document,
    load_schedule_document, oracle_result_to_document, rationals_to_document, report_to_document,
    result_to_document,
)
from .timepoints import build_points

logger = logging.getLogger(__name__)

router = APIRouter()


class CheckRequest(BaseModel):
    instance: InstanceModel
    schedule: ScheduleModel


def _http_error(e: EtschedError) -> HTTPException:
    logger.info(f"Request rejected: {type(e).__name__}: {e.message}")
    return HTTPException(status_code=e.http_status, detail=e.message)


def _instance(body: InstanceModel):
    return load_instance_document(body.model_dump(exclude_none=True))


def _check_mode(mode: str, allowed=MODES) -> None:
    if mode not in allowed:
        raise HTTPException(status_code=400, detail=f"mode must be one of {', '.join(allowed)}")


@router.get("/api/health")
def health():
    return {"status": "ok", "version": __version__}


@router.post("/api/solve", response_model=SolveResultModel, response_model_exclude_none=True)
def solve(body: InstanceModel, mode: str = PREEMPTIVE, weighted: bool = False, wide_x: bool = False):
    """Solve with the dynamic program of ``mode`` (or YDS for minenergy)."""
    _check_mode(mode)
    try:
        inst = _instance(body)
        result = solve_instance(inst, mode, weighted, wide_x)
        return result_to_document(result, inst.alpha, inst.origin)
    except EtschedError as e:
        raise _http_error(e)


@router.post("/api/oracle", response_model=OracleResultModel, response_model_exclude_none=True)
def oracle(body: InstanceModel, mode: str = PREEMPTIVE, weighted: bool = False):
    _check_mode(mode, MODES[:2])
    try:
        inst = _instance(body)
        result = run_oracle(inst, mode, weighted)
        return oracle_result_to_document(result, mode, weighted, inst.alpha, inst.origin)
    except EtschedError as e:
        raise _http_error(e)


@router.post("/api/check", response_model=ValidationReportModel)
def check(body: CheckRequest, mode: str = PREEMPTIVE):
    """Validate a schedule; violations are part of the report, not errors."""
    _check_mode(mode, MODES[:2])
    try:
        inst = _instance(body.instance)
        schedule = load_schedule_document(body.schedule.model_dump(exclude_none=True), inst.origin)
        return report_to_document(validate_schedule(inst, schedule, mode))
    except EtschedError as e:
        raise _http_error(e)


@router.post("/api/points", response_model=List[RationalValue])
def points(body: InstanceModel, kind: str = "omega", s: Optional[str] = None):
    try:
        inst = _instance(body)
        point = parse_rational(s) - inst.origin if s is not None else None
        return rationals_to_document(p + inst.origin for p in build_points(kind, inst, point))
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except EtschedError as e:
        raise _http_error(e)


@router.post("/api/reduce-knapsack", response_model=InstanceModel, response_model_exclude_none=True)
def reduce_knapsack(body: KnapsackModel, alpha: Optional[int] = None):
    try:
        kp = load_knapsack_document(body.model_dump())
        if not kp.items:
            raise EmptyJobSet("knapsack has no items, the reduced instance would have no jobs")
        return instance_to_document(knapsack_to_schedule(kp, alpha))
    except EtschedError as e:
        raise _http_error(e)
