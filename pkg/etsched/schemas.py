"""Wire formats: JSON-Schema validation of incoming documents and pydantic
models for everything the CLI and the HTTP routes emit.

Rationals travel as bare ints or lowest-terms "num/den" strings, never as
floats. Schedules are written in the instance's own time coordinates, i.e.
shifted back by the origin subtracted at load time.
"""

import json
import logging
import os
from functools import lru_cache
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Union

import jsonschema
from pydantic import BaseModel, ConfigDict, StrictInt, StrictStr

from .config import config
from .errors import ParseError
from .model import (
    Instance, Schedule, Segment, SolveResult, ValidationReport, energy_of_schedule,
    format_rational, parse_rational, validate_instance,
)
from .reductions import KnapsackInstance

logger = logging.getLogger(__name__)

SCHEMA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "schema")

RationalValue = Union[StrictInt, StrictStr]


# Pydantic models for request/response bodies
class JobModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    id: StrictInt
    r: StrictInt
    d: StrictInt
    p: StrictInt
    w: StrictInt = 1


class InstanceModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    alpha: Optional[StrictInt] = None
    budget: RationalValue = 0
    jobs: List[JobModel]


class SegmentModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    job: StrictInt
    start: RationalValue
    end: RationalValue
    speed: RationalValue


class ScheduleModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    segments: List[SegmentModel]
    completed: Optional[List[int]] = None
    energy: Optional[RationalValue] = None


class SolveResultModel(BaseModel):
    mode: str
    weighted: bool
    objective: int
    energy: RationalValue
    schedule: ScheduleModel


class OracleResultModel(BaseModel):
    mode: str
    weighted: bool
    objective: int
    best_subset: List[int]
    energy: RationalValue
    schedule: ScheduleModel


class KnapsackItemModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    v: StrictInt
    c: StrictInt


class KnapsackModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    C: StrictInt
    items: List[KnapsackItemModel]


class ViolationModel(BaseModel):
    kind: str
    message: str
    job: Optional[int] = None


class ValidationReportModel(BaseModel):
    ok: bool
    energy: RationalValue
    violations: List[ViolationModel]


@lru_cache(maxsize=None)
def load_schema(name: str) -> Dict[str, Any]:
    with open(os.path.join(SCHEMA_DIR, f"{name}.json")) as f:
        return json.load(f)


def validate_document(doc: Any, name: str) -> None:
    try:
        jsonschema.validate(doc, load_schema(name))
    except jsonschema.ValidationError as e:
        where = "/".join(str(part) for part in e.absolute_path) or "document"
        raise ParseError(f"{name} {where}: {e.message}")


def parse_json(text: str, what: str = "document") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed {what} JSON: {e}")


def read_json_file(path: str, what: str = "document") -> Any:
    try:
        with open(path, encoding="utf-8") as f:
            return parse_json(f.read(), what)
    except OSError as e:
        raise ParseError(f"cannot read {what} file {path}: {e.strerror}")


def dump_json(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False)


# Instances

def load_instance_document(doc: Mapping[str, Any], alpha: Optional[int] = None,
                           budget: Any = None) -> Instance:
    """Validate a raw instance document; ``alpha`` and ``budget`` override the file."""
    validate_document(doc, "instance")
    raw = dict(doc)
    if alpha is not None:
        raw["alpha"] = alpha
    if budget is not None:
        raw["budget"] = format_rational(parse_rational(budget))
    return validate_instance(raw, default_alpha=config.default_alpha())


def instance_to_document(inst: Instance) -> Dict[str, Any]:
    return {
        "alpha": inst.alpha,
        "budget": format_rational(inst.budget),
        "jobs": [
            {"id": j.id, "r": j.r + inst.origin, "d": j.d + inst.origin, "p": j.p, "w": j.w}
            for j in sorted(inst.jobs, key=lambda j: j.id)
        ],
    }


# Schedules

def schedule_model(schedule: Schedule, alpha: Optional[int] = None, origin: int = 0) -> ScheduleModel:
    return ScheduleModel(
        segments=[SegmentModel(job=seg.job_id,
                               start=format_rational(seg.start + origin),
                               end=format_rational(seg.end + origin),
                               speed=format_rational(seg.speed))
                  for seg in schedule.segments],
        completed=sorted(schedule.completed),
        energy=format_rational(energy_of_schedule(schedule, alpha)) if alpha is not None else None,
    )


def schedule_to_document(schedule: Schedule, alpha: Optional[int] = None, origin: int = 0) -> Dict[str, Any]:
    return schedule_model(schedule, alpha, origin).model_dump(exclude_none=True)


def load_schedule_document(doc: Mapping[str, Any], origin: int = 0) -> Schedule:
    validate_document(doc, "schedule")
    segments = [
        Segment(job_id=entry["job"],
                start=parse_rational(entry["start"]) - origin,
                end=parse_rational(entry["end"]) - origin,
                speed=parse_rational(entry["speed"]))
        for entry in doc["segments"]
    ]
    completed = doc.get("completed")
    if completed is None:
        completed = {seg.job_id for seg in segments}
    return Schedule.build(segments, completed)


# Results

def result_to_document(result: SolveResult, alpha: int, origin: int = 0) -> Dict[str, Any]:
    return SolveResultModel(
        mode=result.mode,
        weighted=result.weighted,
        objective=result.objective,
        energy=format_rational(result.energy),
        schedule=schedule_model(result.schedule, alpha, origin),
    ).model_dump(exclude_none=True)


def oracle_result_to_document(result, mode: str, weighted: bool, alpha: int, origin: int = 0) -> Dict[str, Any]:
    return OracleResultModel(
        mode=mode,
        weighted=weighted,
        objective=result.objective,
        best_subset=sorted(result.best_subset),
        energy=format_rational(result.energy),
        schedule=schedule_model(result.schedule, alpha, origin),
    ).model_dump(exclude_none=True)


def report_to_document(report: ValidationReport) -> Dict[str, Any]:
    return ValidationReportModel(
        ok=report.ok,
        energy=format_rational(report.energy),
        violations=[ViolationModel(kind=v.kind, message=v.message, job=v.job_id) for v in report.violations],
    ).model_dump()


# Knapsack

def load_knapsack_document(doc: Mapping[str, Any]) -> KnapsackInstance:
    validate_document(doc, "knapsack")
    return KnapsackInstance.build([(item["v"], item["c"]) for item in doc["items"]], doc["C"])


def knapsack_to_document(kp: KnapsackInstance) -> Dict[str, Any]:
    return KnapsackModel(
        C=kp.capacity,
        items=[KnapsackItemModel(v=v, c=c) for v, c in kp.items],
    ).model_dump()


def rationals_to_document(points) -> List[RationalValue]:
    return [format_rational(Fraction(p)) for p in points]
