from fractions import Fraction

import pytest

from conftest import make_instance
from etsched.errors import (
    AlphaTooSmall, DeadlineBeforeRelease, DuplicateJobId, EmptyJobSet, InvalidInstance,
    NonIntegerField, NonPositiveField, NotEqualWork, ParseError,
)
from etsched.model import (
    NONPREEMPTIVE, PREEMPTIVE, Job, Schedule, Segment, energy_of_schedule, format_rational,
    merge_adjacent, parse_rational, require_equal_work, validate_instance, validate_schedule,
)

F = Fraction


def seg(job, start, end, speed):
    return Segment(job, F(start), F(end), F(speed))


def test_validate_shifts_to_zero():
    inst = validate_instance({"jobs": [{"id": 1, "r": 5, "d": 7, "p": 1}]})
    assert inst.jobs == (Job(1, 0, 2, 1),)
    assert inst.span == 2
    assert inst.origin == 5
    assert inst.alpha == 3


def test_validate_sorts_by_deadline():
    inst = validate_instance({"jobs": [{"id": 1, "r": 0, "d": 4, "p": 2},
                                       {"id": 2, "r": 1, "d": 2, "p": 2}]})
    assert inst.job_ids == (2, 1)
    assert inst.span == 4
    assert inst.total_work == 4


def test_validate_ties_broken_by_id():
    inst = validate_instance({"jobs": [{"id": 7, "r": 0, "d": 2, "p": 1},
                                       {"id": 3, "r": 1, "d": 2, "p": 1}]})
    assert inst.job_ids == (3, 7)


@pytest.mark.parametrize("raw, error", [
    ({"jobs": [{"id": 1, "r": 0, "d": 0, "p": 1}]}, DeadlineBeforeRelease),
    ({"jobs": []}, EmptyJobSet),
    ({"jobs": [{"id": 1, "r": 0.5, "d": 2, "p": 1}]}, NonIntegerField),
    ({"alpha": 1, "jobs": [{"id": 1, "r": 0, "d": 2, "p": 1}]}, AlphaTooSmall),
    ({"jobs": [{"id": 1, "r": 0, "d": 2, "p": 0}]}, NonPositiveField),
    ({"jobs": [{"id": 1, "r": 0, "d": 2, "p": 1, "w": 0}]}, NonPositiveField),
    ({"jobs": [{"id": 1, "r": 0, "d": 2, "p": 1}, {"id": 1, "r": 0, "d": 3, "p": 1}]}, DuplicateJobId),
    ({"budget": -1, "jobs": [{"id": 1, "r": 0, "d": 2, "p": 1}]}, InvalidInstance),
])
def test_validate_rejects(raw, error):
    with pytest.raises(error) as info:
        validate_instance(raw)
    assert info.value.exit_code == 2


def test_validate_reads_rational_budget():
    inst = validate_instance({"alpha": 2, "budget": "3/6", "jobs": [{"id": 1, "r": 0, "d": 2, "p": 1}]})
    assert inst.budget == F(1, 2)
    assert inst.alpha == 2


def test_parse_and_format_rational():
    assert parse_rational("3/6") == F(1, 2)
    assert parse_rational(4) == 4
    assert format_rational(F(4, 2)) == 2
    assert format_rational(F(2, 6)) == "1/3"
    for bad in (0.5, True, "1/0", "x"):
        with pytest.raises(ParseError):
            parse_rational(bad)


def test_energy_examples():
    assert energy_of_schedule(Schedule.build([seg(1, 0, 2, 1)], [1]), 3) == 2
    assert energy_of_schedule(Schedule(), 3) == 0
    pieces = [seg(1, 0, 1, 2), seg(2, 1, 4, F(2, 3))]
    assert energy_of_schedule(Schedule.build(pieces, [1, 2]), 3) == F(80, 9)


def test_energy_is_additive_and_scales():
    whole = Schedule.build([seg(1, 0, 3, F(2, 3))], [1])
    split = Schedule.build([seg(1, 0, F(5, 4), F(2, 3)), seg(1, F(5, 4), 3, F(2, 3))], [1])
    assert energy_of_schedule(whole, 3) == energy_of_schedule(split, 3)
    faster = Schedule.build([seg(1, 0, 3, F(2, 3) * F(3, 2))], [1])
    assert energy_of_schedule(faster, 3) == energy_of_schedule(whole, 3) * F(3, 2) ** 3


def test_merge_adjacent_fuses_equal_speed_pieces():
    merged = merge_adjacent([seg(1, 1, 2, 1), seg(1, 0, 1, 1), seg(2, 2, 3, 1)])
    assert merged == [seg(1, 0, 2, 1), seg(2, 2, 3, 1)]


def test_schedule_overlap_reported(two_unit_jobs):
    schedule = Schedule.build([seg(1, 0, 1, 1), seg(2, F(1, 2), F(3, 2), 1)], [1, 2])
    report = validate_schedule(two_unit_jobs.with_budget(10), schedule)
    assert "overlap" in report.kinds()
    assert not report.ok


def test_exact_fit_is_valid():
    inst = make_instance((0, 1, 1), budget=1)
    report = validate_schedule(inst, Schedule.build([seg(1, 0, 1, 1)], [1]))
    assert report.ok
    assert report.energy == 1


def test_preemption_reported_only_in_nonpreemptive_mode():
    inst = make_instance((0, 3, 2), budget=10)
    schedule = Schedule.build([seg(1, 0, 1, 1), seg(1, 2, 3, 1)], [1])
    assert validate_schedule(inst, schedule, PREEMPTIVE).ok
    assert validate_schedule(inst, schedule, NONPREEMPTIVE).kinds() == ["preemption"]


def test_window_work_and_budget_violations():
    inst = make_instance((0, 1, 1), (1, 2, 1), budget=F(1, 2))
    schedule = Schedule.build([seg(2, 0, 1, 1)], [2])
    kinds = validate_schedule(inst, schedule).kinds()
    assert "window" in kinds
    assert "energy_budget" in kinds
    short = Schedule.build([seg(2, 1, 2, F(1, 2))], [2])
    assert validate_schedule(inst.with_budget(1), short).kinds() == ["work_mismatch"]


def test_budget_message():
    inst = make_instance((0, 1, 1), budget=F(1, 2))
    report = validate_schedule(inst, Schedule.build([seg(1, 0, 1, 1)], [1]))
    assert report.violations[0].message.startswith("energy exceeds budget")


def test_require_equal_work_names_outliers():
    assert require_equal_work(make_instance((0, 2, 2), (0, 3, 2))) == 2
    with pytest.raises(NotEqualWork) as info:
        require_equal_work(make_instance((0, 2, 2), (0, 3, 2), (0, 4, 1)))
    assert info.value.job_ids == [3]
    assert "3" in info.value.message
