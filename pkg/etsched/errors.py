"""Exception hierarchy shared by the solvers, the CLI and the HTTP routes.

Every error carries an ``exit_code``: 2 for problems with the user's input,
1 for internal failures. The CLI exits with it; the HTTP layer maps it to a
status code.
"""

from typing import Iterable, Optional


class EtschedError(Exception):
    exit_code = 1
    http_status = 500

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class UserError(EtschedError):
    exit_code = 2
    http_status = 400


class ParseError(UserError):
    """Malformed JSON, schema violation or malformed rational."""


class InvalidInstance(UserError):
    """Base class for instance validation failures."""


class NonIntegerField(InvalidInstance):
    pass


class NonPositiveField(InvalidInstance):
    pass


class EmptyJobSet(InvalidInstance):
    pass


class DeadlineBeforeRelease(InvalidInstance):
    pass


class AlphaTooSmall(InvalidInstance):
    pass


class DuplicateJobId(InvalidInstance):
    pass


class NotEqualWork(UserError):
    def __init__(self, job_ids: Iterable[int], work: Optional[int] = None):
        self.job_ids = sorted(job_ids)
        ids = ", ".join(str(j) for j in self.job_ids)
        detail = f" (expected p={work})" if work is not None else ""
        super().__init__(f"non-preemptive mode needs equal work; offending jobs: {ids}{detail}")


class KeyOutOfRange(UserError):
    pass


class PointNotInTheta(UserError):
    pass


class BadSpec(UserError):
    pass


class TooLarge(UserError):
    http_status = 413


class BudgetExceeded(UserError):
    """A time-point set grew beyond the configured cap."""
    http_status = 413
