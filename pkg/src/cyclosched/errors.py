"""Exception hierarchy shared by every stage of the pipeline."""


class CycloschedError(Exception):
    """Base class for all errors raised by cyclosched."""


class TaskSetError(CycloschedError, ValueError):
    """The task set is malformed or violates the necessary utilization bound."""


class EmptySet(TaskSetError):
    pass


class NonPositiveTiming(TaskSetError):
    pass


class WcetExceedsPeriod(TaskSetError):
    pass


class Overutilized(TaskSetError):
    def __init__(self, utilization):
        self.utilization = utilization
        super().__init__(f"total utilization {utilization} ({float(utilization):.6f}) exceeds 1")


class ParseError(TaskSetError):
    """Input document could not be decoded into a task set."""


class BasePeriodExceedsPeriod(CycloschedError, ValueError):
    pass


class BasePeriodOutOfRange(CycloschedError, ValueError):
    pass


class NoFeasibleBasePeriod(CycloschedError):
    """No integer base period in [1, T1] yields a feasible schedule."""


class InfeasibleBasePeriod(CycloschedError, ValueError):
    """The requested base period inflates utilization beyond 1."""


class HyperperiodOverflow(CycloschedError, OverflowError):
    pass


class RangeTooSmall(CycloschedError, ValueError):
    pass


class OracleMismatch(CycloschedError, AssertionError):
    """Branch and bound disagreed with exhaustive enumeration."""
