"""Base-period optimization and static timetables for cyclic executives.

Pick the RT-cycle length L of a multirate periodic task set by branch and
bound (checked against exhaustive search), build the resulting block
timetable, replay it over the hyperperiod and verify it.
"""

from cyclosched.errors import (
    BasePeriodExceedsPeriod,
    BasePeriodOutOfRange,
    CycloschedError,
    EmptySet,
    HyperperiodOverflow,
    InfeasibleBasePeriod,
    NoFeasibleBasePeriod,
    NonPositiveTiming,
    OracleMismatch,
    Overutilized,
    ParseError,
    RangeTooSmall,
    TaskSetError,
    WcetExceedsPeriod,
)
from cyclosched.taskset import (
    OverheadWarning,
    Task,
    TaskSet,
    baseline_utilization,
    gcd_base_period,
    load_task_set,
    worked_instance,
    validate_task_set,
)
from cyclosched.objective import (
    ObjectiveBreakdown,
    format_table,
    objective,
    objective_table,
    quantize_period,
    switch_overhead,
    utilization_growth,
)
from cyclosched.optimizer import (
    HSubset,
    OptimizationResult,
    VChain,
    bnb_optimize,
    brute_force_optimize,
    build_h_sets,
    build_v_chain,
    check_optimize,
    count_steps,
    optimize,
)
from cyclosched.schedule import (
    BlockPlan,
    CyclicSchedule,
    build_schedule,
    expand_timeline,
    hyperperiod,
    render_gantt,
)
from cyclosched.verify import (
    DeadlineReport,
    SimulationTrace,
    VerificationReport,
    check_deadlines,
    simulate,
    verify_conditions,
    verify_schedule,
)
from cyclosched.bench import (
    EfficiencyReport,
    GeneratorConfig,
    coprime_fraction,
    efficiency_experiment,
    gen_fibonacci_instance,
    gen_prime_instance,
    gen_random_instance,
)

__version__ = "0.1.0"
