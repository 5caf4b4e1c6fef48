"""Step-size-averaged numerical differentiation and its error benchmark.

Public surface: the function registry with exact derivatives
(functions), the three base estimators and their quadrature (diffcore),
the step-averaging meta-method (averaging), the error-table benchmark
(bench) and the command-line interface (cli).
"""

from .averaging import (
    AveragedResult,
    StepSequence,
    StepStrategy,
    StrategyKind,
    averaged_derivative,
    compensated_mean,
    make_steps,
    predict_error_reduction,
    steps_equidistant,
    steps_lowdiscrepancy,
    steps_mc,
)
from .bench import (
    CANONICAL_VARIANTS,
    ErrorTable,
    MethodVariant,
    RunConfig,
    ShiftEntry,
    VariantKind,
    abs_error,
    aggregate_case_average,
    format_cell,
    format_h,
    load_error_table,
    load_reference_tables,
    mark_minima,
    optimal_shift_report,
    render,
    run_case,
    scatter_data,
    split_single_averaged,
    substream_seed,
)
from .diffcore import (
    LdiSignMode,
    MethodId,
    QuadratureMode,
    afd,
    boole16,
    ldi,
    richardson5,
)
from .errors import (
    AggregationError,
    DomainError,
    InvalidIntervalError,
    InvalidStepError,
    InvalidStrategyError,
    NonFiniteEstimateError,
    StepavgError,
)
from .functions import (
    CaseCheck,
    CustomFunction,
    FunctionCase,
    FunctionId,
    case_table,
    d1_exact,
    d2_exact,
    display_unit,
    evaluate,
    function_handle,
    validate_case_table,
)

__version__ = "1.0.0"
