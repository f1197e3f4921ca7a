"""Price-of-fairness bounds for proportional and max-min fairness.

Instances are budget utility sets ``{u : 0 <= u_i <= L_i, sum c_i u_i <= 1}``.
"""

from .allocation import (
    PofResult,
    ToleranceNotReached,
    compute_pof,
    solve_mmf,
    solve_pf,
    solve_pf_closed_form,
    solve_pf_waterfill,
    solve_utilitarian,
)
from .bounds import (
    PrefixAggregates,
    bft_mmf_bound_equal,
    bft_pf_bound_equal,
    delta_improvement,
    mmf_bound_unequal,
    pf_bound_equal,
    pf_bound_unequal,
    worst_case_sup,
)
from .domain import (
    Allocation,
    BoundReport,
    BudgetUtilitySet,
    CaseTag,
    Criterion,
    InstanceError,
    InvalidN,
    KnapsackBreakdown,
    LengthMismatch,
    NegativeCost,
    NonPositiveLimit,
    UnachievableMaximum,
    UtilityLimits,
    sorted_descending,
    validate_instance,
)
from .worstcase import (
    TightnessReport,
    construct_mmf_worstcase,
    construct_pf_worstcase_equal,
    construct_pf_worstcase_unequal,
    verify_tightness,
)

__version__ = "0.1.0"
