"""Cash breakeven thresholds, treasury leverage and the decomposition
of the operating cash surplus, all in exact rational arithmetic."""

from .breakeven import (
    BindingFormula,
    SeasonalSolvency,
    ThresholdComponents,
    ThresholdReport,
    customer_credit_delay,
    effective_margin,
    liquidity_threshold,
    seasonal_solvency,
    solvency_threshold,
    supplier_credit_offset,
)
from .cash_transfer import (
    CafCashVariation,
    CashDecompositionTable,
    InheritedCash,
    TransferCoefficients,
    TransferredCash,
    WaterfallReport,
    caf_cash_variation,
    deferred_net_cash_flow,
    fcf_waterfall,
    operating_cash_surplus,
    productivity_cash_flow,
    transfer_coefficients,
    transferred_and_inherited_cash,
    unit_coefficients,
    waterfall_from_ledger,
    working_capital_requirement,
)
from .errors import (
    AtCriticalMargin,
    AtCriticalProduction,
    CashleverError,
    CoefficientOutOfRange,
    DecompositionMismatch,
    DomainError,
    FormatError,
    IdentityViolation,
    InfeasibleCycle,
    InsufficientPeriods,
    LedgerFormatError,
    NegativeQuantity,
    NeverSolvent,
    NonPositiveMargin,
    ScenarioFormatError,
    UnmatchedFlow,
    ValidationError,
    ZeroProduction,
)
from .ledger_io import (
    emit_ledger_csv,
    emit_ledger_json,
    parse_ledger_csv,
    parse_ledger_json,
    parse_scenario_json,
)
from .leverage import (
    LeverageVariant,
    RuptureCell,
    RuptureMatrix,
    critical_margin,
    critical_production,
    elasticity_wrt_margin,
    elasticity_wrt_volume,
    fixed_basis,
    indifference_points,
    linear_grid,
    rupture_matrix,
    virtual_treasury,
)
from .model import (
    AnticipationCase,
    CashLagProfile,
    CostStructure,
    FlowKind,
    FlowLine,
    FlowStock,
    Ledger,
    MatchedFlow,
    PeriodAccount,
    match_flows,
    validate_ledger,
)
from .numeric import as_ratio, decimal_str, exact_str, round_half_even
from .simulate import CashSimulation, MonthlyRow, cumulative_sales, simulate_cash_days
from .surplus import (
    CafSurplusReport,
    SurplusEntry,
    SurplusReport,
    caf_surplus,
    productivity_surplus,
    surplus_accounts,
)

__version__ = "0.1.0"
