//! Deterministic techno-economic engine for net-zero-energy homes.
//!
//! The crate computes, from a small bundle of published cost curves and
//! reference parameters: installed-cost projections, levelized cost of
//! electricity for rooftop PV and PV+battery systems, gasoline-equivalent
//! prices, financed and cash purchase cash-flow schedules with NPV/IRR/SIR
//! and simple payback, monthly-savings scenarios (batteries, tax credits,
//! efficiency packages, vehicle-to-home), crossover dates, and utility-scale
//! hydrogen production cost with grid-search plant sizing.
//!
//! Everything is a pure function of immutable inputs; batch evaluation is
//! data-parallel behind the `parallel` feature (on by default) and produces
//! byte-identical results either way.

pub mod batch;
pub mod curves;
pub mod error;
pub mod finance;
pub mod hydrogen;
pub mod lcoe;
pub mod params;
pub mod projections;
pub mod savings;
pub mod scenario;
pub mod sizing;

pub use curves::{CostCurve, CurveUnit, DataBundle, Extrapolation, StateEnergyAccount};
pub use error::{EngineError, Result};
pub use finance::{
    build_schedule, financial_summary, irr, monthly_payment, npv, sir, spb, CashFlow,
    CashFlowSchedule, FinancialSummary, FinancingMode, FlowKind,
};
pub use hydrogen::{
    lcoh, optimize_sizing, per_mbtu, sensitivity, H2CostInputs, H2PlantDesign, HeatingValue,
    SensitivityDriver, SizingChoice,
};
pub use lcoe::{gas_equivalent, lcoe_pv, lcoe_pv_battery, LcoeResult};
pub use params::{
    Construction, EfficiencyPackage, EvParams, FinancingTerms, GridPriceModel, HomeProfile,
    Params, TechParams,
};
pub use projections::{
    avg_consumption, battery_installed_cost, delivery_efficiency, grid_price, pv_installed_cost,
    utility_lcoe, Basis, UtilityKind,
};
pub use savings::{
    crossover_month, monthly_savings, transport_monthly_savings, v2h_substitution, MonthlySavings,
};
pub use scenario::{InstallTiming, ScenarioConfig, StorageMedium};
pub use sizing::{battery_size_grid_independent, ev_extra_pv, pv_size_for_net_zero};
