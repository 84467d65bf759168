//! Techno-economic design engine for hybrid microgrids: hourly dispatch of
//! PV, wind, biomass, diesel, battery, converter and grid over one year,
//! lifetime costing, emissions, and exhaustive sizing search.

pub mod dispatch;
pub mod econ;
pub mod emissions;
pub mod error;
pub mod ingest;
pub mod model;
pub mod optimize;
pub mod power;
pub mod report;

pub use dispatch::{simulate, simulate_year, DispatchResult, SimOptions, SlotLedger};
pub use econ::{compare_to_base, cost_report, ComparisonReport, CostReport};
pub use emissions::{compute_emissions, EmissionReport};
pub use error::{Error, Result};
pub use ingest::{load_bundle, HourlySeries, SeriesBundle};
pub use model::{validate_scenario, ScenarioConfig, ValidationReport};
pub use optimize::{evaluate_all, sensitivity_sweep, Evaluation, RankedDesign, SearchSpace};
pub use report::{render_table, render_timeseries, TableId};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
