//! CSV rendering of ranked designs and dispatch traces.
//!
//! Number formats: energy, fuel and feedstock as integers; money as an
//! integer, or in millions with two decimals and an `M` suffix from $10⁶
//! up; COE with four decimals; fractions as percentages with two decimals;
//! emissions in kg with two decimals; years with two decimals. Missing
//! values are written `-` (absent component) or `n/a` (undefined).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dispatch::{DispatchResult, SlotLedger};
use crate::econ::{ComparisonReport, CostReport};
use crate::emissions::EmissionReport;
use crate::error::{Error, Result};
use crate::optimize::{Evaluation, RankedDesign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableId {
    T2Energy,
    T3Renewable,
    T4CostPerf,
    T5GridEcon,
    T6SizingEmissions,
    T7Indicators,
}

impl TableId {
    pub const ALL: [TableId; 6] = [
        TableId::T2Energy,
        TableId::T3Renewable,
        TableId::T4CostPerf,
        TableId::T5GridEcon,
        TableId::T6SizingEmissions,
        TableId::T7Indicators,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::T2Energy => "T2_energy",
            TableId::T3Renewable => "T3_renewable",
            TableId::T4CostPerf => "T4_cost_perf",
            TableId::T5GridEcon => "T5_grid_econ",
            TableId::T6SizingEmissions => "T6_sizing_emissions",
            TableId::T7Indicators => "T7_indicators",
        }
    }

    /// File stem, `T2` … `T7`.
    pub fn short(self) -> &'static str {
        &self.name()[..2]
    }

    pub fn spec(self) -> TableSpec {
        use ColumnKind::*;
        let columns: &'static [(&'static str, ColumnKind)] = match self {
            TableId::T2Energy => &[
                ("rank", Count),
                ("design", Text),
                ("pv_kwh", Energy),
                ("wind_kwh", Energy),
                ("bg_kwh", Energy),
                ("dg_kwh", Energy),
                ("grid_purchase_kwh", Energy),
                ("total_production_kwh", Energy),
                ("demand_kwh", Energy),
                ("load_served_kwh", Energy),
                ("grid_sale_kwh", Energy),
            ],
            TableId::T3Renewable => &[
                ("rank", Count),
                ("design", Text),
                ("npc_usd", Money),
                ("coe_usd_per_kwh", Coe),
                ("operating_cost_usd_per_yr", Money),
                ("initial_cost_usd", Money),
                ("renewable_fraction_pct", Percent),
                ("excess_kwh", Energy),
                ("unmet_kwh", Energy),
            ],
            TableId::T4CostPerf => &[
                ("rank", Count),
                ("design", Text),
                ("npc_usd", Money),
                ("coe_usd_per_kwh", Coe),
                ("renewable_fraction_pct", Percent),
                ("min_penetration_pct", Percent),
                ("max_penetration_pct", Percent),
                ("excess_kwh", Energy),
                ("excess_pct", Percent),
                ("unmet_kwh", Energy),
                ("unmet_pct", Percent),
                ("conversion_loss_kwh", Energy),
                ("dg_fuel_l", Energy),
                ("dg_hours", Count),
                ("bg_feedstock_kg", Energy),
            ],
            TableId::T5GridEcon => &[
                ("rank", Count),
                ("design", Text),
                ("capital_usd", Money),
                ("replacement_usd_per_yr", Money),
                ("om_usd_per_yr", Money),
                ("fuel_usd_per_yr", Money),
                ("salvage_usd_per_yr", Money),
                ("total_usd_per_yr", Money),
                ("npc_usd", Money),
                ("coe_usd_per_kwh", Coe),
            ],
            TableId::T6SizingEmissions => &[
                ("rank", Count),
                ("design", Text),
                ("pv_kw", Size),
                ("wind_kw", Size),
                ("bg_kw", Size),
                ("dg_kw", Size),
                ("battery_strings", Size),
                ("converter_kw", Size),
                ("grid_kw", Size),
                ("co2_kg_per_yr", Mass),
                ("co_kg_per_yr", Mass),
                ("so2_kg_per_yr", Mass),
                ("nox_kg_per_yr", Mass),
            ],
            TableId::T7Indicators => &[
                ("rank", Count),
                ("design", Text),
                ("base_case", Text),
                ("present_worth_usd", Money),
                ("annual_worth_usd", Money),
                ("roi_pct", Percent),
                ("irr_pct", Percent),
                ("simple_payback_yr", Years),
                ("discounted_payback_yr", Years),
            ],
        };
        TableSpec { id: self, columns }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = Error;

    /// Accepts the full id (`T5_grid_econ`) or its prefix (`T5`).
    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s) || t.short().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownTable(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Count,
    Text,
    Energy,
    Money,
    Coe,
    Percent,
    Mass,
    Years,
    Size,
}

impl ColumnKind {
    /// Largest difference between a value and its rendering, parsed back.
    pub fn tolerance(self, value: f64) -> f64 {
        match self {
            ColumnKind::Count | ColumnKind::Energy => 0.5,
            ColumnKind::Money if value.abs() >= 1e6 => 5e3,
            ColumnKind::Money => 0.5,
            ColumnKind::Coe => 5e-5,
            ColumnKind::Percent => 5e-5,
            ColumnKind::Mass | ColumnKind::Years => 5e-3,
            ColumnKind::Size | ColumnKind::Text => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableSpec {
    pub id: TableId,
    pub columns: &'static [(&'static str, ColumnKind)],
}

impl TableSpec {
    pub fn header(&self) -> Vec<&'static str> {
        self.columns.iter().map(|(n, _)| *n).collect()
    }
}

/// One table cell before formatting. Percent cells hold fractions.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Number(f64),
    Absent,
    Undefined,
}

pub fn format_money(v: f64) -> String {
    if v.abs() >= 1e6 {
        format!("{:.2}M", v / 1e6)
    } else {
        format!("{:.0}", v.round() + 0.0)
    }
}

pub fn format_cell(cell: &Cell, kind: ColumnKind) -> String {
    let v = match cell {
        Cell::Text(s) => return s.clone(),
        Cell::Absent => return "-".to_string(),
        Cell::Undefined => return "n/a".to_string(),
        Cell::Number(v) => *v + 0.0,
    };
    match kind {
        ColumnKind::Count | ColumnKind::Energy => format!("{:.0}", v.round() + 0.0),
        ColumnKind::Money => format_money(v),
        ColumnKind::Coe => format!("{v:.4}"),
        ColumnKind::Percent => format!("{:.2}", v * 100.0),
        ColumnKind::Mass | ColumnKind::Years => format!("{v:.2}"),
        ColumnKind::Size | ColumnKind::Text => v.to_string(),
    }
}

/// Inverse of `format_cell` for numeric columns; `None` for `-`, `n/a`
/// and text.
pub fn parse_cell(text: &str, kind: ColumnKind) -> Option<f64> {
    if kind == ColumnKind::Text {
        return None;
    }
    let (digits, scale) = match text.strip_suffix('M') {
        Some(d) => (d, 1e6),
        None => (text, 1.0),
    };
    let v: f64 = digits.parse().ok()?;
    Some(match kind {
        ColumnKind::Percent => v / 100.0,
        _ => v * scale,
    })
}

fn opt(v: Option<f64>) -> Cell {
    v.map_or(Cell::Absent, Cell::Number)
}

fn defined(v: Option<f64>) -> Cell {
    v.map_or(Cell::Undefined, Cell::Number)
}

fn frac(num: f64, den: f64) -> Cell {
    if den > 0.0 {
        Cell::Number(num / den)
    } else {
        Cell::Undefined
    }
}

/// Cells of one row, in the column order of `id.spec()`.
pub fn row_cells(id: TableId, d: &RankedDesign) -> Vec<Cell> {
    let r = &d.dispatch;
    let cost = d.cost.as_ref();
    let money = |f: &dyn Fn(&CostReport) -> f64| defined(cost.map(f));
    let mut row = vec![
        d.rank.map_or(Cell::Absent, |k| Cell::Number(k as f64)),
        Cell::Text(d.label.clone()),
    ];
    match id {
        TableId::T2Energy => row.extend([
            Cell::Number(r.pv_kwh),
            Cell::Number(r.wind_kwh),
            Cell::Number(r.bg_kwh),
            Cell::Number(r.dg_kwh),
            Cell::Number(r.grid_purchase_kwh),
            Cell::Number(r.total_production_kwh()),
            Cell::Number(r.demand_kwh),
            Cell::Number(r.load_served_kwh),
            Cell::Number(r.grid_sale_kwh),
        ]),
        TableId::T3Renewable => row.extend([
            money(&|c| c.npc),
            money(&|c| c.coe),
            money(&|c| c.operating_cost),
            money(&|c| c.initial_cost),
            Cell::Number(r.renewable_fraction),
            Cell::Number(r.excess_kwh),
            Cell::Number(r.unmet_kwh),
        ]),
        TableId::T4CostPerf => row.extend([
            money(&|c| c.npc),
            money(&|c| c.coe),
            Cell::Number(r.renewable_fraction),
            Cell::Number(r.min_renewable_penetration_frac),
            Cell::Number(r.max_renewable_penetration_frac),
            Cell::Number(r.excess_kwh),
            frac(r.excess_kwh, r.total_production_kwh()),
            Cell::Number(r.unmet_kwh),
            frac(r.unmet_kwh, r.demand_kwh),
            Cell::Number(r.conversion_loss_kwh),
            Cell::Number(r.dg_fuel_l),
            Cell::Number(r.dg_hours as f64),
            Cell::Number(r.bg_feedstock_kg),
        ]),
        TableId::T5GridEcon => row.extend([
            money(&|c| c.initial_cost),
            money(&|c| c.annualized_replacement()),
            money(&|c| c.om()),
            money(&|c| c.fuel()),
            money(&|c| c.annualized_salvage()),
            money(&|c| c.c_ann_tot),
            money(&|c| c.npc),
            money(&|c| c.coe),
        ]),
        TableId::T6SizingEmissions => {
            let s = &d.sizes;
            let e = &d.emissions.total;
            row.extend([
                opt(s.pv),
                opt(s.wind),
                opt(s.bg),
                opt(s.dg),
                opt(s.battery),
                opt(s.converter),
                opt(s.grid),
                Cell::Number(e.co2),
                Cell::Number(e.co),
                Cell::Number(e.so2),
                Cell::Number(e.nox),
            ]);
        }
        TableId::T7Indicators => {
            let c = d.comparison.as_ref();
            row.extend([
                c.map_or(Cell::Undefined, |c| Cell::Text(c.base_case.clone())),
                defined(c.map(|c| c.present_worth)),
                defined(c.map(|c| c.annual_worth)),
                defined(c.map(|c| c.roi_frac)),
                defined(c.and_then(|c| c.irr_frac)),
                defined(c.and_then(|c| c.simple_payback_yr)),
                defined(c.and_then(|c| c.discounted_payback_yr)),
            ]);
        }
    }
    row
}

fn write_csv(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("CSV is UTF-8")
}

/// One row per design, in the order given (rank order for an evaluation).
pub fn render_table(id: TableId, designs: &[RankedDesign]) -> String {
    let spec = id.spec();
    write_csv(
        &spec.header(),
        designs.iter().map(|d| {
            row_cells(id, d)
                .iter()
                .zip(spec.columns)
                .map(|(cell, (_, kind))| format_cell(cell, *kind))
                .collect()
        }),
    )
}

/// Like `render_table` with the id given by name.
pub fn render_table_named(name: &str, designs: &[RankedDesign]) -> Result<String> {
    Ok(render_table(name.parse()?, designs))
}

pub const CHANNELS: [&str; 12] = [
    "load",
    "pv",
    "wind",
    "bg",
    "dg",
    "grid_buy",
    "grid_sell",
    "charge",
    "discharge",
    "soc",
    "unmet",
    "excess",
];

fn channel_value(led: &SlotLedger, channel: &str) -> Option<f64> {
    Some(match channel {
        "load" => led.load,
        "pv" => led.pv,
        "wind" => led.wind,
        "bg" => led.bg,
        "dg" => led.dg,
        "grid_buy" => led.grid_buy,
        "grid_sell" => led.grid_sell,
        "charge" => led.charge,
        "discharge" => led.discharge,
        "soc" => led.soc,
        "unmet" => led.unmet,
        "excess" => led.excess,
        _ => return None,
    })
}

/// `slot,<channel>` with one row per slot; `soc` is the end-of-slot value.
pub fn render_timeseries(result: &DispatchResult, channel: &str) -> Result<String> {
    if !CHANNELS.contains(&channel) || !result.has_trace() {
        return Err(Error::ChannelAbsent(channel.to_string()));
    }
    Ok(write_csv(
        &["slot", channel],
        result.trace.iter().enumerate().map(|(t, led)| {
            let v = channel_value(led, channel).expect("channel checked above");
            vec![t.to_string(), v.to_string()]
        }),
    ))
}

/// Full per-slot ledger.
pub fn render_trace(result: &DispatchResult) -> Result<String> {
    if !result.has_trace() {
        return Err(Error::ChannelAbsent("trace".to_string()));
    }
    let mut header = vec!["slot"];
    header.extend(CHANNELS);
    Ok(write_csv(
        &header,
        result.trace.iter().enumerate().map(|(t, led)| {
            let mut row = vec![t.to_string()];
            row.extend(
                CHANNELS
                    .iter()
                    .map(|c| channel_value(led, c).unwrap().to_string()),
            );
            row
        }),
    ))
}

/// Contents of `summary.json` for a single simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub engine_version: String,
    pub label: String,
    pub warnings: Vec<String>,
    pub dispatch: DispatchResult,
    pub cost: CostReport,
    pub emissions: EmissionReport,
    pub comparison: Option<ComparisonReport>,
}

/// Contents of `summary.json` for a search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationSummary {
    pub engine_version: String,
    pub candidates: usize,
    pub feasible: usize,
    pub reliability_cap: f64,
    pub base_case: Option<String>,
    pub winner: Option<RankedDesign>,
    pub tables: Vec<String>,
}

impl OptimizationSummary {
    pub fn new(evaluation: &Evaluation) -> Self {
        OptimizationSummary {
            engine_version: crate::ENGINE_VERSION.to_string(),
            candidates: evaluation.candidates,
            feasible: evaluation.feasible,
            reliability_cap: evaluation.reliability_cap,
            base_case: evaluation.base_case.as_ref().map(|b| b.digest.clone()),
            winner: evaluation.winner().cloned(),
            tables: TableId::ALL.iter().map(|t| t.name().to_string()).collect(),
        }
    }
}
