//! Exhaustive sizing search: enumerate every combination of candidate
//! sizes, simulate and cost each one, keep those within the reliability cap
//! and rank them by net present cost.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dispatch::{
    simulate, simulate_year, simulate_year_with, DispatchResult, SimOptions, SystemInputs,
};
use crate::econ::{compare_to_base, cost_report, ComparisonReport, CostReport};
use crate::emissions::{compute_emissions, EmissionReport};
use crate::error::{Error, Result};
use crate::ingest::SeriesBundle;
use crate::model::{
    validate_scenario, BatterySpec, BgSpec, ConverterSpec, DgSpec, DispatchSpec, DispatchStrategy,
    EconParams, EmissionFactors, GridSpec, LoadSpec, PvSpec, ResourceSpec, ScenarioConfig,
    WindSpec,
};
use crate::power::{
    bg_output_from_feedstock, cell_temperature, pv_output_per_kw, wind_output_per_kw,
    wind_speed_at_hub, CellTempModel,
};

/// Candidate sizes for one component. The template describes a single
/// unit (1 kW, or one battery string) and its costs; a candidate of size
/// `s` is the template with size `s` and costs multiplied by `s`. `null`
/// in `sizes` means the component is left out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis<T> {
    pub template: T,
    pub sizes: Vec<Option<f64>>,
}

/// Grid connection options; a size is the purchase limit in kW.
pub type GridAxis = Axis<GridSpec>;

fn default_strategies() -> Vec<DispatchStrategy> {
    vec![DispatchStrategy::LoadFollowing]
}

fn default_cap() -> f64 {
    0.001
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpace {
    #[serde(default)]
    pub pv: Option<Axis<PvSpec>>,
    #[serde(default)]
    pub wind: Option<Axis<WindSpec>>,
    #[serde(default)]
    pub bg: Option<Axis<BgSpec>>,
    #[serde(default)]
    pub dg: Option<Axis<DgSpec>>,
    #[serde(default)]
    pub battery: Option<Axis<BatterySpec>>,
    #[serde(default)]
    pub converter: Option<Axis<ConverterSpec>>,
    #[serde(default)]
    pub grid: Option<GridAxis>,
    pub econ: EconParams,
    #[serde(default)]
    pub emissions: EmissionFactors,
    pub load: LoadSpec,
    #[serde(default)]
    pub resources: ResourceSpec,
    #[serde(default)]
    pub dispatch: DispatchSpec,
    #[serde(default = "default_strategies")]
    pub strategies: Vec<DispatchStrategy>,
    /// Largest tolerated unmet fraction of annual demand.
    #[serde(default = "default_cap")]
    pub reliability_cap: f64,
    /// Design the indicators compare against; grid-only by default.
    #[serde(default)]
    pub base_case: Option<DesignSizes>,
    #[serde(default)]
    pub sweeps: Vec<SweepSpec>,
}

/// One point of the search space. `None` is an absent component.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSizes {
    #[serde(default)]
    pub pv: Option<f64>,
    #[serde(default)]
    pub wind: Option<f64>,
    #[serde(default)]
    pub bg: Option<f64>,
    #[serde(default)]
    pub dg: Option<f64>,
    #[serde(default)]
    pub battery: Option<f64>,
    #[serde(default)]
    pub converter: Option<f64>,
    #[serde(default)]
    pub grid: Option<f64>,
    #[serde(default)]
    pub strategy: DispatchStrategy,
}

impl DesignSizes {
    /// Canonical text form, used as the ranking tiebreak.
    pub fn digest(&self) -> String {
        let f = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
        format!(
            "pv={};wind={};bg={};dg={};batt={};conv={};grid={};strategy={}",
            f(self.pv),
            f(self.wind),
            f(self.bg),
            f(self.dg),
            f(self.battery),
            f(self.converter),
            f(self.grid),
            self.strategy
        )
    }
}

impl DesignSizes {
    /// Sizes of an existing scenario; batteries are counted in strings and
    /// the grid by its purchase limit.
    pub fn of(cfg: &ScenarioConfig) -> Self {
        DesignSizes {
            pv: cfg.pv.as_ref().map(|c| c.rated_kw),
            wind: cfg.wind.as_ref().map(|c| c.rated_kw),
            bg: cfg.bg.as_ref().map(|c| c.rated_kw),
            dg: cfg.dg.as_ref().map(|c| c.rated_kw),
            battery: cfg.battery.as_ref().map(|c| c.strings as f64),
            converter: cfg.converter.as_ref().map(|c| c.rated_kw),
            grid: cfg.active_grid().map(|g| g.max_purchase_kw),
            strategy: cfg.dispatch.strategy,
        }
    }
}

impl fmt::Display for DesignSizes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digest())
    }
}

fn axis_len<T>(axis: &Option<Axis<T>>) -> usize {
    axis.as_ref().map_or(1, |a| a.sizes.len())
}

fn axis_size<T>(axis: &Option<Axis<T>>, digit: usize) -> Option<f64> {
    axis.as_ref().and_then(|a| a.sizes[digit])
}

fn check_axis<T>(axis: &Option<Axis<T>>, name: &str, integral: bool) -> Result<()> {
    let Some(a) = axis else { return Ok(()) };
    if a.sizes.is_empty() {
        return Err(Error::EmptySpace(format!("{name} has no candidate sizes")));
    }
    let mut prev = f64::NEG_INFINITY;
    for (k, s) in a.sizes.iter().enumerate() {
        match s {
            None if k > 0 => {
                return Err(Error::InvalidInput(format!(
                    "{name}: the absent entry must come first"
                )))
            }
            None => {}
            Some(v) => {
                if !(v.is_finite() && *v >= 0.0) || *v <= prev {
                    return Err(Error::InvalidInput(format!(
                        "{name}: sizes must be non-negative and strictly ascending"
                    )));
                }
                if integral && v.fract() != 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "{name}: sizes must be whole strings"
                    )));
                }
                prev = *v;
            }
        }
    }
    Ok(())
}

fn check_unit(value: f64, name: &str) -> Result<()> {
    if value != 1.0 {
        return Err(Error::InvalidInput(format!(
            "{name}: the template must describe a single unit (size 1)"
        )));
    }
    Ok(())
}

impl SearchSpace {
    pub fn from_json_str(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Structural checks: non-empty lists, ascending sizes, unit templates.
    pub fn check(&self) -> Result<()> {
        check_axis(&self.pv, "pv", false)?;
        check_axis(&self.wind, "wind", false)?;
        check_axis(&self.bg, "bg", false)?;
        check_axis(&self.dg, "dg", false)?;
        check_axis(&self.battery, "battery", true)?;
        check_axis(&self.converter, "converter", false)?;
        check_axis(&self.grid, "grid", false)?;
        if let Some(a) = &self.pv {
            check_unit(a.template.rated_kw, "pv")?;
        }
        if let Some(a) = &self.wind {
            check_unit(a.template.rated_kw, "wind")?;
        }
        if let Some(a) = &self.bg {
            check_unit(a.template.rated_kw, "bg")?;
        }
        if let Some(a) = &self.dg {
            check_unit(a.template.rated_kw, "dg")?;
        }
        if let Some(a) = &self.battery {
            check_unit(a.template.strings as f64, "battery")?;
        }
        if let Some(a) = &self.converter {
            check_unit(a.template.rated_kw, "converter")?;
        }
        if self.strategies.is_empty() {
            return Err(Error::EmptySpace("no dispatch strategy listed".into()));
        }
        if !(0.0..=1.0).contains(&self.reliability_cap) {
            return Err(Error::InvalidInput(
                "reliability_cap must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }

    fn radices(&self) -> [usize; 8] {
        [
            axis_len(&self.pv),
            axis_len(&self.wind),
            axis_len(&self.bg),
            axis_len(&self.dg),
            axis_len(&self.battery),
            axis_len(&self.converter),
            axis_len(&self.grid),
            self.strategies.len(),
        ]
    }

    /// Number of candidates: the product of the list lengths.
    pub fn count(&self) -> usize {
        self.radices().iter().product()
    }

    /// The `index`-th candidate in lexicographic order (strategy varies
    /// fastest, PV slowest).
    pub fn candidate_at(&self, index: usize) -> DesignSizes {
        let radices = self.radices();
        let mut digits = [0usize; 8];
        let mut rest = index;
        for k in (0..8).rev() {
            digits[k] = rest % radices[k];
            rest /= radices[k];
        }
        DesignSizes {
            pv: axis_size(&self.pv, digits[0]),
            wind: axis_size(&self.wind, digits[1]),
            bg: axis_size(&self.bg, digits[2]),
            dg: axis_size(&self.dg, digits[3]),
            battery: axis_size(&self.battery, digits[4]),
            converter: axis_size(&self.converter, digits[5]),
            grid: axis_size(&self.grid, digits[6]),
            strategy: self.strategies[digits[7]],
        }
    }

    /// Builds the scenario for one design.
    pub fn instantiate(&self, sizes: &DesignSizes) -> Result<ScenarioConfig> {
        fn missing(name: &str) -> Error {
            Error::InvalidInput(format!(
                "design sizes {name} but the space has no {name} axis"
            ))
        }
        macro_rules! sized {
            ($axis:expr, $size:expr, $name:literal, |$spec:ident, $s:ident| $set:expr) => {
                match $size {
                    None => None,
                    Some($s) => {
                        let axis = $axis.as_ref().ok_or_else(|| missing($name))?;
                        let mut $spec = axis.template.clone();
                        $spec.set_cost(axis.template.cost().scaled($s));
                        $set;
                        Some($spec)
                    }
                }
            };
        }
        let pv = sized!(self.pv, sizes.pv, "pv", |spec, s| spec.rated_kw = s);
        let wind = sized!(self.wind, sizes.wind, "wind", |spec, s| spec.rated_kw = s);
        let bg = sized!(self.bg, sizes.bg, "bg", |spec, s| spec.rated_kw = s);
        let dg = sized!(self.dg, sizes.dg, "dg", |spec, s| spec.rated_kw = s);
        let battery = sized!(self.battery, sizes.battery, "battery", |spec, s| {
            spec.strings = s as i64;
            spec.max_charge_kw = spec.max_charge_kw.map(|v| v * s);
            spec.max_discharge_kw = spec.max_discharge_kw.map(|v| v * s);
        });
        let converter = sized!(self.converter, sizes.converter, "converter", |spec, s| {
            spec.rated_kw = s
        });
        let grid = match sizes.grid {
            None => None,
            Some(s) => {
                let axis = self.grid.as_ref().ok_or_else(|| missing("grid"))?;
                let mut g = axis.template.clone();
                g.max_purchase_kw = s;
                Some(g)
            }
        };
        Ok(ScenarioConfig {
            pv,
            wind,
            bg,
            dg,
            battery,
            converter,
            grid,
            econ: self.econ.clone(),
            emissions: self.emissions.clone(),
            load: self.load.clone(),
            resources: self.resources.clone(),
            dispatch: DispatchSpec {
                strategy: sizes.strategy,
                max_unmet_frac: self.reliability_cap,
                ..self.dispatch.clone()
            },
        })
    }

    /// Grid-only design at the largest listed connection, if any.
    pub fn default_base_case(&self) -> Option<DesignSizes> {
        let largest = self.grid.as_ref()?.sizes.iter().rev().find_map(|s| *s)?;
        Some(DesignSizes {
            grid: Some(largest),
            strategy: self.strategies.first().copied().unwrap_or_default(),
            ..DesignSizes::default()
        })
    }

    pub fn base_case_sizes(&self) -> Option<DesignSizes> {
        self.base_case.clone().or_else(|| self.default_base_case())
    }
}

/// Every candidate scenario in lexicographic order.
pub fn enumerate(space: &SearchSpace) -> Result<impl Iterator<Item = ScenarioConfig> + '_> {
    space.check()?;
    Ok((0..space.count()).map(move |k| {
        space
            .instantiate(&space.candidate_at(k))
            .expect("sizes come from the space's own axes")
    }))
}

/// Evaluated candidate. `rank` is set for feasible designs only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedDesign {
    pub index: usize,
    pub digest: String,
    pub label: String,
    pub sizes: DesignSizes,
    pub dispatch: DispatchResult,
    pub cost: Option<CostReport>,
    pub emissions: EmissionReport,
    pub comparison: Option<ComparisonReport>,
    pub feasible: bool,
    pub violations: Vec<String>,
    pub rank: Option<usize>,
}

impl RankedDesign {
    pub fn npc(&self) -> f64 {
        self.cost.as_ref().map_or(f64::INFINITY, |c| c.npc)
    }

    pub fn coe(&self) -> f64 {
        self.cost.as_ref().map_or(f64::INFINITY, |c| c.coe)
    }
}

/// Unit-size output series shared by every candidate of a space.
struct UnitSeries {
    load: Vec<f64>,
    pv_per_kw: Option<Vec<f64>>,
    wind_per_kw: Option<Vec<f64>>,
    bg_feedstock_cap: Option<Vec<f64>>,
}

impl UnitSeries {
    fn new(space: &SearchSpace, bundle: &SeriesBundle) -> Result<Self> {
        let n = bundle.load.len();
        let same_len = |name: &'static str, len: usize| -> Result<()> {
            if len != n {
                return Err(Error::SeriesLength {
                    name,
                    expected: n,
                    actual: len,
                });
            }
            Ok(())
        };
        let pv_per_kw = match (&space.pv, &bundle.ghi) {
            (Some(axis), Some(ghi)) => {
                same_len("ghi", ghi.len())?;
                same_len("temperature", bundle.temperature.len())?;
                let pv = &axis.template;
                let cell = CellTempModel::new(pv.noct_degc);
                Some(
                    ghi.values()
                        .iter()
                        .zip(bundle.temperature.values())
                        .map(|(&g, &t)| pv_output_per_kw(pv, g, cell_temperature(&cell, t, g)))
                        .collect(),
                )
            }
            _ => None,
        };
        let wind_per_kw = match (&space.wind, &bundle.wind_speed) {
            (Some(axis), Some(speed)) => {
                same_len("wind", speed.len())?;
                let w = &axis.template;
                Some(
                    speed
                        .values()
                        .iter()
                        .map(|&v| wind_output_per_kw(w, wind_speed_at_hub(w, v)))
                        .collect(),
                )
            }
            _ => None,
        };
        let bg_feedstock_cap = match (&space.bg, &bundle.biomass) {
            (Some(axis), Some(feed)) => {
                same_len("biomass", feed.len())?;
                Some(
                    feed.values()
                        .iter()
                        .map(|&kg| bg_output_from_feedstock(&axis.template, kg))
                        .collect(),
                )
            }
            _ => None,
        };
        Ok(UnitSeries {
            load: bundle.load.values().to_vec(),
            pv_per_kw,
            wind_per_kw,
            bg_feedstock_cap,
        })
    }

    fn inputs_for(&self, cfg: &ScenarioConfig) -> Result<SystemInputs> {
        let n = self.load.len();
        let scaled = |unit: &Option<Vec<f64>>, size: Option<f64>, what: &str| -> Result<Vec<f64>> {
            match size {
                None => Ok(vec![0.0; n]),
                Some(s) => unit
                    .as_ref()
                    .map(|u| u.iter().map(|v| s * v).collect())
                    .ok_or_else(|| Error::InvalidInput(format!("{what} resource series missing"))),
            }
        };
        Ok(SystemInputs {
            load_kw: self.load.clone(),
            pv_kw: scaled(&self.pv_per_kw, cfg.pv.as_ref().map(|p| p.rated_kw), "GHI")?,
            wind_kw: scaled(
                &self.wind_per_kw,
                cfg.wind.as_ref().map(|w| w.rated_kw),
                "wind",
            )?,
            bg_feedstock_cap_kw: match (&cfg.bg, &self.bg_feedstock_cap) {
                (Some(_), Some(cap)) => cap.clone(),
                _ => vec![f64::INFINITY; n],
            },
        })
    }
}

struct Evaluator<'a> {
    space: &'a SearchSpace,
    series: UnitSeries,
    base: Option<(String, CostReport)>,
}

impl Evaluator<'_> {
    fn evaluate(&self, index: usize, sizes: DesignSizes) -> RankedDesign {
        let cfg = self
            .space
            .instantiate(&sizes)
            .expect("sizes come from the space's own axes");
        let mut design = RankedDesign {
            index,
            digest: sizes.digest(),
            label: cfg.label(),
            sizes,
            dispatch: DispatchResult::default(),
            cost: None,
            emissions: EmissionReport::default(),
            comparison: None,
            feasible: false,
            violations: validate_scenario(&cfg)
                .errors()
                .map(|v| v.to_string())
                .collect(),
            rank: None,
        };
        if !design.violations.is_empty() {
            return design;
        }
        let result = match self
            .series
            .inputs_for(&cfg)
            .and_then(|inputs| simulate(&cfg, &inputs, SimOptions::default()))
        {
            Ok(r) => r,
            Err(e) => {
                design.violations.push(e.to_string());
                return design;
            }
        };
        design.emissions = compute_emissions(&result, &cfg.emissions);
        match cost_report(&cfg, &result) {
            Ok(cost) => {
                design.comparison = self
                    .base
                    .as_ref()
                    .and_then(|(label, base)| compare_to_base(&cost, base, label, &cfg.econ).ok());
                design.cost = Some(cost);
            }
            Err(e) => design.violations.push(e.to_string()),
        }
        let unmet = result.unmet_fraction();
        // A relative slack of 1e-12 absorbs rounding in the slot ledger.
        if unmet > self.space.reliability_cap + 1e-12 {
            design.violations.push(format!(
                "unmet fraction {unmet:.6} exceeds the reliability cap {}",
                self.space.reliability_cap
            ));
        }
        design.dispatch = result;
        design.feasible = design.violations.is_empty();
        design
    }
}

/// Outcome of evaluating a search space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub candidates: usize,
    pub feasible: usize,
    pub reliability_cap: f64,
    pub base_case: Option<RankedDesign>,
    /// Feasible designs in rank order, then infeasible ones by index.
    pub designs: Vec<RankedDesign>,
}

impl Evaluation {
    pub fn winner(&self) -> Option<&RankedDesign> {
        self.designs.first().filter(|d| d.feasible)
    }

    pub fn ranked(&self) -> &[RankedDesign] {
        &self.designs[..self.feasible]
    }
}

/// Sorts feasible designs by NPC, then COE, digest and index, and numbers
/// them from 1. Infeasible designs follow in index order.
pub fn rank_designs(mut designs: Vec<RankedDesign>) -> Vec<RankedDesign> {
    designs.sort_by(|a, b| {
        b.feasible.cmp(&a.feasible).then_with(|| {
            if a.feasible {
                a.npc()
                    .total_cmp(&b.npc())
                    .then_with(|| a.coe().total_cmp(&b.coe()))
                    .then_with(|| a.digest.cmp(&b.digest))
                    .then_with(|| a.index.cmp(&b.index))
            } else {
                a.index.cmp(&b.index)
            }
        })
    });
    for (k, d) in designs.iter_mut().enumerate() {
        d.rank = d.feasible.then_some(k + 1);
    }
    designs
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))
}

/// Evaluates the candidates at `indices`, in any order, with `jobs` workers
/// (0 picks one per core). The result depends only on the set of indices.
pub fn evaluate_indices(
    space: &SearchSpace,
    bundle: &SeriesBundle,
    indices: &[usize],
    jobs: usize,
) -> Result<Evaluation> {
    space.check()?;
    let count = space.count();
    if let Some(bad) = indices.iter().find(|&&k| k >= count) {
        return Err(Error::InvalidInput(format!(
            "candidate index {bad} out of range"
        )));
    }
    let mut evaluator = Evaluator {
        space,
        series: UnitSeries::new(space, bundle)?,
        base: None,
    };
    let base_case = space
        .base_case_sizes()
        .map(|sizes| evaluator.evaluate(usize::MAX, sizes));
    evaluator.base = base_case
        .as_ref()
        .and_then(|b| b.cost.clone().map(|c| (b.label.clone(), c)));

    let pool = thread_pool(jobs)?;
    let designs: Vec<RankedDesign> = pool.install(|| {
        indices
            .par_iter()
            .map(|&k| evaluator.evaluate(k, space.candidate_at(k)))
            .collect()
    });
    let designs = rank_designs(designs);
    let feasible = designs.iter().filter(|d| d.feasible).count();
    Ok(Evaluation {
        candidates: indices.len(),
        feasible,
        reliability_cap: space.reliability_cap,
        base_case,
        designs,
    })
}

/// Simulates, costs and ranks every candidate of the space.
pub fn evaluate_all(space: &SearchSpace, bundle: &SeriesBundle, jobs: usize) -> Result<Evaluation> {
    space.check()?;
    let indices: Vec<usize> = (0..space.count()).collect();
    evaluate_indices(space, bundle, &indices, jobs)
}

/// A single scenario, simulated with its trace and costed.
#[derive(Debug, Clone, PartialEq)]
pub struct Assessment {
    pub result: DispatchResult,
    pub design: RankedDesign,
}

/// Grid-only variant of a grid-connected scenario.
pub fn grid_only(cfg: &ScenarioConfig) -> Option<ScenarioConfig> {
    cfg.active_grid()?;
    Some(ScenarioConfig {
        pv: None,
        wind: None,
        bg: None,
        dg: None,
        battery: None,
        converter: None,
        ..cfg.clone()
    })
}

/// Simulates and costs one scenario. Indicators are computed against the
/// grid-only variant when the scenario has a grid connection.
pub fn assess(cfg: &ScenarioConfig, bundle: &SeriesBundle) -> Result<Assessment> {
    let report = validate_scenario(cfg);
    if let Some(first) = report.errors().next() {
        return Err(Error::InvalidInput(first.to_string()));
    }
    let result = simulate_year(cfg, bundle)?;
    let cost = cost_report(cfg, &result)?;
    let comparison = match grid_only(cfg) {
        Some(base_cfg) => {
            let base = simulate_year_with(&base_cfg, bundle, SimOptions::default())?;
            let base_cost = cost_report(&base_cfg, &base)?;
            Some(compare_to_base(
                &cost,
                &base_cost,
                &base_cfg.label(),
                &cfg.econ,
            )?)
        }
        None => None,
    };
    let sizes = DesignSizes::of(cfg);
    let unmet = result.unmet_fraction();
    let mut violations = Vec::new();
    if unmet > cfg.dispatch.max_unmet_frac + 1e-12 {
        violations.push(format!(
            "unmet fraction {unmet:.6} exceeds the reliability cap {}",
            cfg.dispatch.max_unmet_frac
        ));
    }
    let feasible = violations.is_empty();
    let design = RankedDesign {
        index: 0,
        digest: sizes.digest(),
        label: cfg.label(),
        sizes,
        dispatch: result.summary(),
        cost: Some(cost),
        emissions: compute_emissions(&result, &cfg.emissions),
        comparison,
        feasible,
        violations,
        rank: feasible.then_some(1),
    };
    Ok(Assessment { result, design })
}

const COMPONENT_AXES: [&str; 7] = ["pv", "wind", "bg", "dg", "battery", "converter", "grid"];

/// A scalar that a sensitivity sweep can vary.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepParameter {
    /// A numeric field of the space; component fields address the template.
    Field {
        path: String,
        pointer: Vec<String>,
    },
    GhiScale,
    WindScale,
    BiomassScale,
    LoadScale,
}

impl SweepParameter {
    /// Resolves a dotted path such as `dg.fuel_price_usd_per_l`,
    /// `econ.discount_rate_frac`, `resources.ghi_scale` or `load.scale`.
    pub fn parse(path: &str, space: &SearchSpace) -> Result<Self> {
        match path {
            "resources.ghi_scale" => return Ok(SweepParameter::GhiScale),
            "resources.wind_scale" => return Ok(SweepParameter::WindScale),
            "resources.biomass_scale" => return Ok(SweepParameter::BiomassScale),
            "load.scale" => return Ok(SweepParameter::LoadScale),
            _ => {}
        }
        let parts: Vec<&str> = path.split('.').collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(Error::UnknownParameter(path.to_string()));
        }
        let mut pointer: Vec<String> = Vec::new();
        pointer.push(parts[0].to_string());
        if COMPONENT_AXES.contains(&parts[0]) && parts.len() > 1 {
            pointer.push("template".to_string());
        }
        pointer.extend(parts[1..].iter().map(|p| p.to_string()));

        let value = serde_json::to_value(space).expect("space serializes");
        let mut node = &value;
        for key in &pointer {
            node = node
                .get(key.as_str())
                .ok_or_else(|| Error::UnknownParameter(path.to_string()))?;
        }
        if !node.is_number() {
            return Err(Error::UnknownParameter(path.to_string()));
        }
        Ok(SweepParameter::Field {
            path: path.to_string(),
            pointer,
        })
    }

    /// The space and series with this parameter set to `value`.
    pub fn apply(
        &self,
        space: &SearchSpace,
        bundle: &SeriesBundle,
        value: f64,
    ) -> Result<(SearchSpace, SeriesBundle)> {
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!(
                "sweep value {value} is not finite"
            )));
        }
        let mut bundle = bundle.clone();
        let scale_err = || Error::InvalidInput(format!("scale factor {value} must be ≥ 0"));
        match self {
            SweepParameter::Field { path, pointer } => {
                let mut root = serde_json::to_value(space).expect("space serializes");
                let mut node = &mut root;
                for key in pointer {
                    node = node
                        .get_mut(key.as_str())
                        .ok_or_else(|| Error::UnknownParameter(path.clone()))?;
                }
                let integral = node.is_u64() || node.is_i64();
                *node = if integral {
                    if value.fract() != 0.0 {
                        return Err(Error::InvalidInput(format!("{path} takes whole numbers")));
                    }
                    Value::from(value as i64)
                } else {
                    Value::from(value)
                };
                let space: SearchSpace = serde_json::from_value(root)
                    .map_err(|e| Error::InvalidInput(format!("{path} = {value}: {e}")))?;
                Ok((space, bundle))
            }
            SweepParameter::GhiScale => {
                if value < 0.0 {
                    return Err(scale_err());
                }
                bundle.ghi = bundle.ghi.map(|s| s.scaled(value));
                Ok((space.clone(), bundle))
            }
            SweepParameter::WindScale => {
                if value < 0.0 {
                    return Err(scale_err());
                }
                bundle.wind_speed = bundle.wind_speed.map(|s| s.scaled(value));
                Ok((space.clone(), bundle))
            }
            SweepParameter::BiomassScale => {
                if value < 0.0 {
                    return Err(scale_err());
                }
                bundle.biomass = bundle.biomass.map(|s| s.scaled(value));
                Ok((space.clone(), bundle))
            }
            SweepParameter::LoadScale => {
                if value < 0.0 {
                    return Err(scale_err());
                }
                bundle.load = bundle.load.scaled(value);
                Ok((space.clone(), bundle))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub parameter: String,
    pub value: f64,
    pub evaluation: Evaluation,
}

/// Winner of one sweep value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub feasible: usize,
    pub winner: Option<String>,
    pub label: Option<String>,
    pub npc: Option<f64>,
    pub coe: Option<f64>,
}

/// Re-runs the search once per value of `parameter`.
pub fn sensitivity_sweep(
    space: &SearchSpace,
    bundle: &SeriesBundle,
    parameter: &str,
    values: &[f64],
    jobs: usize,
) -> Result<Vec<SweepOutcome>> {
    let param = SweepParameter::parse(parameter, space)?;
    values
        .iter()
        .map(|&v| {
            let (s, b) = param.apply(space, bundle, v)?;
            Ok(SweepOutcome {
                parameter: parameter.to_string(),
                value: v,
                evaluation: evaluate_all(&s, &b, jobs)?,
            })
        })
        .collect()
}

pub fn sweep_winners(outcomes: &[SweepOutcome]) -> Vec<SweepRow> {
    outcomes
        .iter()
        .map(|o| {
            let w = o.evaluation.winner();
            SweepRow {
                value: o.value,
                feasible: o.evaluation.feasible,
                winner: w.map(|d| d.digest.clone()),
                label: w.map(|d| d.label.clone()),
                npc: w.map(|d| d.npc()),
                coe: w.map(|d| d.coe()),
            }
        })
        .collect()
}
