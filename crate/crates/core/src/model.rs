//! Component specifications, scenario configuration and validation.
//!
//! Units throughout: power in kW, energy in kWh, one slot is one hour and a
//! year is 8,760 slots. A component that is not part of a design is `None`;
//! a component with `rated_kw == 0` is present but empty.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HOURS_PER_YEAR: usize = 8_760;
pub const HOURS_PER_DAY: usize = 24;
pub const DAYS_PER_YEAR: usize = 365;

fn default_ref_irradiance() -> f64 {
    1.0
}
fn default_ref_cell_temp() -> f64 {
    25.0
}
fn default_noct() -> f64 {
    45.0
}
fn default_cuf() -> f64 {
    0.25
}
fn default_min_load_ratio() -> f64 {
    0.3
}
fn default_operating_hours() -> f64 {
    24.0
}
fn default_true() -> bool {
    true
}
fn default_unmet_cap() -> f64 {
    0.001
}
fn default_initial_soc() -> f64 {
    1.0
}

/// Capital, replacement and O&M figures shared by every costed component.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostFields {
    pub capital_usd: f64,
    pub replacement_usd: f64,
    pub om_usd_per_yr: f64,
    pub lifetime_yr: f64,
}

impl CostFields {
    pub fn scaled(&self, factor: f64) -> CostFields {
        CostFields {
            capital_usd: self.capital_usd * factor,
            replacement_usd: self.replacement_usd * factor,
            om_usd_per_yr: self.om_usd_per_yr * factor,
            lifetime_yr: self.lifetime_yr,
        }
    }
}

macro_rules! cost_accessors {
    ($ty:ty) => {
        impl $ty {
            pub fn cost(&self) -> CostFields {
                CostFields {
                    capital_usd: self.capital_usd,
                    replacement_usd: self.replacement_usd,
                    om_usd_per_yr: self.om_usd_per_yr,
                    lifetime_yr: self.lifetime_yr,
                }
            }

            pub fn set_cost(&mut self, cost: CostFields) {
                self.capital_usd = cost.capital_usd;
                self.replacement_usd = cost.replacement_usd;
                self.om_usd_per_yr = cost.om_usd_per_yr;
                self.lifetime_yr = cost.lifetime_yr;
            }
        }
    };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PvSpec {
    pub rated_kw: f64,
    pub derating: f64,
    #[serde(rename = "temp_coeff_per_degC")]
    pub temp_coeff_per_degc: f64,
    #[serde(default = "default_ref_irradiance")]
    pub ref_irradiance_kw_m2: f64,
    #[serde(rename = "ref_cell_temp_degC", default = "default_ref_cell_temp")]
    pub ref_cell_temp_degc: f64,
    #[serde(rename = "noct_degC", default = "default_noct")]
    pub noct_degc: f64,
    pub capital_usd: f64,
    pub replacement_usd: f64,
    pub om_usd_per_yr: f64,
    pub lifetime_yr: f64,
}
cost_accessors!(PvSpec);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindSpec {
    pub rated_kw: f64,
    pub cut_in_ms: f64,
    pub rated_ms: f64,
    pub cut_out_ms: f64,
    pub hub_height_m: f64,
    pub ref_height_m: f64,
    pub shear_alpha: f64,
    pub capital_usd: f64,
    pub replacement_usd: f64,
    pub om_usd_per_yr: f64,
    pub lifetime_yr: f64,
}
cost_accessors!(WindSpec);

/// Biomass generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BgSpec {
    pub rated_kw: f64,
    #[serde(default = "default_cuf")]
    pub cuf: f64,
    #[serde(default = "default_min_load_ratio")]
    pub min_load_ratio: f64,
    pub calorific_value_kj_per_kg: f64,
    pub conversion_eff: f64,
    #[serde(default = "default_operating_hours")]
    pub operating_hours_per_day: f64,
    pub capital_usd: f64,
    pub replacement_usd: f64,
    pub om_usd_per_yr: f64,
    pub lifetime_yr: f64,
    #[serde(default)]
    pub marginal_cost_usd_per_kwh: f64,
}
cost_accessors!(BgSpec);

/// Diesel generator with a linear fuel curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DgSpec {
    pub rated_kw: f64,
    pub fuel_intercept_l_per_h_per_kw: f64,
    pub fuel_slope_l_per_kwh: f64,
    #[serde(default = "default_min_load_ratio")]
    pub min_load_ratio: f64,
    pub fuel_price_usd_per_l: f64,
    pub capital_usd: f64,
    pub replacement_usd: f64,
    pub om_usd_per_yr: f64,
    pub lifetime_yr: f64,
}
cost_accessors!(DgSpec);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatterySpec {
    pub capacity_kwh_per_string: f64,
    /// Signed so that a negative count survives parsing and is reported by
    /// validation instead of failing deserialization.
    pub strings: i64,
    pub soc_min_frac: f64,
    pub charge_eff: f64,
    pub discharge_eff: f64,
    /// Bank-level limits; `None` means capacity / 4 per hour.
    #[serde(default)]
    pub max_charge_kw: Option<f64>,
    #[serde(default)]
    pub max_discharge_kw: Option<f64>,
    pub capital_usd: f64,
    pub replacement_usd: f64,
    pub om_usd_per_yr: f64,
    pub lifetime_yr: f64,
}
cost_accessors!(BatterySpec);

impl BatterySpec {
    pub fn capacity_kwh(&self) -> f64 {
        self.capacity_kwh_per_string * self.strings.max(0) as f64
    }

    pub fn soc_min_kwh(&self) -> f64 {
        self.capacity_kwh() * self.soc_min_frac
    }

    pub fn charge_limit_kw(&self) -> f64 {
        self.max_charge_kw.unwrap_or(self.capacity_kwh() / 4.0)
    }

    pub fn discharge_limit_kw(&self) -> f64 {
        self.max_discharge_kw.unwrap_or(self.capacity_kwh() / 4.0)
    }
}

/// Bidirectional converter between the DC bus (PV, battery) and the AC bus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConverterSpec {
    pub rated_kw: f64,
    pub efficiency: f64,
    pub capital_usd: f64,
    pub replacement_usd: f64,
    pub om_usd_per_yr: f64,
    pub lifetime_yr: f64,
}
cost_accessors!(ConverterSpec);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub purchase_usd_per_kwh: f64,
    #[serde(default)]
    pub sellback_usd_per_kwh: f64,
    pub max_purchase_kw: f64,
    #[serde(default)]
    pub max_sale_kw: f64,
    #[serde(default = "default_true")]
    pub present: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconParams {
    pub discount_rate_frac: f64,
    pub project_lifetime_yr: u32,
}

/// Mass of each tracked pollutant, in kg per unit of activity.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pollutants {
    pub co2: f64,
    pub co: f64,
    pub so2: f64,
    pub nox: f64,
}

impl Pollutants {
    pub fn scale(&self, k: f64) -> Pollutants {
        Pollutants {
            co2: self.co2 * k,
            co: self.co * k,
            so2: self.so2 * k,
            nox: self.nox * k,
        }
    }

    pub fn add(&self, o: &Pollutants) -> Pollutants {
        Pollutants {
            co2: self.co2 + o.co2,
            co: self.co + o.co,
            so2: self.so2 + o.so2,
            nox: self.nox + o.nox,
        }
    }

    pub fn values(&self) -> [f64; 4] {
        [self.co2, self.co, self.so2, self.nox]
    }
}

/// Combustion emission factors.
///
/// Defaults: the grid factors are back-solved from a 3,563,933 kWh/yr
/// purchase producing 2,252,534 kg CO2, 13.2 kg CO, 9,765 kg SO2 and
/// 4,893 kg NOx. Diesel factors assume 2.62 kg CO2 per litre and take the
/// other pollutants in the ratios observed for a 60 kW unit. Biomass is
/// biogenic and defaults to zero for every pollutant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmissionFactors {
    #[serde(default = "EmissionFactors::default_diesel")]
    pub diesel_kg_per_l: Pollutants,
    #[serde(default = "EmissionFactors::default_grid")]
    pub grid_kg_per_kwh: Pollutants,
    #[serde(default)]
    pub biomass_kg_per_kwh: Pollutants,
}

impl EmissionFactors {
    pub const GRID_CO2_KG_PER_KWH: f64 = 0.632;

    fn default_diesel() -> Pollutants {
        Pollutants {
            co2: 2.62,
            co: 0.006_47,
            so2: 0.005_26,
            nox: 0.057_7,
        }
    }

    fn default_grid() -> Pollutants {
        Pollutants {
            co2: Self::GRID_CO2_KG_PER_KWH,
            co: 3.70e-6,
            so2: 2.74e-3,
            nox: 1.373e-3,
        }
    }

    pub fn zero() -> Self {
        EmissionFactors {
            diesel_kg_per_l: Pollutants::default(),
            grid_kg_per_kwh: Pollutants::default(),
            biomass_kg_per_kwh: Pollutants::default(),
        }
    }
}

impl Default for EmissionFactors {
    fn default() -> Self {
        EmissionFactors {
            diesel_kg_per_l: Self::default_diesel(),
            grid_kg_per_kwh: Self::default_grid(),
            biomass_kg_per_kwh: Pollutants::default(),
        }
    }
}

/// Either a CSV file name (resolved against the resources directory) or
/// inline values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeriesSource {
    File(String),
    Values(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadSpec {
    /// 24 hourly values (kW), hour 0 first.
    pub shape: SeriesSource,
    /// Daily energy the shape is scaled to; `None` keeps the shape as given.
    #[serde(default)]
    pub kwh_per_day: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceSpec {
    /// Monthly mean daily GHI, kWh/m²/day.
    #[serde(default)]
    pub ghi: Option<SeriesSource>,
    /// Monthly mean wind speed at the measurement height, m/s.
    #[serde(default)]
    pub wind: Option<SeriesSource>,
    /// Monthly mean available feedstock, kg/day. Absent means unlimited.
    #[serde(default)]
    pub biomass: Option<SeriesSource>,
    /// Monthly mean ambient temperature, °C. Absent means 20 °C.
    #[serde(default)]
    pub temperature: Option<SeriesSource>,
    /// Enables the mean-preserving diurnal wind perturbation.
    #[serde(default)]
    pub wind_seed: Option<u64>,
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum DispatchStrategy {
    #[default]
    LoadFollowing,
}

impl fmt::Display for DispatchStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DispatchStrategy::LoadFollowing => f.write_str("load_following"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispatchSpec {
    #[serde(default)]
    pub strategy: DispatchStrategy,
    /// Reliability cap: largest tolerated unmet fraction of annual demand.
    #[serde(default = "default_unmet_cap")]
    pub max_unmet_frac: f64,
    #[serde(default = "default_initial_soc")]
    pub initial_soc_frac: f64,
}

impl Default for DispatchSpec {
    fn default() -> Self {
        DispatchSpec {
            strategy: DispatchStrategy::default(),
            max_unmet_frac: default_unmet_cap(),
            initial_soc_frac: default_initial_soc(),
        }
    }
}

/// One candidate system, as read from a scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub pv: Option<PvSpec>,
    #[serde(default)]
    pub wind: Option<WindSpec>,
    #[serde(default)]
    pub bg: Option<BgSpec>,
    #[serde(default)]
    pub dg: Option<DgSpec>,
    #[serde(default)]
    pub battery: Option<BatterySpec>,
    #[serde(default)]
    pub converter: Option<ConverterSpec>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    pub econ: EconParams,
    #[serde(default)]
    pub emissions: EmissionFactors,
    pub load: LoadSpec,
    #[serde(default)]
    pub resources: ResourceSpec,
    #[serde(default)]
    pub dispatch: DispatchSpec,
}

impl ScenarioConfig {
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

    /// The grid spec when a connection exists and is enabled.
    pub fn active_grid(&self) -> Option<&GridSpec> {
        self.grid.as_ref().filter(|g| g.present)
    }

    /// Short design label such as `PV/BG/batt/conv`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.pv.is_some() {
            parts.push("PV");
        }
        if self.wind.is_some() {
            parts.push("WP");
        }
        if self.bg.is_some() {
            parts.push("BG");
        }
        if self.dg.is_some() {
            parts.push("DG");
        }
        if self.battery.is_some() {
            parts.push("batt");
        }
        if self.active_grid().is_some() {
            parts.push("Grid");
        }
        if self.converter.is_some() {
            parts.push("conv");
        }
        if parts.is_empty() {
            "none".to_string()
        } else {
            parts.join("/")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
    pub severity: Severity,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}: {}", self.path, self.message)
    }
}

/// Ordered list of invariant violations. A report with no errors (warnings
/// allowed) describes a simulable scenario.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| v.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| v.severity == Severity::Warning)
    }

    pub fn mentions(&self, needle: &str) -> bool {
        self.violations
            .iter()
            .any(|v| v.message.contains(needle) || v.path.contains(needle))
    }
}

struct Checker {
    out: Vec<Violation>,
}

impl Checker {
    fn require(&mut self, ok: bool, path: &str, message: &str) {
        if !ok {
            self.out.push(Violation {
                path: path.to_string(),
                message: message.to_string(),
                severity: Severity::Error,
            });
        }
    }

    fn warn(&mut self, ok: bool, path: &str, message: &str) {
        if !ok {
            self.out.push(Violation {
                path: path.to_string(),
                message: message.to_string(),
                severity: Severity::Warning,
            });
        }
    }

    fn non_negative(&mut self, v: f64, path: &str) {
        self.require(v.is_finite() && v >= 0.0, path, "must be finite and ≥ 0");
    }

    fn fraction(&mut self, v: f64, path: &str) {
        self.require((0.0..=1.0).contains(&v), path, "must lie in [0, 1]");
    }

    fn efficiency(&mut self, v: f64, path: &str) {
        self.require(v > 0.0 && v <= 1.0, path, "must lie in (0, 1]");
    }

    fn cost(&mut self, c: CostFields, prefix: &str) {
        self.non_negative(c.capital_usd, &format!("{prefix}.capital_usd"));
        self.non_negative(c.replacement_usd, &format!("{prefix}.replacement_usd"));
        self.non_negative(c.om_usd_per_yr, &format!("{prefix}.om_usd_per_yr"));
        self.require(
            c.lifetime_yr.is_finite() && c.lifetime_yr > 0.0,
            &format!("{prefix}.lifetime_yr"),
            "must be > 0",
        );
    }

    fn pollutants(&mut self, p: &Pollutants, prefix: &str) {
        self.non_negative(p.co2, &format!("{prefix}.co2"));
        self.non_negative(p.co, &format!("{prefix}.co"));
        self.non_negative(p.so2, &format!("{prefix}.so2"));
        self.non_negative(p.nox, &format!("{prefix}.nox"));
    }
}

/// Checks every component and scenario invariant, in a fixed order.
pub fn validate_scenario(cfg: &ScenarioConfig) -> ValidationReport {
    let mut c = Checker { out: Vec::new() };

    if let Some(pv) = &cfg.pv {
        c.non_negative(pv.rated_kw, "pv.rated_kw");
        c.fraction(pv.derating, "pv.derating");
        c.require(
            pv.ref_irradiance_kw_m2 > 0.0,
            "pv.ref_irradiance_kw_m2",
            "must be > 0",
        );
        c.require(pv.noct_degc >= 20.0, "pv.noct_degC", "must be ≥ 20");
        c.cost(pv.cost(), "pv");
        c.require(
            cfg.resources.ghi.is_some(),
            "resources.ghi",
            "GHI resource required when PV is present",
        );
    }

    if let Some(w) = &cfg.wind {
        c.non_negative(w.rated_kw, "wind.rated_kw");
        c.require(
            0.0 < w.cut_in_ms && w.cut_in_ms < w.rated_ms && w.rated_ms < w.cut_out_ms,
            "wind.cut_in_ms",
            "speeds must satisfy 0 < cut_in < rated < cut_out",
        );
        c.require(
            (0.1..=0.4).contains(&w.shear_alpha),
            "wind.shear_alpha",
            "must lie in [0.1, 0.4]",
        );
        c.require(w.hub_height_m > 0.0, "wind.hub_height_m", "must be > 0");
        c.require(w.ref_height_m > 0.0, "wind.ref_height_m", "must be > 0");
        c.cost(w.cost(), "wind");
        c.require(
            cfg.resources.wind.is_some(),
            "resources.wind",
            "wind resource required when a turbine is present",
        );
    }

    if let Some(bg) = &cfg.bg {
        c.non_negative(bg.rated_kw, "bg.rated_kw");
        c.fraction(bg.cuf, "bg.cuf");
        c.require(
            (0.0..1.0).contains(&bg.min_load_ratio),
            "bg.min_load_ratio",
            "must lie in [0, 1)",
        );
        c.require(
            bg.calorific_value_kj_per_kg > 0.0,
            "bg.calorific_value_kj_per_kg",
            "must be > 0",
        );
        c.efficiency(bg.conversion_eff, "bg.conversion_eff");
        c.require(
            bg.operating_hours_per_day > 0.0 && bg.operating_hours_per_day <= 24.0,
            "bg.operating_hours_per_day",
            "must lie in (0, 24]",
        );
        c.non_negative(bg.marginal_cost_usd_per_kwh, "bg.marginal_cost_usd_per_kwh");
        c.cost(bg.cost(), "bg");
    }

    if let Some(dg) = &cfg.dg {
        c.non_negative(dg.rated_kw, "dg.rated_kw");
        c.non_negative(
            dg.fuel_intercept_l_per_h_per_kw,
            "dg.fuel_intercept_l_per_h_per_kw",
        );
        c.non_negative(dg.fuel_slope_l_per_kwh, "dg.fuel_slope_l_per_kwh");
        c.require(
            (0.0..1.0).contains(&dg.min_load_ratio),
            "dg.min_load_ratio",
            "must lie in [0, 1)",
        );
        c.non_negative(dg.fuel_price_usd_per_l, "dg.fuel_price_usd_per_l");
        c.cost(dg.cost(), "dg");
    }

    if let Some(b) = &cfg.battery {
        c.require(b.strings >= 0, "battery.strings", "strings ≥ 0");
        c.require(
            b.capacity_kwh_per_string > 0.0,
            "battery.capacity_kwh_per_string",
            "must be > 0",
        );
        c.require(
            (0.0..1.0).contains(&b.soc_min_frac),
            "battery.soc_min_frac",
            "must lie in [0, 1)",
        );
        c.efficiency(b.charge_eff, "battery.charge_eff");
        c.efficiency(b.discharge_eff, "battery.discharge_eff");
        if let Some(v) = b.max_charge_kw {
            c.non_negative(v, "battery.max_charge_kw");
        }
        if let Some(v) = b.max_discharge_kw {
            c.non_negative(v, "battery.max_discharge_kw");
        }
        c.require(
            cfg.dispatch.initial_soc_frac >= b.soc_min_frac,
            "dispatch.initial_soc_frac",
            "initial SOC must not be below the battery minimum",
        );
        c.cost(b.cost(), "battery");
    }

    if let Some(conv) = &cfg.converter {
        c.non_negative(conv.rated_kw, "converter.rated_kw");
        c.efficiency(conv.efficiency, "converter.efficiency");
        c.cost(conv.cost(), "converter");
    }

    if let Some(g) = &cfg.grid {
        c.non_negative(g.purchase_usd_per_kwh, "grid.purchase_usd_per_kwh");
        c.non_negative(g.sellback_usd_per_kwh, "grid.sellback_usd_per_kwh");
        c.non_negative(g.max_purchase_kw, "grid.max_purchase_kw");
        c.non_negative(g.max_sale_kw, "grid.max_sale_kw");
        c.warn(
            g.sellback_usd_per_kwh <= g.purchase_usd_per_kwh,
            "grid.sellback_usd_per_kwh",
            "sellback price exceeds purchase price",
        );
    }

    c.non_negative(cfg.econ.discount_rate_frac, "econ.discount_rate_frac");
    c.require(
        cfg.econ.project_lifetime_yr >= 1,
        "econ.project_lifetime_yr",
        "must be ≥ 1",
    );

    c.pollutants(&cfg.emissions.diesel_kg_per_l, "emissions.diesel_kg_per_l");
    c.pollutants(&cfg.emissions.grid_kg_per_kwh, "emissions.grid_kg_per_kwh");
    c.pollutants(
        &cfg.emissions.biomass_kg_per_kwh,
        "emissions.biomass_kg_per_kwh",
    );

    if let Some(kwh) = cfg.load.kwh_per_day {
        c.non_negative(kwh, "load.kwh_per_day");
    }
    c.fraction(cfg.dispatch.max_unmet_frac, "dispatch.max_unmet_frac");
    c.fraction(cfg.dispatch.initial_soc_frac, "dispatch.initial_soc_frac");

    let has_source = cfg.pv.is_some()
        || cfg.wind.is_some()
        || cfg.bg.is_some()
        || cfg.dg.is_some()
        || cfg.active_grid().is_some();
    c.require(
        has_source,
        "scenario",
        "at least one generation source required",
    );

    let has_dc = cfg.pv.is_some() || cfg.battery.is_some();
    c.require(
        !has_dc || cfg.converter.is_some(),
        "converter",
        "converter required when PV or battery serves the AC load",
    );

    ValidationReport { violations: c.out }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn econ() -> EconParams {
        EconParams {
            discount_rate_frac: 0.08,
            project_lifetime_yr: 25,
        }
    }

    pub fn pv(rated_kw: f64) -> PvSpec {
        PvSpec {
            rated_kw,
            derating: 0.8,
            temp_coeff_per_degc: -0.004,
            ref_irradiance_kw_m2: 1.0,
            ref_cell_temp_degc: 25.0,
            noct_degc: 45.0,
            capital_usd: 1000.0 * rated_kw,
            replacement_usd: 1000.0 * rated_kw,
            om_usd_per_yr: 10.0 * rated_kw,
            lifetime_yr: 25.0,
        }
    }

    pub fn wind(rated_kw: f64) -> WindSpec {
        WindSpec {
            rated_kw,
            cut_in_ms: 3.0,
            rated_ms: 12.0,
            cut_out_ms: 24.0,
            hub_height_m: 40.0,
            ref_height_m: 10.0,
            shear_alpha: 0.14,
            capital_usd: 2500.0 * rated_kw,
            replacement_usd: 2000.0 * rated_kw,
            om_usd_per_yr: 30.0 * rated_kw,
            lifetime_yr: 20.0,
        }
    }

    pub fn bg(rated_kw: f64) -> BgSpec {
        BgSpec {
            rated_kw,
            cuf: 1.0,
            min_load_ratio: 0.3,
            calorific_value_kj_per_kg: 15_000.0,
            conversion_eff: 0.2,
            operating_hours_per_day: 24.0,
            capital_usd: 1000.0 * rated_kw,
            replacement_usd: 1000.0 * rated_kw,
            om_usd_per_yr: 0.0,
            lifetime_yr: 25.0,
            marginal_cost_usd_per_kwh: 0.0,
        }
    }

    pub fn dg(rated_kw: f64) -> DgSpec {
        DgSpec {
            rated_kw,
            fuel_intercept_l_per_h_per_kw: 0.08,
            fuel_slope_l_per_kwh: 0.25,
            min_load_ratio: 0.3,
            fuel_price_usd_per_l: 1.0,
            capital_usd: 358.0 * rated_kw,
            replacement_usd: 358.0 * rated_kw,
            om_usd_per_yr: 0.0,
            lifetime_yr: 15.0,
        }
    }

    pub fn battery(strings: i64) -> BatterySpec {
        BatterySpec {
            capacity_kwh_per_string: 1.0,
            strings,
            soc_min_frac: 0.4,
            charge_eff: 0.9,
            discharge_eff: 0.9,
            max_charge_kw: None,
            max_discharge_kw: None,
            capital_usd: 500.0 * strings as f64,
            replacement_usd: 500.0 * strings as f64,
            om_usd_per_yr: 10.0 * strings as f64,
            lifetime_yr: 10.0,
        }
    }

    pub fn converter(rated_kw: f64) -> ConverterSpec {
        ConverterSpec {
            rated_kw,
            efficiency: 0.95,
            capital_usd: 300.0 * rated_kw,
            replacement_usd: 300.0 * rated_kw,
            om_usd_per_yr: 0.0,
            lifetime_yr: 15.0,
        }
    }

    pub fn grid() -> GridSpec {
        GridSpec {
            purchase_usd_per_kwh: 0.1,
            sellback_usd_per_kwh: 0.0,
            max_purchase_kw: 999_999.0,
            max_sale_kw: 0.0,
            present: true,
        }
    }

    pub fn scenario() -> ScenarioConfig {
        ScenarioConfig {
            pv: None,
            wind: None,
            bg: None,
            dg: None,
            battery: None,
            converter: None,
            grid: None,
            econ: econ(),
            emissions: EmissionFactors::default(),
            load: LoadSpec {
                shape: SeriesSource::Values(vec![1.0; 24]),
                kwh_per_day: None,
            },
            resources: ResourceSpec::default(),
            dispatch: DispatchSpec::default(),
        }
    }
}
