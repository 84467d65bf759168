//! Lifetime economics: capital recovery, annualized component costs, NPC,
//! COE, and the indicators of a candidate against a base case.

use serde::{Deserialize, Serialize};

use crate::dispatch::DispatchResult;
use crate::error::{Error, Result};
use crate::model::{CostFields, EconParams, ScenarioConfig};

/// Capital recovery factor `i(1+i)^n / ((1+i)^n − 1)`, `1/n` at `i = 0`.
pub fn crf(i: f64, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "project lifetime must be ≥ 1 year".into(),
        ));
    }
    if i == 0.0 {
        return Ok(1.0 / n as f64);
    }
    let g = (1.0 + i).powi(n as i32);
    Ok(i * g / (g - 1.0))
}

/// Discount rate whose CRF over `n` years equals `target`.
pub fn calibrate_discount_rate(target_crf: f64, n: u32) -> Result<f64> {
    let lo_crf = crf(0.0, n)?;
    if target_crf < lo_crf {
        return Err(Error::InvalidInput(format!(
            "CRF {target_crf} is below its zero-rate value {lo_crf}"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while crf(hi, n)? < target_crf {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if crf(mid, n)? < target_crf {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn discount(i: f64, t: f64) -> f64 {
    (1.0 + i).powf(-t)
}

/// Annual cost breakdown of one component, $/yr unless noted.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AnnualizedCost {
    pub name: String,
    /// Up-front capital, $.
    pub capital_usd: f64,
    pub capital: f64,
    pub replacement: f64,
    pub om: f64,
    pub fuel: f64,
    pub salvage: f64,
    pub total: f64,
}

/// Replacement years and salvage fraction for a component of life `life`
/// over a project of `n` years.
fn replacement_schedule(life: f64, n: u32) -> (Vec<f64>, f64) {
    let n = n as f64;
    let mut years = Vec::new();
    let mut k = 1.0;
    while k * life < n - 1e-9 {
        years.push(k * life);
        k += 1.0;
    }
    let last_install = years.last().copied().unwrap_or(0.0);
    let remaining = (life - (n - last_install)).max(0.0);
    (years, remaining / life)
}

/// Capital annuity plus the annuity of replacements within the project,
/// O&M and fuel, less the annuity of the straight-line salvage value of the
/// last unit at project end.
pub fn annualize_component(
    cost: &CostFields,
    fuel_usd_per_yr: f64,
    econ: &EconParams,
) -> Result<AnnualizedCost> {
    if cost.lifetime_yr.is_nan() || cost.lifetime_yr <= 0.0 {
        return Err(Error::InvalidInput("component lifetime must be > 0".into()));
    }
    let i = econ.discount_rate_frac;
    let n = econ.project_lifetime_yr;
    let f = crf(i, n)?;
    let (years, salvage_frac) = replacement_schedule(cost.lifetime_yr, n);
    let replacement_pv = years
        .iter()
        .fold(0.0, |acc, &t| acc + cost.replacement_usd * discount(i, t));
    let salvage_pv = cost.replacement_usd * salvage_frac * discount(i, n as f64);

    let capital = cost.capital_usd * f;
    let replacement = replacement_pv * f;
    let salvage = salvage_pv * f;
    Ok(AnnualizedCost {
        name: String::new(),
        capital_usd: cost.capital_usd,
        capital,
        replacement,
        om: cost.om_usd_per_yr,
        fuel: fuel_usd_per_yr,
        salvage,
        total: capital + replacement + cost.om_usd_per_yr + fuel_usd_per_yr - salvage,
    })
}

/// `npc = c_ann / CRF`, `coe = c_ann / e_served`.
pub fn npc_and_coe(
    c_ann_tot: f64,
    e_served_kwh_per_yr: f64,
    econ: &EconParams,
) -> Result<(f64, f64)> {
    if e_served_kwh_per_yr.is_nan() || e_served_kwh_per_yr <= 0.0 {
        return Err(Error::Undefined("COE with zero served energy"));
    }
    let f = crf(econ.discount_rate_frac, econ.project_lifetime_yr)?;
    Ok((c_ann_tot / f, c_ann_tot / e_served_kwh_per_yr))
}

/// Lifetime cost summary of one design.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CostReport {
    pub crf: f64,
    pub components: Vec<AnnualizedCost>,
    pub c_ann_tot: f64,
    pub npc: f64,
    pub coe: f64,
    pub e_served_kwh: f64,
    pub initial_cost: f64,
    /// Total annualized cost less the capital annuity, $/yr.
    pub operating_cost: f64,
    /// O&M, fuel and net grid cost of a typical year, $/yr.
    pub recurring_cost: f64,
    /// Nominal cash outlays for years 0..=n (salvage is negative).
    pub cash_flows: Vec<f64>,
}

impl CostReport {
    pub fn component(&self, name: &str) -> Option<&AnnualizedCost> {
        self.components.iter().find(|c| c.name == name)
    }

    fn sum(&self, f: impl Fn(&AnnualizedCost) -> f64) -> f64 {
        self.components.iter().map(f).sum()
    }

    pub fn annualized_capital(&self) -> f64 {
        self.sum(|c| c.capital)
    }

    pub fn annualized_replacement(&self) -> f64 {
        self.sum(|c| c.replacement)
    }

    pub fn om(&self) -> f64 {
        self.sum(|c| c.om)
    }

    pub fn fuel(&self) -> f64 {
        self.sum(|c| c.fuel)
    }

    pub fn annualized_salvage(&self) -> f64 {
        self.sum(|c| c.salvage)
    }
}

fn add_cash_flows(flows: &mut [f64], cost: &CostFields, recurring: f64, n: u32) {
    flows[0] += cost.capital_usd;
    for f in &mut flows[1..=n as usize] {
        *f += recurring;
    }
    let (years, salvage_frac) = replacement_schedule(cost.lifetime_yr, n);
    for t in years {
        let y = (t.round() as usize).clamp(1, n as usize);
        flows[y] += cost.replacement_usd;
    }
    flows[n as usize] -= cost.replacement_usd * salvage_frac;
}

/// Costs a simulated design. The grid is carried as an O&M-only component
/// whose yearly cost is purchases less sales.
pub fn cost_report(cfg: &ScenarioConfig, result: &DispatchResult) -> Result<CostReport> {
    let econ = &cfg.econ;
    let n = econ.project_lifetime_yr;
    let f = crf(econ.discount_rate_frac, n)?;

    let mut entries: Vec<(&str, CostFields, f64)> = Vec::new();
    if let Some(pv) = &cfg.pv {
        entries.push(("PV", pv.cost(), 0.0));
    }
    if let Some(w) = &cfg.wind {
        entries.push(("WP", w.cost(), 0.0));
    }
    if let Some(bg) = &cfg.bg {
        entries.push((
            "BG",
            bg.cost(),
            result.bg_kwh * bg.marginal_cost_usd_per_kwh,
        ));
    }
    if let Some(dg) = &cfg.dg {
        entries.push(("DG", dg.cost(), result.dg_fuel_l * dg.fuel_price_usd_per_l));
    }
    if let Some(b) = &cfg.battery {
        entries.push(("batt", b.cost(), 0.0));
    }
    if let Some(c) = &cfg.converter {
        entries.push(("conv", c.cost(), 0.0));
    }
    if let Some(g) = cfg.active_grid() {
        let net = result.grid_purchase_kwh * g.purchase_usd_per_kwh
            - result.grid_sale_kwh * g.sellback_usd_per_kwh;
        entries.push((
            "Grid",
            CostFields {
                om_usd_per_yr: net,
                lifetime_yr: n as f64,
                ..CostFields::default()
            },
            0.0,
        ));
    }

    let mut components = Vec::with_capacity(entries.len());
    let mut cash_flows = vec![0.0; n as usize + 1];
    for (name, cost, fuel) in entries {
        let mut a = annualize_component(&cost, fuel, econ)?;
        a.name = name.to_string();
        add_cash_flows(&mut cash_flows, &cost, cost.om_usd_per_yr + fuel, n);
        components.push(a);
    }

    let c_ann_tot: f64 = components.iter().map(|c| c.total).sum();
    let (npc, coe) = npc_and_coe(c_ann_tot, result.load_served_kwh, econ)?;
    let initial_cost: f64 = components.iter().map(|c| c.capital_usd).sum();
    let capital_annuity: f64 = components.iter().map(|c| c.capital).sum();
    let recurring_cost: f64 = components.iter().map(|c| c.om + c.fuel).sum();
    Ok(CostReport {
        crf: f,
        components,
        c_ann_tot,
        npc,
        coe,
        e_served_kwh: result.load_served_kwh,
        initial_cost,
        operating_cost: c_ann_tot - capital_annuity,
        recurring_cost,
        cash_flows,
    })
}

/// Net present value of `flows[t]` at `t = 0, 1, …`.
pub fn npv(rate: f64, flows: &[f64]) -> f64 {
    let d = 1.0 / (1.0 + rate);
    let mut factor = 1.0;
    let mut total = 0.0;
    for &c in flows {
        total += c * factor;
        factor *= d;
    }
    total
}

/// Rate in [−0.99, 10] at which the NPV of `flows` is zero, by bisection.
/// `None` when the NPV has the same sign at both ends.
pub fn irr(flows: &[f64]) -> Option<f64> {
    let (mut lo, mut hi) = (-0.99f64, 10.0f64);
    let mut f_lo = npv(lo, flows);
    let f_hi = npv(hi, flows);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = npv(mid, flows);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * (1.0 + lo.abs()) {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Indicators of a candidate relative to a base case.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub base_case: String,
    pub differential_capital: f64,
    pub annual_saving: f64,
    pub present_worth: f64,
    pub annual_worth: f64,
    pub roi_frac: f64,
    pub irr_frac: Option<f64>,
    pub simple_payback_yr: Option<f64>,
    pub discounted_payback_yr: Option<f64>,
}

/// Differential flows are base minus candidate, year by year; year 0 holds
/// minus the differential capital.
pub fn compare_to_base(
    candidate: &CostReport,
    base: &CostReport,
    base_case: &str,
    econ: &EconParams,
) -> Result<ComparisonReport> {
    if candidate.cash_flows.len() != base.cash_flows.len() {
        return Err(Error::InvalidInput(
            "candidate and base case have different project lifetimes".into(),
        ));
    }
    let i = econ.discount_rate_frac;
    let f = crf(i, econ.project_lifetime_yr)?;
    let diff: Vec<f64> = base
        .cash_flows
        .iter()
        .zip(&candidate.cash_flows)
        .map(|(b, c)| b - c)
        .collect();
    let dcap = -diff[0];
    let years = diff.len() - 1;
    let mean_saving = diff[1..].iter().sum::<f64>() / years as f64;
    let annual_saving = base.recurring_cost - candidate.recurring_cost;

    let present_worth = npv(i, &diff);
    let roi_frac = if dcap != 0.0 { mean_saving / dcap } else { 0.0 };
    let irr_frac = if diff.iter().all(|d| *d == 0.0) {
        None
    } else {
        irr(&diff)
    };

    let simple_payback_yr = if dcap == 0.0 {
        None
    } else if dcap < 0.0 {
        (annual_saving >= 0.0).then_some(0.0)
    } else if annual_saving > 0.0 {
        Some(dcap / annual_saving)
    } else {
        None
    };

    let discounted_payback_yr = if dcap == 0.0 {
        None
    } else if dcap < 0.0 {
        Some(0.0)
    } else {
        let mut cum = 0.0;
        let mut found = None;
        for (k, d) in diff.iter().enumerate().skip(1) {
            let step = d * discount(i, k as f64);
            if cum + step >= dcap && step > 0.0 {
                found = Some((k - 1) as f64 + (dcap - cum) / step);
                break;
            }
            cum += step;
        }
        found
    };

    Ok(ComparisonReport {
        base_case: base_case.to_string(),
        differential_capital: dcap,
        annual_saving,
        present_worth,
        annual_worth: present_worth * f,
        roi_frac,
        irr_frac,
        simple_payback_yr,
        discounted_payback_yr,
    })
}
