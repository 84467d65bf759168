//! Hour-by-hour energy balance.
//!
//! Two buses: AC (load, wind, biomass, diesel, grid) and DC (PV, battery),
//! joined by one converter whose rating caps the AC-side power crossing it
//! in either direction per slot. Under load following, demand is served by
//! wind, then PV through the inverter, then battery discharge, then the
//! biomass generator, the diesel generator, and grid purchases; whatever is
//! left is unmet. Surplus charges the battery, is sold, and is otherwise
//! dumped as excess.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::SeriesBundle;
use crate::model::{BatterySpec, DispatchStrategy, ScenarioConfig, HOURS_PER_DAY, HOURS_PER_YEAR};
use crate::power::{
    bg_feedstock_for, bg_output_from_feedstock, cell_temperature, pv_output, wind_output,
    wind_speed_at_hub, CellTempModel,
};

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatteryState {
    pub soc_kwh: f64,
    pub capacity_kwh: f64,
}

/// Outcome of one battery update. Amounts are at the battery terminals and
/// already reduced by any SOC clamp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryUpdate {
    pub state: BatteryState,
    pub charge_accepted_kwh: f64,
    pub discharge_delivered_kwh: f64,
}

/// `soc' = soc + charge·η_c − discharge/η_d`, clamped to
/// `[soc_min, capacity]`. A clamp shrinks the accepted charge or the
/// delivered discharge, so no energy disappears silently.
pub fn battery_update(
    state: BatteryState,
    charge_kwh: f64,
    discharge_kwh: f64,
    spec: &BatterySpec,
) -> Result<BatteryUpdate> {
    if charge_kwh > 0.0 && discharge_kwh > 0.0 {
        return Err(Error::SimultaneousChargeDischarge);
    }
    let soc_min = state.capacity_kwh * spec.soc_min_frac;
    let mut charge = charge_kwh.max(0.0);
    let mut discharge = discharge_kwh.max(0.0);
    let mut soc = state.soc_kwh + charge * spec.charge_eff - discharge / spec.discharge_eff;
    if soc > state.capacity_kwh {
        charge = ((state.capacity_kwh - state.soc_kwh) / spec.charge_eff).max(0.0);
        soc = state.capacity_kwh.max(state.soc_kwh);
    }
    if soc < soc_min {
        discharge = ((state.soc_kwh - soc_min) * spec.discharge_eff).max(0.0);
        soc = soc_min.min(state.soc_kwh);
    }
    Ok(BatteryUpdate {
        state: BatteryState {
            soc_kwh: soc,
            capacity_kwh: state.capacity_kwh,
        },
        charge_accepted_kwh: charge,
        discharge_delivered_kwh: discharge,
    })
}

/// Source availability in one slot, kW (equivalently kWh over the hour).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SlotInputs {
    pub load_kw: f64,
    /// DC output of the array.
    pub pv_kw: f64,
    pub wind_kw: f64,
    /// Biomass output the available feedstock could sustain.
    pub bg_feedstock_cap_kw: f64,
}

/// Energy flows of one slot, kWh.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SlotLedger {
    pub load: f64,
    pub served: f64,
    pub pv: f64,
    pub wind: f64,
    pub bg: f64,
    pub dg: f64,
    pub grid_buy: f64,
    pub grid_sell: f64,
    /// Energy into the battery terminals.
    pub charge: f64,
    /// Energy out of the battery terminals.
    pub discharge: f64,
    /// State of charge at the end of the slot.
    pub soc: f64,
    pub unmet: f64,
    pub excess: f64,
    pub conversion_loss: f64,
    pub dg_fuel_l: f64,
    pub bg_feedstock_kg: f64,
}

impl SlotLedger {
    pub fn supply(&self) -> f64 {
        self.pv + self.wind + self.bg + self.dg + self.grid_buy + self.discharge
    }

    pub fn sinks(&self) -> f64 {
        self.served + self.charge + self.grid_sell + self.excess + self.conversion_loss
    }

    /// Supply minus sinks; zero up to rounding.
    pub fn balance_residual(&self) -> f64 {
        self.supply() - self.sinks()
    }
}

/// Scenario parameters flattened for the inner loop.
#[derive(Debug, Clone)]
pub struct Plant {
    strategy: DispatchStrategy,
    conv_kw: f64,
    conv_eff: f64,
    battery: Option<BatteryParams>,
    bg: Option<GenParams>,
    bg_daily_budget_kwh: f64,
    bg_kg_per_kwh: f64,
    dg: Option<GenParams>,
    dg_f1: f64,
    dg_f2: f64,
    grid_buy_kw: Option<f64>,
    grid_sell_kw: f64,
    initial_soc_frac: f64,
}

#[derive(Debug, Clone)]
struct BatteryParams {
    spec: BatterySpec,
    capacity_kwh: f64,
    soc_min_kwh: f64,
    max_charge_kw: f64,
    max_discharge_kw: f64,
}

#[derive(Debug, Clone, Copy)]
struct GenParams {
    rated_kw: f64,
    min_kw: f64,
}

impl Plant {
    pub fn new(cfg: &ScenarioConfig) -> Self {
        let (conv_kw, conv_eff) = cfg
            .converter
            .as_ref()
            .map(|c| (c.rated_kw, c.efficiency))
            .unwrap_or((0.0, 1.0));
        let battery = cfg.battery.as_ref().map(|b| BatteryParams {
            spec: b.clone(),
            capacity_kwh: b.capacity_kwh(),
            soc_min_kwh: b.soc_min_kwh(),
            max_charge_kw: b.charge_limit_kw(),
            max_discharge_kw: b.discharge_limit_kw(),
        });
        let bg = cfg.bg.as_ref().map(|b| GenParams {
            rated_kw: b.rated_kw,
            min_kw: b.rated_kw * b.min_load_ratio,
        });
        let dg = cfg.dg.as_ref().map(|d| GenParams {
            rated_kw: d.rated_kw,
            min_kw: d.rated_kw * d.min_load_ratio,
        });
        Plant {
            strategy: cfg.dispatch.strategy,
            conv_kw,
            conv_eff,
            battery,
            bg,
            bg_daily_budget_kwh: cfg
                .bg
                .as_ref()
                .map(|b| b.rated_kw * b.cuf * b.operating_hours_per_day)
                .unwrap_or(0.0),
            bg_kg_per_kwh: cfg
                .bg
                .as_ref()
                .map(|b| bg_feedstock_for(b, 1.0))
                .unwrap_or(0.0),
            dg,
            dg_f1: cfg
                .dg
                .as_ref()
                .map(|d| d.fuel_intercept_l_per_h_per_kw)
                .unwrap_or(0.0),
            dg_f2: cfg
                .dg
                .as_ref()
                .map(|d| d.fuel_slope_l_per_kwh)
                .unwrap_or(0.0),
            grid_buy_kw: cfg.active_grid().map(|g| g.max_purchase_kw),
            grid_sell_kw: cfg.active_grid().map(|g| g.max_sale_kw).unwrap_or(0.0),
            initial_soc_frac: cfg.dispatch.initial_soc_frac,
        }
    }

    pub fn initial_state(&self) -> PlantState {
        PlantState {
            battery: self.battery.as_ref().map(|b| BatteryState {
                soc_kwh: (b.capacity_kwh * self.initial_soc_frac)
                    .clamp(b.soc_min_kwh, b.capacity_kwh),
                capacity_kwh: b.capacity_kwh,
            }),
            bg_budget_kwh: self.bg_daily_budget_kwh,
        }
    }

    /// Resets the daily biomass energy budget.
    pub fn start_day(&self, state: &mut PlantState) {
        state.bg_budget_kwh = self.bg_daily_budget_kwh;
    }
}

/// State carried from one slot to the next.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantState {
    pub battery: Option<BatteryState>,
    /// Biomass energy still allowed today under the utilization factor.
    pub bg_budget_kwh: f64,
}

/// Advances the plant by one slot.
pub fn step_hour(plant: &Plant, state: &mut PlantState, slot: &SlotInputs) -> SlotLedger {
    match plant.strategy {
        DispatchStrategy::LoadFollowing => step_load_following(plant, state, slot),
    }
}

fn step_load_following(plant: &Plant, state: &mut PlantState, slot: &SlotInputs) -> SlotLedger {
    let eff = plant.conv_eff;
    let mut led = SlotLedger {
        load: slot.load_kw,
        pv: slot.pv_kw,
        wind: slot.wind_kw,
        ..SlotLedger::default()
    };
    let mut conv_free = plant.conv_kw;
    let mut need = slot.load_kw.max(0.0);

    let wind_used = slot.wind_kw.min(need);
    need -= wind_used;
    let mut ac_surplus = slot.wind_kw - wind_used;

    let pv_ac = (slot.pv_kw * eff).min(need).min(conv_free);
    let pv_dc_used = (pv_ac / eff).min(slot.pv_kw);
    need -= pv_ac;
    conv_free -= pv_ac;
    led.conversion_loss += pv_dc_used - pv_ac;
    let mut dc_surplus = slot.pv_kw - pv_dc_used;

    if let (Some(bp), Some(bs)) = (&plant.battery, state.battery.as_mut()) {
        if need > EPS && conv_free > EPS {
            let available = ((bs.soc_kwh - bp.soc_min_kwh) * bp.spec.discharge_eff)
                .max(0.0)
                .min(bp.max_discharge_kw);
            let wanted = need.min(conv_free) / eff;
            let d = available.min(wanted);
            if d > 0.0 {
                let upd = battery_update(*bs, 0.0, d, &bp.spec).expect("discharge only");
                *bs = upd.state;
                let delivered = upd.discharge_delivered_kwh;
                let ac = (delivered * eff).min(need);
                led.discharge = delivered;
                led.conversion_loss += delivered - ac;
                need -= ac;
                conv_free -= ac;
            }
        }
    }

    if let Some(bg) = plant.bg {
        if need > EPS {
            let avail = bg
                .rated_kw
                .min(slot.bg_feedstock_cap_kw)
                .min(state.bg_budget_kwh);
            if avail > EPS && avail + EPS >= bg.min_kw {
                let out = need.min(avail).max(bg.min_kw.min(avail));
                let served = out.min(need);
                need -= served;
                ac_surplus += out - served;
                state.bg_budget_kwh -= out;
                led.bg = out;
                led.bg_feedstock_kg = out * plant.bg_kg_per_kwh;
            }
        }
    }

    if let Some(dg) = plant.dg {
        if need > EPS && dg.rated_kw > EPS {
            let out = need.min(dg.rated_kw).max(dg.min_kw);
            let served = out.min(need);
            need -= served;
            ac_surplus += out - served;
            led.dg = out;
            led.dg_fuel_l = plant.dg_f1 * dg.rated_kw + plant.dg_f2 * out;
        }
    }

    if let Some(cap) = plant.grid_buy_kw {
        let buy = need.min(cap);
        need -= buy;
        led.grid_buy = buy;
    }

    led.unmet = need;
    led.served = slot.load_kw.max(0.0) - need;

    if let (Some(bp), Some(bs)) = (&plant.battery, state.battery.as_mut()) {
        if led.discharge == 0.0 {
            let mut headroom = ((bs.capacity_kwh - bs.soc_kwh) / bp.spec.charge_eff)
                .max(0.0)
                .min(bp.max_charge_kw);
            let from_dc = dc_surplus.min(headroom);
            dc_surplus -= from_dc;
            headroom -= from_dc;
            let from_ac_dc = (ac_surplus * eff).min(headroom).min(conv_free).max(0.0);
            let ac_drawn = (from_ac_dc / eff).min(ac_surplus);
            ac_surplus -= ac_drawn;
            conv_free -= from_ac_dc;
            led.conversion_loss += ac_drawn - from_ac_dc;
            let total = from_dc + from_ac_dc;
            if total > 0.0 {
                let upd = battery_update(*bs, total, 0.0, &bp.spec).expect("charge only");
                *bs = upd.state;
                led.charge = upd.charge_accepted_kwh;
                // Anything the clamp refused is dumped on the DC side.
                dc_surplus += total - upd.charge_accepted_kwh;
            }
        }
    }

    if plant.grid_buy_kw.is_some() && plant.grid_sell_kw > 0.0 {
        let mut sale_cap = plant.grid_sell_kw;
        let s_ac = ac_surplus.min(sale_cap);
        ac_surplus -= s_ac;
        sale_cap -= s_ac;
        let s_dc_ac = (dc_surplus * eff).min(sale_cap).min(conv_free).max(0.0);
        let dc_drawn = (s_dc_ac / eff).min(dc_surplus);
        dc_surplus -= dc_drawn;
        conv_free -= s_dc_ac;
        led.conversion_loss += dc_drawn - s_dc_ac;
        led.grid_sell = s_ac + s_dc_ac;
    }

    // Surplus PV is inverted while converter capacity remains and dumped on
    // the AC side; the rest is dumped on the DC side.
    let dump_ac = (dc_surplus * eff).min(conv_free.max(0.0));
    let dump_dc_drawn = (dump_ac / eff).min(dc_surplus);
    dc_surplus -= dump_dc_drawn;
    led.conversion_loss += dump_dc_drawn - dump_ac;
    led.excess = ac_surplus + dump_ac + dc_surplus;

    led.soc = state.battery.map(|b| b.soc_kwh).unwrap_or(0.0);
    led
}

/// Per-slot source availability for a whole run.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemInputs {
    pub load_kw: Vec<f64>,
    pub pv_kw: Vec<f64>,
    pub wind_kw: Vec<f64>,
    pub bg_feedstock_cap_kw: Vec<f64>,
}

impl SystemInputs {
    pub fn len(&self) -> usize {
        self.load_kw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.load_kw.is_empty()
    }

    pub fn slot(&self, t: usize) -> SlotInputs {
        SlotInputs {
            load_kw: self.load_kw[t],
            pv_kw: self.pv_kw[t],
            wind_kw: self.wind_kw[t],
            bg_feedstock_cap_kw: self.bg_feedstock_cap_kw[t],
        }
    }

    fn check_lengths(&self) -> Result<()> {
        let n = self.load_kw.len();
        for (name, v) in [
            ("pv", &self.pv_kw),
            ("wind", &self.wind_kw),
            ("bg feedstock", &self.bg_feedstock_cap_kw),
        ] {
            if v.len() != n {
                return Err(Error::SeriesLength {
                    name,
                    expected: n,
                    actual: v.len(),
                });
            }
        }
        Ok(())
    }
}

fn check_len(name: &'static str, len: usize, expected: usize) -> Result<()> {
    if len != expected {
        return Err(Error::SeriesLength {
            name,
            expected,
            actual: len,
        });
    }
    Ok(())
}

/// Converts resource series into per-slot component output.
pub fn prepare_inputs(cfg: &ScenarioConfig, bundle: &SeriesBundle) -> Result<SystemInputs> {
    let n = bundle.load.len();
    let load_kw = bundle.load.values().to_vec();

    let pv_kw = match &cfg.pv {
        None => vec![0.0; n],
        Some(pv) => {
            let ghi = bundle
                .ghi
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("PV present but no GHI series".into()))?;
            check_len("ghi", ghi.len(), n)?;
            check_len("temperature", bundle.temperature.len(), n)?;
            let cell = CellTempModel::new(pv.noct_degc);
            ghi.values()
                .iter()
                .zip(bundle.temperature.values())
                .map(|(&g, &amb)| pv_output(pv, g, cell_temperature(&cell, amb, g)))
                .collect()
        }
    };

    let wind_kw = match &cfg.wind {
        None => vec![0.0; n],
        Some(w) => {
            let speed = bundle.wind_speed.as_ref().ok_or_else(|| {
                Error::InvalidInput("wind turbine present but no wind series".into())
            })?;
            check_len("wind", speed.len(), n)?;
            speed
                .values()
                .iter()
                .map(|&v| wind_output(w, wind_speed_at_hub(w, v)))
                .collect()
        }
    };

    let bg_feedstock_cap_kw = match (&cfg.bg, &bundle.biomass) {
        (Some(bg), Some(feed)) => {
            check_len("biomass", feed.len(), n)?;
            feed.values()
                .iter()
                .map(|&kg| bg_output_from_feedstock(bg, kg))
                .collect()
        }
        _ => vec![f64::INFINITY; n],
    };

    Ok(SystemInputs {
        load_kw,
        pv_kw,
        wind_kw,
        bg_feedstock_cap_kw,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimOptions {
    /// Keep the per-slot ledger and SOC trace.
    pub keep_trace: bool,
}

/// Annual totals of one simulated year, plus the optional trace.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DispatchResult {
    pub slots: usize,
    pub demand_kwh: f64,
    pub load_served_kwh: f64,
    pub unmet_kwh: f64,
    pub excess_kwh: f64,
    pub conversion_loss_kwh: f64,
    pub pv_kwh: f64,
    pub wind_kwh: f64,
    pub bg_kwh: f64,
    pub dg_kwh: f64,
    pub grid_purchase_kwh: f64,
    pub grid_sale_kwh: f64,
    pub battery_charge_kwh: f64,
    pub battery_discharge_kwh: f64,
    pub dg_fuel_l: f64,
    pub dg_hours: u32,
    pub bg_feedstock_kg: f64,
    pub renewable_fraction: f64,
    pub min_renewable_penetration_frac: f64,
    pub max_renewable_penetration_frac: f64,
    pub peak_load_kw: f64,
    /// SOC at every slot boundary (`slots + 1` values) when traced.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub soc_trace: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<SlotLedger>,
}

impl DispatchResult {
    /// Everything put onto the buses, grid purchases included.
    pub fn total_production_kwh(&self) -> f64 {
        self.pv_kwh + self.wind_kwh + self.bg_kwh + self.dg_kwh + self.grid_purchase_kwh
    }

    pub fn unmet_fraction(&self) -> f64 {
        if self.demand_kwh > 0.0 {
            self.unmet_kwh / self.demand_kwh
        } else {
            0.0
        }
    }

    pub fn has_trace(&self) -> bool {
        !self.trace.is_empty()
    }

    /// Copy without the per-slot trace.
    pub fn summary(&self) -> DispatchResult {
        DispatchResult {
            soc_trace: Vec::new(),
            trace: Vec::new(),
            ..self.clone()
        }
    }
}

/// Runs the dispatch over any number of slots; days start every 24 slots.
pub fn simulate(
    cfg: &ScenarioConfig,
    inputs: &SystemInputs,
    options: SimOptions,
) -> Result<DispatchResult> {
    inputs.check_lengths()?;
    let plant = Plant::new(cfg);
    let mut state = plant.initial_state();
    let n = inputs.len();

    let mut r = DispatchResult {
        slots: n,
        ..DispatchResult::default()
    };
    if options.keep_trace {
        r.trace.reserve(n);
        r.soc_trace.reserve(n + 1);
        r.soc_trace
            .push(state.battery.map(|b| b.soc_kwh).unwrap_or(0.0));
    }
    let mut min_pen = f64::INFINITY;
    let mut max_pen = f64::NEG_INFINITY;
    let mut nonrenewable = 0.0;

    for t in 0..n {
        if t % HOURS_PER_DAY == 0 {
            plant.start_day(&mut state);
        }
        let slot = inputs.slot(t);
        let led = step_hour(&plant, &mut state, &slot);

        r.demand_kwh += led.load.max(0.0);
        r.load_served_kwh += led.served;
        r.unmet_kwh += led.unmet;
        r.excess_kwh += led.excess;
        r.conversion_loss_kwh += led.conversion_loss;
        r.pv_kwh += led.pv;
        r.wind_kwh += led.wind;
        r.bg_kwh += led.bg;
        r.dg_kwh += led.dg;
        r.grid_purchase_kwh += led.grid_buy;
        r.grid_sale_kwh += led.grid_sell;
        r.battery_charge_kwh += led.charge;
        r.battery_discharge_kwh += led.discharge;
        r.dg_fuel_l += led.dg_fuel_l;
        r.bg_feedstock_kg += led.bg_feedstock_kg;
        if led.dg > 0.0 {
            r.dg_hours += 1;
        }
        nonrenewable += led.grid_buy + led.dg;
        r.peak_load_kw = r.peak_load_kw.max(led.load);
        if led.load > 0.0 {
            let pen = (led.pv + led.wind + led.bg) / led.load;
            min_pen = min_pen.min(pen);
            max_pen = max_pen.max(pen);
        }
        if options.keep_trace {
            r.trace.push(led);
            r.soc_trace.push(led.soc);
        }
    }

    r.renewable_fraction = if r.load_served_kwh > 0.0 {
        (1.0 - nonrenewable / r.load_served_kwh).clamp(0.0, 1.0)
    } else {
        0.0
    };
    if min_pen.is_finite() {
        r.min_renewable_penetration_frac = min_pen;
        r.max_renewable_penetration_frac = max_pen;
    }
    Ok(r)
}

/// Simulates one full year from resource series, keeping the trace.
pub fn simulate_year(cfg: &ScenarioConfig, bundle: &SeriesBundle) -> Result<DispatchResult> {
    simulate_year_with(cfg, bundle, SimOptions { keep_trace: true })
}

pub fn simulate_year_with(
    cfg: &ScenarioConfig,
    bundle: &SeriesBundle,
    options: SimOptions,
) -> Result<DispatchResult> {
    check_len("load", bundle.load.len(), HOURS_PER_YEAR)?;
    let inputs = prepare_inputs(cfg, bundle)?;
    simulate(cfg, &inputs, options)
}
