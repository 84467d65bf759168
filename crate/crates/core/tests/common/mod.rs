#![allow(dead_code)]

use std::path::PathBuf;

use hybridsizer::ingest::{HourlySeries, SeriesUnit};
use hybridsizer::model::*;
use hybridsizer::SeriesBundle;
use rand::Rng;

pub fn hospital_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/hospital")
}

pub fn econ() -> EconParams {
    EconParams {
        discount_rate_frac: 0.0391824,
        project_lifetime_yr: 25,
    }
}

pub fn pv(kw: f64) -> PvSpec {
    PvSpec {
        rated_kw: kw,
        derating: 0.8,
        temp_coeff_per_degc: -0.004,
        ref_irradiance_kw_m2: 1.0,
        ref_cell_temp_degc: 25.0,
        noct_degc: 45.0,
        capital_usd: 1000.0 * kw,
        replacement_usd: 1000.0 * kw,
        om_usd_per_yr: 10.0 * kw,
        lifetime_yr: 25.0,
    }
}

pub fn wind(kw: f64) -> WindSpec {
    WindSpec {
        rated_kw: kw,
        cut_in_ms: 3.0,
        rated_ms: 12.0,
        cut_out_ms: 25.0,
        hub_height_m: 30.0,
        ref_height_m: 10.0,
        shear_alpha: 0.14,
        capital_usd: 2500.0 * kw,
        replacement_usd: 2500.0 * kw,
        om_usd_per_yr: 30.0 * kw,
        lifetime_yr: 20.0,
    }
}

pub fn bg(kw: f64, cuf: f64) -> BgSpec {
    BgSpec {
        rated_kw: kw,
        cuf,
        min_load_ratio: 0.3,
        calorific_value_kj_per_kg: 14_000.0,
        conversion_eff: 0.2,
        operating_hours_per_day: 24.0,
        capital_usd: 1000.0 * kw,
        replacement_usd: 1000.0 * kw,
        om_usd_per_yr: 10.0 * kw,
        lifetime_yr: 20.0,
        marginal_cost_usd_per_kwh: 0.0,
    }
}

pub fn dg(kw: f64) -> DgSpec {
    DgSpec {
        rated_kw: kw,
        fuel_intercept_l_per_h_per_kw: 0.08,
        fuel_slope_l_per_kwh: 0.25,
        min_load_ratio: 0.3,
        fuel_price_usd_per_l: 1.0,
        capital_usd: 358.0 * kw,
        replacement_usd: 358.0 * kw,
        om_usd_per_yr: 10.0 * kw,
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
        om_usd_per_yr: 5.0 * strings as f64,
        lifetime_yr: 10.0,
    }
}

pub fn converter(kw: f64) -> ConverterSpec {
    ConverterSpec {
        rated_kw: kw,
        efficiency: 0.95,
        capital_usd: 300.0 * kw,
        replacement_usd: 300.0 * kw,
        om_usd_per_yr: 3.0 * kw,
        lifetime_yr: 15.0,
    }
}

pub fn grid(max_purchase_kw: f64) -> GridSpec {
    GridSpec {
        purchase_usd_per_kwh: 0.1,
        sellback_usd_per_kwh: 0.0,
        max_purchase_kw,
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

fn series<R: Rng>(rng: &mut R, lo: f64, hi: f64, unit: SeriesUnit) -> HourlySeries {
    let v = (0..HOURS_PER_YEAR)
        .map(|_| rng.random_range(lo..hi))
        .collect();
    HourlySeries::new(v, unit).unwrap()
}

/// Noisy hourly load, irradiance, wind and feedstock for a full year.
pub fn random_bundle<R: Rng>(rng: &mut R) -> SeriesBundle {
    let peak = rng.random_range(10.0..500.0);
    let mut b = SeriesBundle::from_load(series(rng, 0.0, peak, SeriesUnit::Kw));
    let ghi: Vec<f64> = (0..HOURS_PER_YEAR)
        .map(|t| {
            let h = (t % 24) as f64;
            if (6.0..18.0).contains(&h) {
                rng.random_range(0.0..1.0) * ((h - 6.0) / 12.0 * std::f64::consts::PI).sin()
            } else {
                0.0
            }
        })
        .collect();
    b.ghi = Some(HourlySeries::new(ghi, SeriesUnit::KwPerM2).unwrap());
    b.wind_speed = Some(series(rng, 0.0, 20.0, SeriesUnit::MetersPerSecond));
    if rng.random_bool(0.5) {
        b.biomass = Some(series(rng, 0.0, 2000.0, SeriesUnit::KgPerHour));
    }
    b
}

/// A random system sized against `peak` kW; every component present with
/// probability one half, with a converter whenever anything sits on the DC
/// bus.
pub fn random_scenario<R: Rng>(rng: &mut R, peak: f64) -> ScenarioConfig {
    let mut cfg = scenario();
    let size = |rng: &mut R, k: f64| rng.random_range(0.05..k) * peak;
    if rng.random_bool(0.5) {
        cfg.pv = Some(pv(size(rng, 3.0)));
    }
    if rng.random_bool(0.5) {
        cfg.wind = Some(wind(size(rng, 2.0)));
    }
    if rng.random_bool(0.5) {
        cfg.bg = Some(bg(size(rng, 1.5), rng.random_range(0.1..1.0)));
    }
    if rng.random_bool(0.5) {
        cfg.dg = Some(dg(size(rng, 1.5)));
    }
    if rng.random_bool(0.5) {
        let mut b = battery(rng.random_range(1..(8.0 * peak) as i64 + 2));
        b.soc_min_frac = rng.random_range(0.0..0.6);
        b.charge_eff = rng.random_range(0.7..1.0);
        b.discharge_eff = rng.random_range(0.7..1.0);
        cfg.battery = Some(b);
    }
    if cfg.pv.is_some() || cfg.battery.is_some() {
        let mut c = converter(size(rng, 1.5));
        c.efficiency = rng.random_range(0.8..1.0);
        cfg.converter = Some(c);
    }
    if rng.random_bool(0.5) {
        let mut g = grid(size(rng, 1.5));
        if rng.random_bool(0.5) {
            g.max_sale_kw = size(rng, 1.0);
            g.sellback_usd_per_kwh = 0.05;
        }
        cfg.grid = Some(g);
    }
    if cfg.pv.is_none()
        && cfg.wind.is_none()
        && cfg.bg.is_none()
        && cfg.dg.is_none()
        && cfg.grid.is_none()
    {
        cfg.grid = Some(grid(size(rng, 1.5)));
    }
    let soc_min = cfg.battery.as_ref().map_or(0.0, |b| b.soc_min_frac);
    cfg.dispatch.initial_soc_frac = rng.random_range(soc_min..=1.0);
    // The bundle supplies the series; these only satisfy validation.
    cfg.resources.ghi = Some(SeriesSource::Values(vec![5.0; 12]));
    cfg.resources.wind = Some(SeriesSource::Values(vec![5.0; 12]));
    cfg
}
