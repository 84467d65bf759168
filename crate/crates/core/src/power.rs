//! Component output models: PV, cell temperature, wind power curve and
//! shear, biomass rating and annual energy, diesel fuel curve, and
//! converter sizing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BgSpec, DgSpec, PvSpec, WindSpec, DAYS_PER_YEAR};

/// Nominal operating cell temperature model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellTempModel {
    pub noct_degc: f64,
    pub ref_ambient_noct_degc: f64,
    pub noct_irradiance_w_m2: f64,
}

impl CellTempModel {
    pub fn new(noct_degc: f64) -> Self {
        CellTempModel {
            noct_degc,
            ref_ambient_noct_degc: 20.0,
            noct_irradiance_w_m2: 800.0,
        }
    }
}

/// Cell temperature: ambient + (NOCT − 20)/0.8 · GHI, GHI in kW/m².
pub fn cell_temperature(model: &CellTempModel, ambient_degc: f64, ghi_kw_m2: f64) -> f64 {
    let rise_per_kw_m2 =
        (model.noct_degc - model.ref_ambient_noct_degc) / (model.noct_irradiance_w_m2 / 1000.0);
    ambient_degc + rise_per_kw_m2 * ghi_kw_m2
}

/// DC output of the array (kW), never negative.
pub fn pv_output(spec: &PvSpec, ghi_kw_m2: f64, cell_temp_degc: f64) -> f64 {
    spec.rated_kw * pv_output_per_kw(spec, ghi_kw_m2, cell_temp_degc)
}

/// Output per kW of nameplate; `pv_output` is exactly `rated_kw` times this.
pub fn pv_output_per_kw(spec: &PvSpec, ghi_kw_m2: f64, cell_temp_degc: f64) -> f64 {
    let thermal = 1.0 + spec.temp_coeff_per_degc * (cell_temp_degc - spec.ref_cell_temp_degc);
    (spec.derating * (ghi_kw_m2 / spec.ref_irradiance_kw_m2) * thermal).max(0.0)
}

/// Power-law shear extrapolation to hub height.
pub fn wind_speed_at_hub(spec: &WindSpec, v_ref_ms: f64) -> f64 {
    v_ref_ms * (spec.hub_height_m / spec.ref_height_m).powf(spec.shear_alpha)
}

/// Turbine power curve (kW): cubic ramp between cut-in and rated speed,
/// flat at rated power up to cut-out, zero outside.
pub fn wind_output(spec: &WindSpec, v_hub_ms: f64) -> f64 {
    spec.rated_kw * wind_output_per_kw(spec, v_hub_ms)
}

/// Power curve as a fraction of rated power.
pub fn wind_output_per_kw(spec: &WindSpec, v_hub_ms: f64) -> f64 {
    let v = v_hub_ms;
    if v <= spec.cut_in_ms || v >= spec.cut_out_ms {
        0.0
    } else if v < spec.rated_ms {
        let ci3 = spec.cut_in_ms.powi(3);
        (v.powi(3) - ci3) / (spec.rated_ms.powi(3) - ci3)
    } else {
        1.0
    }
}

/// Gasifier rating (kW) that a yearly feedstock supply can sustain over
/// the daily operating hours.
pub fn bg_rated_power(feedstock_t_per_yr: f64, spec: &BgSpec) -> Result<f64> {
    if spec.operating_hours_per_day <= 0.0 {
        return Err(Error::InvalidInput(
            "operating_hours_per_day must be > 0".into(),
        ));
    }
    let kj_per_yr =
        feedstock_t_per_yr * 1000.0 * spec.calorific_value_kj_per_kg * spec.conversion_eff;
    let seconds_per_yr = DAYS_PER_YEAR as f64 * spec.operating_hours_per_day * 3600.0;
    Ok(kj_per_yr / seconds_per_yr)
}

/// Annual energy at the capacity utilization factor (kWh/yr).
pub fn bg_annual_energy(spec: &BgSpec) -> f64 {
    spec.rated_kw * spec.cuf * DAYS_PER_YEAR as f64 * spec.operating_hours_per_day
}

/// Electrical output (kW) obtainable from a feedstock flow (kg/h).
pub fn bg_output_from_feedstock(spec: &BgSpec, kg_per_h: f64) -> f64 {
    kg_per_h * spec.calorific_value_kj_per_kg * spec.conversion_eff / 3600.0
}

/// Feedstock (kg) consumed to produce `kwh` of electricity.
pub fn bg_feedstock_for(spec: &BgSpec, kwh: f64) -> f64 {
    kwh * 3600.0 / (spec.calorific_value_kj_per_kg * spec.conversion_eff)
}

/// Fuel rate (L/h) on the linear curve `f1·rated + f2·output`.
pub fn dg_fuel(spec: &DgSpec, p_out_kw: f64, running: bool) -> Result<f64> {
    if p_out_kw > spec.rated_kw * (1.0 + 1e-12) || p_out_kw < 0.0 {
        return Err(Error::InvalidInput(format!(
            "diesel output {p_out_kw} kW outside [0, {}]",
            spec.rated_kw
        )));
    }
    Ok(if running {
        spec.fuel_intercept_l_per_h_per_kw * spec.rated_kw + spec.fuel_slope_l_per_kwh * p_out_kw
    } else {
        0.0
    })
}

/// Inverter rating needed to carry the peak load.
pub fn converter_required(peak_load_kw: f64, inverter_eff: f64) -> Result<f64> {
    if inverter_eff <= 0.0 {
        return Err(Error::InvalidInput(
            "inverter efficiency must be > 0".into(),
        ));
    }
    Ok(peak_load_kw / inverter_eff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn pv_reference_cases() {
        let pv = fixtures::pv(100.0);
        assert_relative_eq!(pv_output(&pv, 0.5, 25.0), 40.0, epsilon = 1e-12);
        assert_eq!(pv_output(&pv, 0.0, 40.0), 0.0);
        assert_relative_eq!(pv_output(&pv, 1.0, 45.0), 73.6, epsilon = 1e-9);
    }

    #[test]
    fn pv_clamps_at_zero() {
        let mut pv = fixtures::pv(100.0);
        pv.temp_coeff_per_degc = -0.05;
        assert_eq!(pv_output(&pv, 1.0, 100.0), 0.0);
    }

    #[test]
    fn cell_temperature_cases() {
        assert_eq!(cell_temperature(&CellTempModel::new(45.0), 20.0, 0.0), 20.0);
        assert_relative_eq!(cell_temperature(&CellTempModel::new(45.0), 25.0, 0.8), 50.0);
        assert_eq!(cell_temperature(&CellTempModel::new(20.0), 31.0, 1.0), 31.0);
    }

    #[test]
    fn hub_height_shear() {
        let w = fixtures::wind(10.0);
        assert_relative_eq!(
            wind_speed_at_hub(&w, 4.0),
            4.856_779_537_580_188,
            epsilon = 1e-9
        );
        let mut same = w.clone();
        same.hub_height_m = same.ref_height_m;
        assert_eq!(wind_speed_at_hub(&same, 4.0), 4.0);
        let mut flat = w;
        flat.shear_alpha = 0.0;
        assert_eq!(wind_speed_at_hub(&flat, 4.0), 4.0);
    }

    #[test]
    fn power_curve_cases() {
        let w = fixtures::wind(10.0);
        assert_relative_eq!(
            wind_output(&w, 7.0),
            1.857_730_746_619_635_6,
            epsilon = 1e-9
        );
        assert_eq!(wind_output(&w, 2.9), 0.0);
        assert_eq!(wind_output(&w, 12.0), 10.0);
        assert_eq!(wind_output(&w, 20.0), 10.0);
        assert_eq!(wind_output(&w, 24.0), 0.0);
        assert_eq!(wind_output(&w, 30.0), 0.0);
    }

    #[test]
    fn power_curve_continuity() {
        let w = fixtures::wind(10.0);
        let eps = 1e-10;
        assert!((wind_output(&w, 3.0 + eps) - wind_output(&w, 3.0)).abs() < 1e-9 * w.rated_kw);
        assert!((wind_output(&w, 12.0 - eps) - wind_output(&w, 12.0)).abs() < 1e-9 * w.rated_kw);
    }

    #[test]
    fn bg_rating() {
        let mut bg = fixtures::bg(0.0);
        bg.calorific_value_kj_per_kg = 15_000.0;
        bg.conversion_eff = 0.2;
        assert_relative_eq!(
            bg_rated_power(100.0, &bg).unwrap(),
            9.512_937_595_129_376,
            epsilon = 1e-9
        );
        assert_eq!(bg_rated_power(0.0, &bg).unwrap(), 0.0);
        let base = bg_rated_power(100.0, &bg).unwrap();
        bg.conversion_eff = 0.4;
        assert_relative_eq!(bg_rated_power(100.0, &bg).unwrap(), 2.0 * base);
        bg.operating_hours_per_day = 0.0;
        assert!(bg_rated_power(100.0, &bg).is_err());
    }

    #[test]
    fn bg_energy() {
        let mut bg = fixtures::bg(60.0);
        bg.cuf = 1.0;
        assert_eq!(bg_annual_energy(&bg), 525_600.0);
        bg.cuf = 0.25;
        assert_eq!(bg_annual_energy(&bg), 131_400.0);
        bg.cuf = 0.0;
        assert_eq!(bg_annual_energy(&bg), 0.0);
    }

    #[test]
    fn feedstock_round_trip() {
        let bg = fixtures::bg(60.0);
        let kg = bg_feedstock_for(&bg, 10.0);
        assert_relative_eq!(bg_output_from_feedstock(&bg, kg), 10.0, epsilon = 1e-12);
    }

    #[test]
    fn diesel_fuel_curve() {
        let dg = fixtures::dg(60.0);
        assert_relative_eq!(dg_fuel(&dg, 40.0, true).unwrap(), 14.8, epsilon = 1e-12);
        assert_eq!(dg_fuel(&dg, 40.0, false).unwrap(), 0.0);
        assert_relative_eq!(dg_fuel(&dg, 0.0, true).unwrap(), 4.8, epsilon = 1e-12);
        assert!(dg_fuel(&dg, 61.0, true).is_err());
    }

    #[test]
    fn converter_sizing() {
        assert_relative_eq!(
            converter_required(973.28, 0.95).unwrap(),
            1_024.505_263_157_894_7,
            epsilon = 1e-9
        );
        assert_eq!(converter_required(500.0, 1.0).unwrap(), 500.0);
        assert_eq!(converter_required(0.0, 0.9).unwrap(), 0.0);
        assert!(converter_required(10.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn pv_linear_in_ghi(g in 0.0f64..1.2, k in 0.0f64..3.0, t in -10.0f64..70.0) {
            let pv = fixtures::pv(250.0);
            let a = pv_output(&pv, g, t);
            let b = pv_output(&pv, g * k, t);
            prop_assert!(a >= 0.0);
            prop_assert!((b - k * a).abs() <= 1e-9 * (1.0 + b.abs()));
        }

        #[test]
        fn power_curve_monotone_below_cut_out(v in 0.0f64..23.9, dv in 0.0f64..5.0) {
            let w = fixtures::wind(100.0);
            let hi = (v + dv).min(23.99);
            prop_assert!(wind_output(&w, hi) + 1e-12 >= wind_output(&w, v));
        }

        #[test]
        fn fuel_affine_when_running(p1 in 0.0f64..60.0, p2 in 0.0f64..60.0) {
            let dg = fixtures::dg(60.0);
            let f = |p| dg_fuel(&dg, p, true).unwrap();
            let mid = 0.5 * (p1 + p2);
            prop_assert!((f(mid) - 0.5 * (f(p1) + f(p2))).abs() < 1e-9);
        }

        #[test]
        fn bg_homogeneous(feed in 0.0f64..1e6, k in 0.0f64..10.0, cuf in 0.0f64..0.1) {
            let mut bg = fixtures::bg(80.0);
            let r = bg_rated_power(feed, &bg).unwrap();
            prop_assert!((bg_rated_power(feed * k, &bg).unwrap() - k * r).abs() <= 1e-9 * (1.0 + k * r));
            bg.cuf = cuf;
            let e = bg_annual_energy(&bg);
            bg.cuf = cuf * k;
            prop_assert!((bg_annual_energy(&bg) - k * e).abs() <= 1e-9 * (1.0 + k * e));
        }
    }
}
