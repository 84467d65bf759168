//! Resource and load ingestion, and synthesis of hourly series from
//! monthly statistics.
//!
//! Synthesis is deterministic unless a seed is supplied. The year has no
//! leap day: 365 days, 8,760 hourly slots.

use std::f64::consts::PI;
use std::io::Read;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{LoadSpec, ResourceSpec, SeriesSource, HOURS_PER_DAY, HOURS_PER_YEAR};

pub const DAYS_IN_MONTH: [usize; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

pub const DEFAULT_AMBIENT_DEGC: f64 = 20.0;

/// Hospital demand by hour of day (kW). Nights sit at 105.85 kW, the
/// morning and afternoon plateaus at 973.28 kW, with a dip at 13:00. The
/// shape already sums to 11,214.66 kWh/day.
pub const HOSPITAL_DAILY_SHAPE: [f64; 24] = [
    105.85, 105.85, 105.85, 105.85, 105.85, 105.85, 105.85, 105.85, // 00-07
    700.0, 973.28, 973.28, 973.28, 973.28, // 08-12
    800.0,  // 13
    973.28, 973.28, 973.28, 973.28, // 14-17
    552.37, // 18
    105.85, 105.85, 105.85, 105.85, 105.85, // 19-23
];

pub const HOSPITAL_KWH_PER_DAY: f64 = 11_214.66;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonthlyUnit {
    /// Mean daily global horizontal irradiation.
    KwhPerM2Day,
    MetersPerSecond,
    KgPerDay,
    DegC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesUnit {
    KwPerM2,
    MetersPerSecond,
    KgPerHour,
    DegC,
    Kw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonthlyResource {
    pub values: [f64; 12],
    pub unit: MonthlyUnit,
}

impl MonthlyResource {
    pub fn new(values: [f64; 12], unit: MonthlyUnit) -> Self {
        MonthlyResource { values, unit }
    }

    pub fn from_slice(values: &[f64], unit: MonthlyUnit) -> Result<Self> {
        let values: [f64; 12] = values.try_into().map_err(|_| {
            Error::InvalidInput(format!(
                "monthly resource needs exactly 12 values, got {}",
                values.len()
            ))
        })?;
        Ok(MonthlyResource { values, unit })
    }

    fn check(&self, expected: MonthlyUnit) -> Result<()> {
        if self.unit != expected {
            return Err(Error::InvalidInput(format!(
                "expected monthly unit {expected:?}, got {:?}",
                self.unit
            )));
        }
        for (m, v) in self.values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "month {} is not finite",
                    m + 1
                )));
            }
            if self.unit != MonthlyUnit::DegC && *v < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "month {} has negative value {v}",
                    m + 1
                )));
            }
        }
        Ok(())
    }
}

/// An 8,760-slot series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourlySeries {
    values: Vec<f64>,
    pub unit: SeriesUnit,
}

impl HourlySeries {
    pub fn new(values: Vec<f64>, unit: SeriesUnit) -> Result<Self> {
        if values.len() != HOURS_PER_YEAR {
            return Err(Error::SeriesLength {
                name: "hourly series",
                expected: HOURS_PER_YEAR,
                actual: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("slot {i} is not finite")));
        }
        Ok(HourlySeries { values, unit })
    }

    pub fn constant(value: f64, unit: SeriesUnit) -> Self {
        HourlySeries {
            values: vec![value; HOURS_PER_YEAR],
            unit,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Month (0-based) the slot belongs to.
    pub fn month_of(&self, slot: usize) -> usize {
        month_of_slot(slot)
    }

    pub fn scaled(&self, k: f64) -> HourlySeries {
        HourlySeries {
            values: self.values.iter().map(|v| v * k).collect(),
            unit: self.unit,
        }
    }

    /// Mean value over each month's slots.
    pub fn monthly_means(&self) -> [f64; 12] {
        let mut out = [0.0; 12];
        let mut start = 0;
        for (m, days) in DAYS_IN_MONTH.iter().enumerate() {
            let n = days * HOURS_PER_DAY;
            out[m] = self.values[start..start + n].iter().sum::<f64>() / n as f64;
            start += n;
        }
        out
    }
}

pub fn month_of_slot(slot: usize) -> usize {
    let mut day = (slot / HOURS_PER_DAY) % 365;
    for (m, days) in DAYS_IN_MONTH.iter().enumerate() {
        if day < *days {
            return m;
        }
        day -= days;
    }
    11
}

/// Iterates `(month, day_start_slot)` for every day of the year.
fn days() -> impl Iterator<Item = (usize, usize)> {
    DAYS_IN_MONTH
        .iter()
        .enumerate()
        .flat_map(|(m, n)| std::iter::repeat_n(m, *n))
        .enumerate()
        .map(|(d, m)| (m, d * HOURS_PER_DAY))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApplianceEntry {
    pub count: u32,
    pub rated_power_w: f64,
    pub hours_per_day: f64,
}

/// Daily energy of a set of appliances, kWh/day: Σ count·W·h / 1000.
pub fn daily_load_from_appliances(entries: &[ApplianceEntry]) -> f64 {
    entries
        .iter()
        .map(|e| e.count as f64 * e.rated_power_w * e.hours_per_day)
        .sum::<f64>()
        / 1000.0
}

/// Daylight window used by irradiance synthesis, in whole hours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DaylightWindow {
    pub sunrise_hour: usize,
    pub sunset_hour: usize,
}

impl Default for DaylightWindow {
    fn default() -> Self {
        DaylightWindow {
            sunrise_hour: 6,
            sunset_hour: 18,
        }
    }
}

impl DaylightWindow {
    pub fn hours(&self) -> usize {
        self.sunset_hour - self.sunrise_hour
    }
}

/// Peak of a half-sine over `daylight_hours` whose area is `daily_total`.
pub fn half_sine_peak(daily_total: f64, daylight_hours: f64) -> f64 {
    PI / 2.0 * daily_total / daylight_hours
}

pub fn synthesize_ghi(monthly: &MonthlyResource) -> Result<HourlySeries> {
    synthesize_ghi_with(monthly, DaylightWindow::default())
}

/// Each day gets a half-sine over the daylight window, integrated exactly
/// over each hourly slot, so the day sums to the month's mean daily total.
pub fn synthesize_ghi_with(
    monthly: &MonthlyResource,
    window: DaylightWindow,
) -> Result<HourlySeries> {
    monthly.check(MonthlyUnit::KwhPerM2Day)?;
    if window.sunrise_hour >= window.sunset_hour || window.sunset_hour > HOURS_PER_DAY {
        return Err(Error::InvalidInput(
            "daylight window must be non-empty within a day".into(),
        ));
    }
    let span = window.hours() as f64;
    // Slot weights of the unit half-sine; they sum to 2.
    let weights: Vec<f64> = (0..window.hours())
        .map(|k| (PI * k as f64 / span).cos() - (PI * (k + 1) as f64 / span).cos())
        .collect();

    let mut values = vec![0.0; HOURS_PER_YEAR];
    for (month, start) in days() {
        let daily = monthly.values[month];
        for (k, w) in weights.iter().enumerate() {
            values[start + window.sunrise_hour + k] = daily * w / 2.0;
        }
    }
    HourlySeries::new(values, SeriesUnit::KwPerM2)
}

/// Constant-within-month wind speeds; with a seed, each day gets a random
/// level and diurnal swing, rescaled so every monthly mean is preserved.
pub fn synthesize_wind(monthly: &MonthlyResource, seed: Option<u64>) -> Result<HourlySeries> {
    monthly.check(MonthlyUnit::MetersPerSecond)?;
    let mut values = vec![0.0; HOURS_PER_YEAR];
    match seed {
        None => {
            for (month, start) in days() {
                values[start..start + HOURS_PER_DAY].fill(monthly.values[month]);
            }
        }
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for (month, start) in days() {
                let level: f64 = rng.random_range(0.85..1.15);
                let swing: f64 = rng.random_range(0.1..0.3);
                for h in 0..HOURS_PER_DAY {
                    // Windiest mid-afternoon.
                    let phase = 2.0 * PI * (h as f64 - 9.0) / HOURS_PER_DAY as f64;
                    values[start + h] = monthly.values[month] * level * (1.0 + swing * phase.sin());
                }
            }
            let mut start = 0;
            for (m, days) in DAYS_IN_MONTH.iter().enumerate() {
                let slots = &mut values[start..start + days * HOURS_PER_DAY];
                let mean = slots.iter().sum::<f64>() / slots.len() as f64;
                let k = if mean > 0.0 {
                    monthly.values[m] / mean
                } else {
                    0.0
                };
                slots.iter_mut().for_each(|v| *v *= k);
                start += days * HOURS_PER_DAY;
            }
        }
    }
    HourlySeries::new(values, SeriesUnit::MetersPerSecond)
}

/// Available feedstock per hour: the month's kg/day spread evenly.
pub fn synthesize_biomass(monthly: &MonthlyResource) -> Result<HourlySeries> {
    monthly.check(MonthlyUnit::KgPerDay)?;
    let mut values = vec![0.0; HOURS_PER_YEAR];
    for (month, start) in days() {
        values[start..start + HOURS_PER_DAY].fill(monthly.values[month] / HOURS_PER_DAY as f64);
    }
    HourlySeries::new(values, SeriesUnit::KgPerHour)
}

pub fn synthesize_temperature(monthly: &MonthlyResource) -> Result<HourlySeries> {
    monthly.check(MonthlyUnit::DegC)?;
    let mut values = vec![0.0; HOURS_PER_YEAR];
    for (month, start) in days() {
        values[start..start + HOURS_PER_DAY].fill(monthly.values[month]);
    }
    HourlySeries::new(values, SeriesUnit::DegC)
}

/// Repeats a 24-hour shape over the year. With a target, the shape is
/// scaled linearly so each day totals `scale_to_kwh_per_day`.
pub fn load_profile(
    daily_shape: &[f64],
    scale_to_kwh_per_day: Option<f64>,
) -> Result<HourlySeries> {
    if daily_shape.len() != HOURS_PER_DAY {
        return Err(Error::InvalidInput(format!(
            "load shape needs 24 values, got {}",
            daily_shape.len()
        )));
    }
    if daily_shape.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidInput(
            "load shape values must be finite and ≥ 0".into(),
        ));
    }
    let sum: f64 = daily_shape.iter().sum();
    let k = match scale_to_kwh_per_day {
        None => 1.0,
        Some(0.0) => 0.0,
        Some(_) if sum == 0.0 => {
            return Err(Error::InvalidInput(
                "all-zero load shape cannot be scaled to a nonzero daily total".into(),
            ))
        }
        Some(target) => target / sum,
    };
    let day: Vec<f64> = daily_shape.iter().map(|v| v * k).collect();
    let values = day.iter().copied().cycle().take(HOURS_PER_YEAR).collect();
    HourlySeries::new(values, SeriesUnit::Kw)
}

fn csv_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Reads a two-column CSV with a header row, requiring the first column to
/// run over `keys` in order. Returns the second column.
fn read_keyed_csv<R: Read>(reader: R, path: &Path, keys: std::ops::Range<u32>) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    let mut expected = keys.start;
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            csv_error(path, line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 2 {
            return Err(csv_error(
                path,
                line,
                format!("expected 2 fields, got {}", record.len()),
            ));
        }
        let key: u32 = record[0]
            .parse()
            .map_err(|_| csv_error(path, line, format!("bad key `{}`", &record[0])))?;
        if key != expected {
            return Err(csv_error(
                path,
                line,
                format!("expected key {expected}, got {key}"),
            ));
        }
        let value: f64 = record[1]
            .parse()
            .map_err(|_| csv_error(path, line, format!("bad number `{}`", &record[1])))?;
        out.push(value);
        expected += 1;
    }
    if expected != keys.end {
        return Err(csv_error(
            path,
            0,
            format!("expected {} rows, got {}", keys.len(), out.len()),
        ));
    }
    Ok(out)
}

/// `month,value` rows for months 1–12.
pub fn parse_monthly_csv<R: Read>(reader: R, path: &Path) -> Result<[f64; 12]> {
    let v = read_keyed_csv(reader, path, 1..13)?;
    Ok(v.try_into().expect("12 rows checked"))
}

/// `hour,kw` rows for hours 0–23.
pub fn parse_load_shape_csv<R: Read>(reader: R, path: &Path) -> Result<[f64; 24]> {
    let v = read_keyed_csv(reader, path, 0..24)?;
    Ok(v.try_into().expect("24 rows checked"))
}

fn open(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|e| Error::io(path, e))
}

fn resolve_values(source: &SeriesSource, dir: &Path, monthly: bool) -> Result<Vec<f64>> {
    match source {
        SeriesSource::Values(v) => Ok(v.clone()),
        SeriesSource::File(name) => {
            let path: PathBuf = dir.join(name);
            let file = open(&path)?;
            if monthly {
                Ok(parse_monthly_csv(file, &path)?.to_vec())
            } else {
                Ok(parse_load_shape_csv(file, &path)?.to_vec())
            }
        }
    }
}

/// Every hourly series one scenario needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesBundle {
    pub load: HourlySeries,
    pub ghi: Option<HourlySeries>,
    pub wind_speed: Option<HourlySeries>,
    pub biomass: Option<HourlySeries>,
    pub temperature: HourlySeries,
}

impl SeriesBundle {
    pub fn from_load(load: HourlySeries) -> Self {
        SeriesBundle {
            load,
            ghi: None,
            wind_speed: None,
            biomass: None,
            temperature: HourlySeries::constant(DEFAULT_AMBIENT_DEGC, SeriesUnit::DegC),
        }
    }
}

/// Resolves and synthesizes the load and resource series. File names are
/// relative to `dir`.
pub fn load_bundle(load: &LoadSpec, resources: &ResourceSpec, dir: &Path) -> Result<SeriesBundle> {
    let shape = resolve_values(&load.shape, dir, false)?;
    let load = load_profile(&shape, load.kwh_per_day)?;

    let monthly = |src: &Option<SeriesSource>, unit| -> Result<Option<MonthlyResource>> {
        src.as_ref()
            .map(|s| MonthlyResource::from_slice(&resolve_values(s, dir, true)?, unit))
            .transpose()
    };

    let ghi = monthly(&resources.ghi, MonthlyUnit::KwhPerM2Day)?
        .map(|m| synthesize_ghi(&m))
        .transpose()?;
    let wind_speed = monthly(&resources.wind, MonthlyUnit::MetersPerSecond)?
        .map(|m| synthesize_wind(&m, resources.wind_seed))
        .transpose()?;
    let biomass = monthly(&resources.biomass, MonthlyUnit::KgPerDay)?
        .map(|m| synthesize_biomass(&m))
        .transpose()?;
    let temperature = match monthly(&resources.temperature, MonthlyUnit::DegC)? {
        Some(m) => synthesize_temperature(&m)?,
        None => HourlySeries::constant(DEFAULT_AMBIENT_DEGC, SeriesUnit::DegC),
    };

    Ok(SeriesBundle {
        load,
        ghi,
        wind_speed,
        biomass,
        temperature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ghi(v: f64) -> MonthlyResource {
        MonthlyResource::new([v; 12], MonthlyUnit::KwhPerM2Day)
    }

    #[test]
    fn appliance_load() {
        let lamps = ApplianceEntry {
            count: 10,
            rated_power_w: 40.0,
            hours_per_day: 5.0,
        };
        assert_relative_eq!(daily_load_from_appliances(&[lamps]), 2.0);
        assert_eq!(daily_load_from_appliances(&[]), 0.0);
        let unit = ApplianceEntry {
            count: 1,
            rated_power_w: 1000.0,
            hours_per_day: 24.0,
        };
        assert_relative_eq!(daily_load_from_appliances(&[unit]), 24.0);
    }

    #[test]
    fn ghi_days_integrate_to_monthly_mean() {
        let s = synthesize_ghi(&ghi(6.0)).unwrap();
        for day in s.values().chunks(24) {
            assert!((day.iter().sum::<f64>() - 6.0).abs() < 1e-9);
            assert!(day[..6].iter().all(|v| *v == 0.0));
            assert!(day[18..].iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn ghi_zero_month_is_dark() {
        let mut m = ghi(6.0);
        m.values[1] = 0.0;
        let s = synthesize_ghi(&m).unwrap();
        assert!(s.values()[31 * 24..59 * 24].iter().all(|v| *v == 0.0));
    }

    #[test]
    fn ghi_peak_near_analytic_half_sine_peak() {
        let analytic = half_sine_peak(6.0, 12.0);
        assert_relative_eq!(analytic, 0.785, epsilon = 5e-4);
        // Slot averages flatten the crest slightly.
        let s = synthesize_ghi(&ghi(6.0)).unwrap();
        assert_relative_eq!(s.max(), analytic, max_relative = 0.015);
    }

    #[test]
    fn ghi_rejects_negative() {
        let mut m = ghi(6.0);
        m.values[3] = -1.0;
        assert!(synthesize_ghi(&m).is_err());
    }

    #[test]
    fn wind_constant_fill() {
        let m = MonthlyResource::new([4.0; 12], MonthlyUnit::MetersPerSecond);
        let s = synthesize_wind(&m, None).unwrap();
        assert!(s.values().iter().all(|v| *v == 4.0));
    }

    #[test]
    fn wind_seasonality_is_kept() {
        let mut values = [4.0; 12];
        values[0] = 4.8;
        values[7] = 3.0;
        let s = synthesize_wind(
            &MonthlyResource::new(values, MonthlyUnit::MetersPerSecond),
            None,
        )
        .unwrap();
        let jan = &s.values()[..31 * 24];
        let aug_start = (31 + 28 + 31 + 30 + 31 + 30 + 31) * 24;
        let aug = &s.values()[aug_start..aug_start + 31 * 24];
        let jan_min = jan.iter().copied().fold(f64::INFINITY, f64::min);
        let aug_max = aug.iter().copied().fold(0.0, f64::max);
        assert!(jan_min > aug_max);
    }

    #[test]
    fn seeded_wind_preserves_monthly_means() {
        let values = [4.8, 4.7, 4.6, 4.0, 3.4, 4.2, 4.3, 3.0, 3.1, 3.2, 3.3, 4.1];
        let m = MonthlyResource::new(values, MonthlyUnit::MetersPerSecond);
        let s = synthesize_wind(&m, Some(7)).unwrap();
        for (got, want) in s.monthly_means().iter().zip(values) {
            assert!((got - want).abs() < 1e-9);
        }
        assert!(s.values().iter().any(|v| (v - 4.8).abs() > 1e-3));
        assert_eq!(s, synthesize_wind(&m, Some(7)).unwrap());
        assert_ne!(s, synthesize_wind(&m, Some(8)).unwrap());
    }

    #[test]
    fn biomass_spread_per_hour() {
        let mut values = [240_000.0; 12];
        values[6] = 390_000.0;
        values[11] = 0.0;
        let s = synthesize_biomass(&MonthlyResource::new(values, MonthlyUnit::KgPerDay)).unwrap();
        assert_relative_eq!(s.values()[0], 10_000.0);
        let jul = (31 + 28 + 31 + 30 + 31 + 30) * 24;
        assert_relative_eq!(s.values()[jul], 16_250.0);
        assert_eq!(s.values()[HOURS_PER_YEAR - 1], 0.0);
    }

    #[test]
    fn hospital_load_annual_total() {
        let s = load_profile(&HOSPITAL_DAILY_SHAPE, Some(HOSPITAL_KWH_PER_DAY)).unwrap();
        assert!((s.total() - 4_093_350.9).abs() < 1e-3);
        assert_relative_eq!(s.max(), 973.28, epsilon = 1e-9);
        assert_relative_eq!(s.values()[3], 105.85, epsilon = 1e-9);
    }

    #[test]
    fn hospital_shape_sums_to_daily_total() {
        let sum: f64 = HOSPITAL_DAILY_SHAPE.iter().sum();
        assert_relative_eq!(sum, HOSPITAL_KWH_PER_DAY, epsilon = 1e-9);
    }

    #[test]
    fn flat_shape_scales_to_one_kw() {
        let s = load_profile(&[3.0; 24], Some(24.0)).unwrap();
        assert!(s.values().iter().all(|v| (*v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn scaling_preserves_ratios() {
        let mut shape = [105.85; 24];
        shape[10] = 973.28;
        let sum: f64 = shape.iter().sum();
        let s = load_profile(&shape, Some(sum * 2.0)).unwrap();
        assert_relative_eq!(
            s.values()[10] / s.values()[0],
            973.28 / 105.85,
            epsilon = 1e-12
        );
    }

    #[test]
    fn zero_shape_with_target_fails() {
        assert!(load_profile(&[0.0; 24], Some(10.0)).is_err());
        assert!(load_profile(&[0.0; 24], Some(0.0)).is_ok());
    }

    #[test]
    fn month_lookup() {
        assert_eq!(month_of_slot(0), 0);
        assert_eq!(month_of_slot(31 * 24 - 1), 0);
        assert_eq!(month_of_slot(31 * 24), 1);
        assert_eq!(month_of_slot(HOURS_PER_YEAR - 1), 11);
    }

    #[test]
    fn monthly_csv_parses() {
        let text = "month,value\n1,5.9\n2,6.2\n3,6.4\n4,6.3\n5,6.1\n6,5.6\n7,5.2\n8,5.3\n9,5.7\n10,6.0\n11,6.1\n12,6.0\n";
        let v = parse_monthly_csv(text.as_bytes(), Path::new("ghi.csv")).unwrap();
        assert_eq!(v[0], 5.9);
        assert_eq!(v[11], 6.0);
    }

    #[test]
    fn monthly_csv_reports_line_numbers() {
        let text = "month,value\n1,5.9\n2,abc\n";
        match parse_monthly_csv(text.as_bytes(), Path::new("ghi.csv")) {
            Err(Error::Csv { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let short = "month,value\n1,5.9\n";
        assert!(parse_monthly_csv(short.as_bytes(), Path::new("ghi.csv")).is_err());
        let skipped = "month,value\n1,5.9\n3,5.9\n";
        assert!(matches!(
            parse_monthly_csv(skipped.as_bytes(), Path::new("x")),
            Err(Error::Csv { line: 3, .. })
        ));
    }

    #[test]
    fn load_shape_csv_parses() {
        let mut text = String::from("hour,kw\n");
        for (h, kw) in HOSPITAL_DAILY_SHAPE.iter().enumerate() {
            text.push_str(&format!("{h},{kw}\n"));
        }
        let v = parse_load_shape_csv(text.as_bytes(), Path::new("load.csv")).unwrap();
        assert_eq!(v, HOSPITAL_DAILY_SHAPE);
    }

    #[test]
    fn inline_bundle() {
        let load = LoadSpec {
            shape: SeriesSource::Values(vec![1.0; 24]),
            kwh_per_day: Some(48.0),
        };
        let res = ResourceSpec {
            ghi: Some(SeriesSource::Values(vec![6.0; 12])),
            ..Default::default()
        };
        let b = load_bundle(&load, &res, Path::new(".")).unwrap();
        assert_relative_eq!(b.load.values()[5], 2.0);
        assert!(b.ghi.is_some());
        assert!(b.wind_speed.is_none());
        assert_eq!(b.temperature.values()[100], DEFAULT_AMBIENT_DEGC);
    }

    #[test]
    fn missing_file_is_io_error() {
        let load = LoadSpec {
            shape: SeriesSource::File("nope.csv".into()),
            kwh_per_day: None,
        };
        let err =
            load_bundle(&load, &ResourceSpec::default(), Path::new("/nonexistent")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
