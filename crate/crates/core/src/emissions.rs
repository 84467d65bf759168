//! Annual combustion emissions by source.

use serde::{Deserialize, Serialize};

use crate::dispatch::DispatchResult;
use crate::model::{EmissionFactors, Pollutants};

/// kg/yr of each pollutant, split by source.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EmissionReport {
    pub diesel: Pollutants,
    pub biomass: Pollutants,
    pub grid: Pollutants,
    pub total: Pollutants,
}

impl EmissionReport {
    pub fn is_zero(&self) -> bool {
        self.total.values().iter().all(|v| *v == 0.0)
    }
}

pub fn compute_emissions(result: &DispatchResult, factors: &EmissionFactors) -> EmissionReport {
    let diesel = factors.diesel_kg_per_l.scale(result.dg_fuel_l);
    let biomass = factors.biomass_kg_per_kwh.scale(result.bg_kwh);
    let grid = factors.grid_kg_per_kwh.scale(result.grid_purchase_kwh);
    EmissionReport {
        diesel,
        biomass,
        grid,
        total: diesel.add(&biomass).add(&grid),
    }
}
