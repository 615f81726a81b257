//! Converts annual consumption into PV capacity, grid-independence battery
//! capacity, and EV-charging PV increments.

use crate::error::{EngineError, Result};
use crate::params::{EvParams, HomeProfile, TechParams};

/// PV capacity that makes the home net-zero on an annual basis, kWdc.
pub fn pv_size_for_net_zero(profile: &HomeProfile, params: &TechParams) -> Result<f64> {
    profile.validate()?;
    Ok(profile.effective_load() / params.pv_yield)
}

/// Nameplate storage for grid independence at the given effectiveness, kWh.
///
/// Effectiveness is the fraction of the average daily load the battery must
/// cover; the calibrated derating absorbs PV and battery performance decline
/// over the service life.
pub fn battery_size_grid_independent(
    profile: &HomeProfile,
    params: &TechParams,
    effectiveness: f64,
) -> Result<f64> {
    profile.validate()?;
    if !(0.0..=1.0).contains(&effectiveness) {
        return Err(EngineError::OutOfRange {
            what: "storage effectiveness",
            value: effectiveness,
            min: 0.0,
            max: 1.0,
        });
    }
    let daily = profile.effective_load() / 365.0;
    Ok(effectiveness * daily / params.storage_derating)
}

/// Additional PV capacity to power an EV for the given annual mileage, kWdc.
pub fn ev_extra_pv(miles_per_year: f64, ev: &EvParams, params: &TechParams) -> Result<f64> {
    if miles_per_year < 0.0 {
        return Err(EngineError::OutOfRange {
            what: "annual miles",
            value: miles_per_year,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    Ok(miles_per_year / ev.miles_per_kwh / params.pv_yield)
}
