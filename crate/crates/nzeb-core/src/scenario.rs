//! Scenario definition shared by the savings and finance modules.

use crate::error::{EngineError, Result};
use crate::params::{Construction, EvParams, HomeProfile, TechParams};

/// Whether the system goes in with the house or afterwards. Retrofits pay
/// existing-construction prices; installs at construction pay new-construction
/// prices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstallTiming {
    AtConstruction,
    Retrofit,
}

/// What provides the home's storage.
#[derive(Debug, Clone, PartialEq)]
pub enum StorageMedium {
    WallBattery,
    /// An already-owned EV discharging through a bidirectional charger. Only
    /// the charger (and any extra PV) count as system cost.
    V2h { charger_cost: f64, ev: EvParams },
}

/// One home-economics case.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub profile: HomeProfile,
    pub install_year: i32,
    pub install_timing: InstallTiming,
    /// Fraction of the average daily load the storage must cover (0..=1).
    pub storage_effectiveness: f64,
    pub storage_medium: StorageMedium,
    pub itc_pv: bool,
    pub itc_battery: bool,
    pub ev_miles_per_year: Option<f64>,
    /// Add PV sized for the EV mileage on top of the net-zero array.
    pub extra_pv_for_ev: bool,
}

impl ScenarioConfig {
    pub fn new(profile: HomeProfile, install_year: i32, timing: InstallTiming) -> Self {
        Self {
            profile,
            install_year,
            install_timing: timing,
            storage_effectiveness: 0.0,
            storage_medium: StorageMedium::WallBattery,
            itc_pv: false,
            itc_battery: false,
            ev_miles_per_year: None,
            extra_pv_for_ev: false,
        }
    }

    pub fn with_storage(mut self, effectiveness: f64) -> Self {
        self.storage_effectiveness = effectiveness;
        self
    }

    pub fn with_itc(mut self, pv: bool, battery: bool) -> Self {
        self.itc_pv = pv;
        self.itc_battery = battery;
        self
    }

    pub fn with_v2h(mut self, charger_cost: f64, ev: EvParams) -> Self {
        self.storage_medium = StorageMedium::V2h { charger_cost, ev };
        self
    }

    pub fn with_ev_miles(mut self, miles: f64, extra_pv: bool) -> Self {
        self.ev_miles_per_year = Some(miles);
        self.extra_pv_for_ev = extra_pv;
        self
    }

    /// Which installed-cost curves the scenario prices against.
    pub fn curve_construction(&self) -> Construction {
        match self.install_timing {
            InstallTiming::AtConstruction => Construction::New,
            InstallTiming::Retrofit => Construction::Existing,
        }
    }

    /// Net-zero PV size plus any EV increment, kWdc.
    pub fn pv_kw(&self, params: &TechParams) -> f64 {
        let mut kw = self.profile.effective_load() / params.pv_yield;
        if self.extra_pv_for_ev {
            if let (Some(miles), Some(ev)) = (self.ev_miles_per_year, self.ev_params()) {
                kw += miles / ev.miles_per_kwh / params.pv_yield;
            }
        }
        kw
    }

    /// Required nameplate storage, kWh (zero for no-storage scenarios).
    pub fn battery_kwh(&self, params: &TechParams) -> f64 {
        self.storage_effectiveness * (self.profile.effective_load() / 365.0)
            / params.storage_derating
    }

    /// EV parameters when the scenario involves one (V2H medium).
    pub fn ev_params(&self) -> Option<&EvParams> {
        match &self.storage_medium {
            StorageMedium::V2h { ev, .. } => Some(ev),
            StorageMedium::WallBattery => None,
        }
    }

    pub fn validate(&self, params: &TechParams) -> Result<()> {
        self.profile.validate()?;
        if !(0.0..=1.0).contains(&self.storage_effectiveness) {
            return Err(EngineError::OutOfRange {
                what: "storage effectiveness",
                value: self.storage_effectiveness,
                min: 0.0,
                max: 1.0,
            });
        }
        if self.install_timing == InstallTiming::AtConstruction
            && self.profile.construction != Construction::New
        {
            return Err(EngineError::InvalidScenario(
                "install at construction requires a new-construction home".into(),
            ));
        }
        if let StorageMedium::V2h { ev, .. } = &self.storage_medium {
            let required = self.battery_kwh(params);
            if ev.battery_kwh < required {
                return Err(EngineError::InvalidScenario(format!(
                    "EV battery {:.1} kWh below required storage {:.1} kWh",
                    ev.battery_kwh, required
                )));
            }
        }
        if self.extra_pv_for_ev && self.ev_miles_per_year.is_none() {
            return Err(EngineError::InvalidScenario(
                "extra PV for EV requires annual mileage".into(),
            ));
        }
        Ok(())
    }
}
