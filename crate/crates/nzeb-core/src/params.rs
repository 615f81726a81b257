//! Engine parameters and the plain-text configuration format.
//!
//! Defaults mirror the reference input set; every value can be overridden from
//! a `key = value` config file whose keys use the same names (lower-cased,
//! underscores), e.g. `pv_yield = 1400`.

use std::collections::BTreeMap;

use crate::error::{EngineError, Result};

/// Existing construction vs. built-new. New construction gets the installed
/// cost of existing construction five years further along the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Existing,
    New,
}

/// PV/battery/inverter technical assumptions.
#[derive(Debug, Clone, PartialEq)]
pub struct TechParams {
    /// Annual production per kWdc of PV (kWh/kWdc/yr).
    pub pv_yield: f64,
    /// PV output degradation per year (fraction).
    pub pv_degradation: f64,
    /// Inverter replacement cost, $/Wdc.
    pub inverter_cost: f64,
    /// Inverter life, years.
    pub inverter_life: u32,
    /// Battery round-trip efficiency (fraction).
    pub battery_efficiency: f64,
    /// Battery capacity degradation (fraction).
    pub battery_degradation: f64,
    /// Battery life, years.
    pub battery_life: u32,
    /// Cash-flow analysis period, years.
    pub analysis_period: u32,
    /// Productive service time of the PV system, years.
    pub service_time: u32,
    /// Calibrated ratio of average daily load to nameplate storage needed for
    /// grid independence over the service life.
    pub storage_derating: f64,
}

impl Default for TechParams {
    fn default() -> Self {
        Self {
            pv_yield: 1400.0,
            pv_degradation: 0.005,
            inverter_cost: 0.10,
            inverter_life: 15,
            battery_efficiency: 0.95,
            battery_degradation: 0.035,
            battery_life: 10,
            analysis_period: 30,
            service_time: 25,
            storage_derating: 0.8636,
        }
    }
}

impl TechParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("pv_yield", self.pv_yield),
            ("inverter_cost", self.inverter_cost),
            ("battery_efficiency", self.battery_efficiency),
            ("storage_derating", self.storage_derating),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(EngineError::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.storage_derating > 1.0 {
            return Err(EngineError::InvalidParameter(format!(
                "storage_derating must be in (0, 1], got {}",
                self.storage_derating
            )));
        }
        if self.service_time > self.analysis_period {
            return Err(EngineError::InvalidParameter(
                "service_time cannot exceed analysis_period".into(),
            ));
        }
        Ok(())
    }
}

/// Electric-vehicle assumptions for transport economics and V2H.
#[derive(Debug, Clone, PartialEq)]
pub struct EvParams {
    pub battery_kwh: f64,
    pub range_miles: f64,
    /// Stored rather than recomputed from range/battery so published rounding
    /// is preserved; `validate` checks consistency at 0.5%.
    pub miles_per_kwh: f64,
    pub gasoline_mpg: f64,
    /// $/gal, real 2020$.
    pub gasoline_price: f64,
    /// Installed cost of a bidirectional (V2H) charger, $.
    pub charger_cost: f64,
}

impl Default for EvParams {
    fn default() -> Self {
        Self {
            battery_kwh: 68.7,
            range_miles: 220.0,
            miles_per_kwh: 3.20,
            gasoline_mpg: 24.2,
            gasoline_price: 3.16,
            charger_cost: 6000.0,
        }
    }
}

impl EvParams {
    pub fn validate(&self) -> Result<()> {
        let implied = self.range_miles / self.battery_kwh;
        if (implied - self.miles_per_kwh).abs() / self.miles_per_kwh > 0.005 {
            return Err(EngineError::InvalidParameter(format!(
                "EV efficiency {:.3} mi/kWh inconsistent with range/battery = {:.3}",
                self.miles_per_kwh, implied
            )));
        }
        Ok(())
    }
}

/// Financing and discounting assumptions.
#[derive(Debug, Clone, PartialEq)]
pub struct FinancingTerms {
    /// Down-payment fraction for financed schedules.
    pub down_payment: f64,
    /// Loan term, years.
    pub loan_term: u32,
    /// Loan APR (nominal), fraction/yr.
    pub nominal_rate: f64,
    /// Real discount rate, fraction/yr.
    pub real_discount: f64,
    /// Nominal discount rate, fraction/yr.
    pub nominal_discount: f64,
    /// General inflation rate, fraction/yr.
    pub inflation: f64,
    /// Marginal income-tax rate (loan-interest deduction when enabled).
    pub marginal_tax: f64,
    /// Deduct loan interest at the marginal rate in financed schedules.
    pub interest_deduction: bool,
    /// Investment tax credit fraction applied to PV when a scenario opts in.
    pub itc_pv: f64,
    /// Investment tax credit fraction applied to storage when opted in.
    pub itc_battery: f64,
}

impl Default for FinancingTerms {
    fn default() -> Self {
        Self {
            down_payment: 0.10,
            loan_term: 30,
            nominal_rate: 0.045,
            real_discount: 0.0195,
            nominal_discount: 0.045,
            inflation: 0.025,
            marginal_tax: 0.20,
            interest_deduction: false,
            itc_pv: 0.30,
            itc_battery: 0.30,
        }
    }
}

impl FinancingTerms {
    /// (1 + nominal) must equal (1 + real)(1 + inflation) within 0.05 pp.
    pub fn validate(&self) -> Result<()> {
        let implied = (1.0 + self.real_discount) * (1.0 + self.inflation);
        if ((1.0 + self.nominal_discount) - implied).abs() > 0.0005 {
            return Err(EngineError::InvalidParameter(format!(
                "nominal discount {:.4} inconsistent with real {:.4} + inflation {:.4}",
                self.nominal_discount, self.real_discount, self.inflation
            )));
        }
        if self.nominal_rate <= -1.0 {
            return Err(EngineError::InvalidParameter(
                "nominal rate below -100%".into(),
            ));
        }
        Ok(())
    }
}

/// Retail grid price model (real 2020 cents/kWh base).
#[derive(Debug, Clone, PartialEq)]
pub struct GridPriceModel {
    pub base_price_2020: f64,
    pub real_escalation: f64,
    pub nominal_escalation: f64,
}

impl Default for GridPriceModel {
    fn default() -> Self {
        Self {
            base_price_2020: 11.3,
            real_escalation: 0.0,
            nominal_escalation: 0.025,
        }
    }
}

/// One home's annual electricity picture.
#[derive(Debug, Clone, PartialEq)]
pub struct HomeProfile {
    pub name: String,
    /// Annual load before any efficiency package, kWh/yr.
    pub annual_load: f64,
    pub construction: Construction,
    pub efficiency_package: Option<EfficiencyPackage>,
}

/// A bought-up-front bundle of efficiency measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyPackage {
    /// Fraction of annual load removed by the measures.
    pub savings_fraction: f64,
    /// Installed cost, $.
    pub upfront_cost: f64,
}

impl HomeProfile {
    pub fn new(name: impl Into<String>, annual_load: f64, construction: Construction) -> Self {
        Self {
            name: name.into(),
            annual_load,
            construction,
            efficiency_package: None,
        }
    }

    pub fn with_package(mut self, package: EfficiencyPackage) -> Self {
        self.efficiency_package = Some(package);
        self
    }

    /// Load remaining after the efficiency package, kWh/yr.
    pub fn effective_load(&self) -> f64 {
        match self.efficiency_package {
            Some(p) => self.annual_load * (1.0 - p.savings_fraction),
            None => self.annual_load,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.annual_load > 0.0) {
            return Err(EngineError::InvalidParameter(format!(
                "annual_load must be positive, got {}",
                self.annual_load
            )));
        }
        if let Some(p) = self.efficiency_package {
            if !(p.savings_fraction > 0.0 && p.savings_fraction < 1.0) {
                return Err(EngineError::InvalidParameter(
                    "efficiency savings fraction must be in (0, 1)".into(),
                ));
            }
        }
        Ok(())
    }

    /// The average Florida residence (13,300 kWh/yr).
    pub fn average_existing() -> Self {
        Self::new("existing", 13_300.0, Construction::Existing)
    }

    /// A new code-built Orlando home (12,086 kWh/yr).
    pub fn code_home() -> Self {
        Self::new("code", 12_086.0, Construction::New)
    }

    /// Code home plus the 31.7% / $5,889 efficiency package.
    pub fn improved_home() -> Self {
        Self::new("improved", 12_086.0, Construction::New).with_package(EfficiencyPackage {
            savings_fraction: 0.317,
            upfront_cost: 5889.0,
        })
    }
}

/// Full parameter set, bundled for config parsing and the CLI.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    pub tech: TechParams,
    pub ev: EvParams,
    pub terms: FinancingTerms,
    pub grid: GridPriceModel,
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        self.tech.validate()?;
        self.ev.validate()?;
        self.terms.validate()
    }

    /// Applies `key = value` overrides parsed from a config file.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (lineno, key, value) in parse_key_values(text)? {
            self.apply_key(&key, &value).map_err(|e| {
                EngineError::InvalidParameter(format!("line {lineno}: {e}"))
            })?;
        }
        self.validate()
    }

    fn apply_key(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let f = || -> std::result::Result<f64, String> {
            value.parse().map_err(|_| format!("`{key}`: bad number `{value}`"))
        };
        let u = || -> std::result::Result<u32, String> {
            value.parse().map_err(|_| format!("`{key}`: bad integer `{value}`"))
        };
        let b = || -> std::result::Result<bool, String> {
            match value {
                "true" | "on" | "1" => Ok(true),
                "false" | "off" | "0" => Ok(false),
                _ => Err(format!("`{key}`: bad flag `{value}`")),
            }
        };
        // Percent-style inputs use the same units as the reference table.
        match key {
            "pv_yield" => self.tech.pv_yield = f()?,
            "pv_degradation_factor" => self.tech.pv_degradation = f()? / 100.0,
            "pv_inverter_cost" => self.tech.inverter_cost = f()?,
            "pv_inverter_life" => self.tech.inverter_life = u()?,
            "battery_efficiency" => self.tech.battery_efficiency = f()? / 100.0,
            "battery_degradation_factor" => self.tech.battery_degradation = f()? / 100.0,
            "battery_life" => self.tech.battery_life = u()?,
            "analysis_period" => self.tech.analysis_period = u()?,
            "service_time" => self.tech.service_time = u()?,
            "storage_derating" => self.tech.storage_derating = f()?,
            "average_ev_size" => self.ev.battery_kwh = f()?,
            "average_ev_range_miles" => self.ev.range_miles = f()?,
            "ev_miles_per_kwh" => self.ev.miles_per_kwh = f()?,
            "gasoline_mpg" => self.ev.gasoline_mpg = f()?,
            "gasoline_price" => self.ev.gasoline_price = f()?,
            "charger_cost" => self.ev.charger_cost = f()?,
            "down_payment" => self.terms.down_payment = f()? / 100.0,
            "loan_term" => self.terms.loan_term = u()?,
            "loan_rate" => self.terms.nominal_rate = f()? / 100.0,
            "general_inflation_rate" => {
                self.terms.inflation = f()? / 100.0;
                self.grid.nominal_escalation = self.terms.inflation;
            }
            "real_discount_rate" => self.terms.real_discount = f()? / 100.0,
            "nominal_discount_rate" => {
                self.terms.nominal_discount = f()? / 100.0;
                self.terms.nominal_rate = self.terms.nominal_discount;
            }
            "marginal_tax_rate" => self.terms.marginal_tax = f()? / 100.0,
            "interest_deduction" => self.terms.interest_deduction = b()?,
            "itc" => {
                let v = f()? / 100.0;
                self.terms.itc_pv = v;
                self.terms.itc_battery = v;
            }
            "electricity_price_2020" => self.grid.base_price_2020 = f()? * 100.0,
            "real_electricity_price_escalation_rate" => self.grid.real_escalation = f()? / 100.0,
            "nominal_electricity_price_escalation_rate" => {
                self.grid.nominal_escalation = f()? / 100.0
            }
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }
}

/// Parses `key = value` lines; `#`/`;` comments and `[section]` headers are
/// skipped (sections exist only for readability).
fn parse_key_values(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    let mut seen = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() || (line.starts_with('[') && line.ends_with(']')) {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(EngineError::InvalidParameter(format!(
                "config line {}: expected `key = value`, got `{raw}`",
                i + 1
            )));
        };
        let key = k.trim().to_string();
        if let Some(prev) = seen.insert(key.clone(), i + 1) {
            return Err(EngineError::InvalidParameter(format!(
                "config line {}: `{key}` already set on line {prev}",
                i + 1
            )));
        }
        out.push((i + 1, key, v.trim().to_string()));
    }
    Ok(out)
}
