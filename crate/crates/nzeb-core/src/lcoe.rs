//! Levelized cost of electricity for residential PV and PV+battery systems,
//! the grid price stack, and gasoline-equivalent conversion.
//!
//! Convention: lifetime cost over the analysis period per lifetime nameplate
//! production, with capital net of any tax credit, replacements discounted at
//! the real rate to the install year, and battery losses charged against the
//! stored share of energy.

use crate::curves::DataBundle;
use crate::error::Result;
use crate::finance::discount_factor;
use crate::params::{Construction, EvParams, FinancingTerms, HomeProfile, TechParams};
use crate::projections::{
    battery_installed_cost_at, check_curve_year, grid_stack, grid_stack_with_utility_pv,
    pv_installed_cost_at,
};
use crate::sizing::battery_size_grid_independent;

/// An LCOE with its additive component breakdown (cents/kWh, real 2020$).
#[derive(Debug, Clone, PartialEq)]
pub struct LcoeResult {
    pub cents_per_kwh: f64,
    pub breakdown: Vec<(&'static str, f64)>,
    /// Frozen copies of the assumptions the number was computed under.
    pub tech: TechParams,
    pub terms: FinancingTerms,
}

impl LcoeResult {
    fn from_components(
        breakdown: Vec<(&'static str, f64)>,
        tech: &TechParams,
        terms: &FinancingTerms,
    ) -> Self {
        let total = breakdown.iter().map(|(_, v)| v).sum();
        Self {
            cents_per_kwh: total,
            breakdown,
            tech: tech.clone(),
            terms: terms.clone(),
        }
    }
}

/// Continuous-year PV-only LCOE in cents/kWh (per-kW basis).
pub fn lcoe_pv_at(
    bundle: &DataBundle,
    year: f64,
    construction: Construction,
    itc: bool,
    params: &TechParams,
    terms: &FinancingTerms,
) -> f64 {
    let itc_frac = if itc { terms.itc_pv } else { 0.0 };
    let capital = 1000.0 * pv_installed_cost_at(bundle, year, construction) * (1.0 - itc_frac);
    let inverter = inverter_replacement_pv(1.0, params, terms);
    let energy = params.pv_yield * params.analysis_period as f64;
    100.0 * (capital + inverter) / energy
}

fn inverter_replacement_pv(kw: f64, params: &TechParams, terms: &FinancingTerms) -> f64 {
    let mut total = 0.0;
    let mut t = params.inverter_life;
    while t < params.analysis_period {
        total += params.inverter_cost * kw * 1000.0 * discount_factor(terms.real_discount, t as f64);
        t += params.inverter_life;
    }
    total
}

/// Unsubsidized or credited LCOE for rooftop PV.
pub fn lcoe_pv(
    bundle: &DataBundle,
    year: i32,
    construction: Construction,
    itc: bool,
    params: &TechParams,
    terms: &FinancingTerms,
) -> Result<LcoeResult> {
    check_curve_year(year)?;
    let itc_frac = if itc { terms.itc_pv } else { 0.0 };
    let energy = params.pv_yield * params.analysis_period as f64;
    let capital =
        1000.0 * pv_installed_cost_at(bundle, year as f64, construction) * (1.0 - itc_frac);
    let inverter = inverter_replacement_pv(1.0, params, terms);
    Ok(LcoeResult::from_components(
        vec![
            ("pv_capital", 100.0 * capital / energy),
            ("inverter_replacement", 100.0 * inverter / energy),
        ],
        params,
        terms,
    ))
}

/// LCOE for a home-scale PV + battery system sized for the given profile and
/// storage effectiveness. Battery replacements are priced on the
/// new-construction curve at each battery-life multiple.
pub fn lcoe_pv_battery(
    bundle: &DataBundle,
    year: i32,
    profile: &HomeProfile,
    effectiveness: f64,
    itc: bool,
    params: &TechParams,
    terms: &FinancingTerms,
) -> Result<LcoeResult> {
    check_curve_year(year)?;
    let load = profile.effective_load();
    let kw = load / params.pv_yield;
    let kwh = battery_size_grid_independent(profile, params, effectiveness)?;
    let itc_frac = if itc { terms.itc_pv } else { 0.0 };
    let itc_batt = if itc { terms.itc_battery } else { 0.0 };
    let cons = match profile.construction {
        Construction::New => Construction::New,
        Construction::Existing => Construction::Existing,
    };

    let pv_capital =
        kw * 1000.0 * pv_installed_cost_at(bundle, year as f64, cons) * (1.0 - itc_frac);
    let inverter = inverter_replacement_pv(kw, params, terms);
    let battery_capital =
        kwh * battery_installed_cost_at(bundle, year as f64, cons) * (1.0 - itc_batt);
    let mut battery_repl = 0.0;
    let mut t = params.battery_life;
    while t < params.analysis_period {
        let price = battery_installed_cost_at(bundle, year as f64 + t as f64, Construction::New);
        battery_repl += kwh * price * discount_factor(terms.real_discount, t as f64);
        t += params.battery_life;
    }

    let delivered_share = 1.0 - (1.0 - params.battery_efficiency) * effectiveness;
    let energy = load * params.analysis_period as f64 * delivered_share;
    Ok(LcoeResult::from_components(
        vec![
            ("pv_capital", 100.0 * pv_capital / energy),
            ("inverter_replacement", 100.0 * inverter / energy),
            ("battery_capital", 100.0 * battery_capital / energy),
            ("battery_replacement", 100.0 * battery_repl / energy),
        ],
        params,
        terms,
    ))
}

/// Converts an electricity price to its gasoline-equivalent $/gal for an
/// average EV displacing an average gasoline vehicle.
pub fn gas_equivalent(cents_per_kwh: f64, ev: &EvParams) -> f64 {
    (cents_per_kwh / 100.0) * ev.gasoline_mpg / ev.miles_per_kwh
}

/// The residential price stack as an LCOE-style result.
pub fn grid_stack_lcoe(
    bundle: &DataBundle,
    year: i32,
    params: &TechParams,
    terms: &FinancingTerms,
) -> Result<LcoeResult> {
    let row = grid_stack(bundle, year)?;
    Ok(LcoeResult::from_components(
        vec![
            ("generation", row.generation),
            ("transmission", row.transmission),
            ("distribution", row.distribution),
            ("profit_taxes", row.profit_taxes),
        ],
        params,
        terms,
    ))
}

/// The stack with utility PV LCOE substituted for the generation component.
pub fn grid_stack_utility_pv_lcoe(
    bundle: &DataBundle,
    year: i32,
    params: &TechParams,
    terms: &FinancingTerms,
) -> Result<LcoeResult> {
    let row = grid_stack_with_utility_pv(bundle, year)?;
    Ok(LcoeResult::from_components(
        vec![
            ("generation", row.generation),
            ("transmission", row.transmission),
            ("distribution", row.distribution),
            ("profit_taxes", row.profit_taxes),
        ],
        params,
        terms,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn fixtures() -> (DataBundle, TechParams, FinancingTerms) {
        (DataBundle::builtin(), TechParams::default(), FinancingTerms::default())
    }

    #[test]
    fn breakdown_sums_to_total() {
        let (b, p, t) = fixtures();
        let r = lcoe_pv_battery(&b, 2030, &HomeProfile::average_existing(), 1.0, false, &p, &t)
            .unwrap();
        let sum: f64 = r.breakdown.iter().map(|(_, v)| v).sum();
        assert_abs_diff_eq!(sum, r.cents_per_kwh, epsilon = 1e-9);
        assert!(r.cents_per_kwh > 0.0);
    }

    #[test]
    fn itc_scales_capital_by_exactly_point_seven() {
        let (b, p, t) = fixtures();
        let plain = lcoe_pv(&b, 2030, Construction::Existing, false, &p, &t).unwrap();
        let credited = lcoe_pv(&b, 2030, Construction::Existing, true, &p, &t).unwrap();
        let cap = |r: &LcoeResult| r.breakdown[0].1;
        let rel = (cap(&credited) - 0.7 * cap(&plain)).abs() / cap(&plain);
        assert!(rel < 1e-9);
        // inverter term unchanged
        assert_eq!(plain.breakdown[1].1, credited.breakdown[1].1);
    }

    #[test]
    fn zero_effectiveness_equals_pv_only() {
        let (b, p, t) = fixtures();
        let pv = lcoe_pv(&b, 2035, Construction::Existing, false, &p, &t).unwrap();
        let sys = lcoe_pv_battery(&b, 2035, &HomeProfile::average_existing(), 0.0, false, &p, &t)
            .unwrap();
        assert_abs_diff_eq!(sys.cents_per_kwh, pv.cents_per_kwh, epsilon = 1e-9);
    }

    #[test]
    fn battery_never_lowers_lcoe() {
        let (b, p, t) = fixtures();
        let home = HomeProfile::average_existing();
        for year in [2022, 2030, 2040, 2050] {
            let pv = lcoe_pv(&b, year, Construction::Existing, false, &p, &t).unwrap();
            let sys = lcoe_pv_battery(&b, year, &home, 1.0, false, &p, &t).unwrap();
            assert!(sys.cents_per_kwh >= pv.cents_per_kwh);
        }
    }

    #[test]
    fn gas_equivalent_examples() {
        let ev = EvParams::default();
        assert_abs_diff_eq!(gas_equivalent(5.8, &ev), 0.44, epsilon = 0.01);
        assert_abs_diff_eq!(gas_equivalent(17.7, &ev), 1.34, epsilon = 0.01);
        assert_eq!(gas_equivalent(0.0, &ev), 0.0);
    }

    #[test]
    fn stack_substitution_is_definitional() {
        let (b, p, t) = fixtures();
        let plain = grid_stack_lcoe(&b, 2030, &p, &t).unwrap();
        let sub = grid_stack_utility_pv_lcoe(&b, 2030, &p, &t).unwrap();
        let gen = plain.breakdown[0].1;
        assert_abs_diff_eq!(
            sub.cents_per_kwh,
            plain.cents_per_kwh - gen + 1.6,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(plain.cents_per_kwh, 11.3, epsilon = 0.05);
    }

    #[test]
    fn out_of_range_year_rejected() {
        let (b, p, t) = fixtures();
        assert!(lcoe_pv(&b, 2019, Construction::Existing, false, &p, &t).is_err());
        assert!(lcoe_pv(&b, 2051, Construction::New, false, &p, &t).is_err());
    }

    proptest! {
        #[test]
        fn gas_equivalent_is_linear(price in 0.0..100.0f64, scale in 0.1..10.0f64) {
            let ev = EvParams::default();
            let a = gas_equivalent(price, &ev);
            let b = gas_equivalent(scale * price, &ev);
            prop_assert!((b - scale * a).abs() < 1e-9);
        }

        #[test]
        fn lcoe_monotone_in_cost_and_yield(yield_scale in 1.01..3.0f64) {
            let (b, mut p, t) = fixtures();
            let base = lcoe_pv(&b, 2030, Construction::Existing, false, &p, &t).unwrap();
            // higher installed cost (earlier year) raises LCOE
            let earlier = lcoe_pv(&b, 2022, Construction::Existing, false, &p, &t).unwrap();
            prop_assert!(earlier.cents_per_kwh > base.cents_per_kwh);
            // higher yield lowers LCOE
            p.pv_yield *= yield_scale;
            let better = lcoe_pv(&b, 2030, Construction::Existing, false, &p, &t).unwrap();
            prop_assert!(better.cents_per_kwh < base.cents_per_kwh);
        }
    }
}
