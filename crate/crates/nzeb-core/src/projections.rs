//! Installed-cost projections, grid price, utility LCOE anchors, and the
//! state-level accounting arithmetic.
//!
//! All series are real 2020$ and evaluate as pure functions of the loaded
//! data bundle; nominal values exist only at presentation time.

use crate::curves::{DataBundle, GridStackRow};
use crate::error::{EngineError, Result};
use crate::params::{Construction, GridPriceModel};

pub const CURVE_FIRST_YEAR: i32 = 2020;
pub const CURVE_LAST_YEAR: i32 = 2050;

/// Dollar basis for price queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Real2020,
    Nominal,
}

/// Utility-scale LCOE series selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UtilityKind {
    Pv,
    PvPlus4hBattery,
}

fn check_year(year: i32, min: i32, max: i32) -> Result<()> {
    if year < min || year > max {
        return Err(EngineError::OutOfRange {
            what: "year",
            value: year as f64,
            min: min as f64,
            max: max as f64,
        });
    }
    Ok(())
}

/// Validates a year against the curve domain [2020, 2050].
pub fn check_curve_year(year: i32) -> Result<()> {
    check_year(year, CURVE_FIRST_YEAR, CURVE_LAST_YEAR)
}

/// Installed residential PV cost, $/Wdc real 2020$.
///
/// New construction avoids retrofit soft costs; its price equals the existing
/// curve five years further along, converging by 2050.
pub fn pv_installed_cost(bundle: &DataBundle, year: i32, construction: Construction) -> Result<f64> {
    check_year(year, CURVE_FIRST_YEAR, CURVE_LAST_YEAR)?;
    Ok(pv_installed_cost_at(bundle, year as f64, construction))
}

/// Continuous-year variant used by the monthly crossover scan.
pub fn pv_installed_cost_at(bundle: &DataBundle, year: f64, construction: Construction) -> f64 {
    let y = match construction {
        Construction::Existing => year,
        Construction::New => (year + 5.0).min(CURVE_LAST_YEAR as f64),
    };
    bundle.pv_installed_existing.eval(y)
}

/// Installed residential battery cost, $/kWh real 2020$.
pub fn battery_installed_cost(
    bundle: &DataBundle,
    year: i32,
    construction: Construction,
) -> Result<f64> {
    check_year(year, CURVE_FIRST_YEAR, CURVE_LAST_YEAR)?;
    Ok(battery_installed_cost_at(bundle, year as f64, construction))
}

/// Continuous-year variant; also serves replacement pricing past 2050 via the
/// floored linear extrapolation.
pub fn battery_installed_cost_at(bundle: &DataBundle, year: f64, construction: Construction) -> f64 {
    match construction {
        Construction::Existing => bundle.battery_installed_existing.eval(year),
        Construction::New => bundle.battery_installed_new.eval(year),
    }
}

/// Retail "out of the wall" electricity price, cents/kWh.
pub fn grid_price(model: &GridPriceModel, year: i32, basis: Basis) -> Result<f64> {
    if year < CURVE_FIRST_YEAR {
        return Err(EngineError::OutOfRange {
            what: "year",
            value: year as f64,
            min: CURVE_FIRST_YEAR as f64,
            max: f64::INFINITY,
        });
    }
    let t = (year - CURVE_FIRST_YEAR) as f64;
    let real = model.base_price_2020 * (1.0 + model.real_escalation).powf(t);
    Ok(match basis {
        Basis::Real2020 => real,
        Basis::Nominal => real * (1.0 + model.nominal_escalation).powf(t),
    })
}

/// Utility-scale LCOE anchors, cents/kWh real 2020$.
pub fn utility_lcoe(bundle: &DataBundle, year: i32, kind: UtilityKind) -> Result<f64> {
    check_year(year, 2022, CURVE_LAST_YEAR)?;
    let curve = match kind {
        UtilityKind::Pv => &bundle.utility_lcoe_pv,
        UtilityKind::PvPlus4hBattery => &bundle.utility_lcoe_pv_battery,
    };
    Ok(curve.eval(year as f64))
}

/// Fraction of generated electricity that reaches retail customers.
pub fn delivery_efficiency(retail_twh: f64, losses_twh: f64) -> Result<f64> {
    if retail_twh < 0.0 || losses_twh < 0.0 {
        return Err(EngineError::OutOfRange {
            what: "energy",
            value: retail_twh.min(losses_twh),
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    let total = retail_twh + losses_twh;
    if total == 0.0 {
        return Err(EngineError::UndefinedRatio(
            "delivery efficiency with zero retail and zero losses",
        ));
    }
    Ok(retail_twh / total)
}

/// Average annual consumption per customer, kWh/yr.
pub fn avg_consumption(class_sales_kwh: f64, class_customers: u64) -> Result<f64> {
    if class_customers == 0 {
        return Err(EngineError::UndefinedRatio(
            "average consumption with zero customers",
        ));
    }
    Ok(class_sales_kwh / class_customers as f64)
}

/// Grid-stack components at a year, cents/kWh real 2020$.
pub fn grid_stack(bundle: &DataBundle, year: i32) -> Result<GridStackRow> {
    check_year(year, CURVE_FIRST_YEAR, CURVE_LAST_YEAR)?;
    bundle
        .grid_stack_at(year as f64)
        .ok_or_else(|| EngineError::MissingData("grid price components".into()))
}

/// Grid stack with the generation component replaced by utility PV LCOE:
/// what delivering utility solar to the meter would cost.
pub fn grid_stack_with_utility_pv(bundle: &DataBundle, year: i32) -> Result<GridStackRow> {
    let mut row = grid_stack(bundle, year)?;
    row.generation = utility_lcoe(bundle, year.max(2022), UtilityKind::Pv)?;
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::DataBundle;
    use approx::assert_abs_diff_eq;

    fn bundle() -> DataBundle {
        DataBundle::builtin()
    }

    #[test]
    fn pv_cost_hits_published_anchors() {
        let b = bundle();
        assert_eq!(pv_installed_cost(&b, 2020, Construction::Existing).unwrap(), 2.26);
        assert_eq!(pv_installed_cost(&b, 2050, Construction::Existing).unwrap(), 0.70);
    }

    #[test]
    fn new_construction_is_five_years_ahead() {
        let b = bundle();
        assert_eq!(
            pv_installed_cost(&b, 2045, Construction::New).unwrap(),
            pv_installed_cost(&b, 2050, Construction::Existing).unwrap()
        );
        assert_eq!(
            pv_installed_cost(&b, 2025, Construction::New).unwrap(),
            pv_installed_cost(&b, 2030, Construction::Existing).unwrap()
        );
    }

    #[test]
    fn pv_cost_is_non_increasing() {
        let b = bundle();
        let v2035 = pv_installed_cost(&b, 2035, Construction::Existing).unwrap();
        let v2020 = pv_installed_cost(&b, 2020, Construction::Existing).unwrap();
        assert!(v2035 <= v2020);
        for c in [Construction::Existing, Construction::New] {
            let mut prev = f64::INFINITY;
            for y in 2020..=2050 {
                let v = pv_installed_cost(&b, y, c).unwrap();
                assert!(v <= prev + 1e-12);
                prev = v;
            }
        }
    }

    #[test]
    fn pv_cost_rejects_out_of_range_years() {
        let b = bundle();
        assert!(pv_installed_cost(&b, 2019, Construction::Existing).is_err());
        assert!(pv_installed_cost(&b, 2051, Construction::New).is_err());
    }

    #[test]
    fn battery_cost_anchors_and_interpolation() {
        let b = bundle();
        assert_eq!(battery_installed_cost(&b, 2025, Construction::Existing).unwrap(), 569.0);
        assert_eq!(battery_installed_cost(&b, 2040, Construction::New).unwrap(), 244.0);
        // linear between (2020, 784) and (2025, 569)
        assert_abs_diff_eq!(
            battery_installed_cost(&b, 2022, Construction::Existing).unwrap(),
            698.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn battery_extrapolation_continues_last_segment_with_floor() {
        let b = bundle();
        let v2045 = battery_installed_cost_at(&b, 2045.0, Construction::Existing);
        assert_abs_diff_eq!(v2045, 332.0 - 5.0 * 11.3, epsilon = 1e-9);
        let far = battery_installed_cost_at(&b, 2080.0, Construction::Existing);
        assert_eq!(far, 150.0);
    }

    #[test]
    fn grid_price_real_and_nominal() {
        let m = GridPriceModel::default();
        assert_eq!(grid_price(&m, 2040, Basis::Real2020).unwrap(), 11.3);
        assert_eq!(grid_price(&m, 2020, Basis::Nominal).unwrap(), 11.3);
        assert_abs_diff_eq!(
            grid_price(&m, 2023, Basis::Nominal).unwrap(),
            11.3 * 1.025f64.powi(3),
            epsilon = 1e-12
        );
        assert!(grid_price(&m, 2019, Basis::Real2020).is_err());
    }

    #[test]
    fn utility_lcoe_anchors_and_midpoint() {
        let b = bundle();
        assert_eq!(utility_lcoe(&b, 2030, UtilityKind::Pv).unwrap(), 1.6);
        assert_eq!(utility_lcoe(&b, 2050, UtilityKind::PvPlus4hBattery).unwrap(), 1.5);
        assert_abs_diff_eq!(utility_lcoe(&b, 2026, UtilityKind::Pv).unwrap(), 2.35, epsilon = 1e-12);
        assert!(utility_lcoe(&b, 2021, UtilityKind::Pv).is_err());
    }

    #[test]
    fn delivery_efficiency_cases() {
        assert_abs_diff_eq!(delivery_efficiency(242.0, 373.0).unwrap(), 242.0 / 615.0, epsilon = 1e-15);
        assert_eq!(delivery_efficiency(100.0, 0.0).unwrap(), 1.0);
        assert_eq!(delivery_efficiency(0.0, 373.0).unwrap(), 0.0);
        assert!(delivery_efficiency(0.0, 0.0).is_err());
    }

    #[test]
    fn avg_consumption_matches_customer_data() {
        let b = bundle();
        let res = b.state_account.class("residential").unwrap();
        let avg = avg_consumption(res.sales_gwh * 1e6, res.customers).unwrap();
        assert!((avg - 13_300.0).abs() < 100.0, "{avg}");
        let com = b.state_account.class("commercial").unwrap();
        let avg = avg_consumption(com.sales_gwh * 1e6, com.customers).unwrap();
        assert!((avg - 77_000.0).abs() < 500.0, "{avg}");
        assert_eq!(avg_consumption(1000.0, 1).unwrap(), 1000.0);
        assert!(avg_consumption(1000.0, 0).is_err());
    }

    #[test]
    fn grid_stack_sums_to_total_and_substitutes_generation() {
        let b = bundle();
        let row = grid_stack(&b, 2020).unwrap();
        assert!((row.total() - 11.3).abs() < 0.05);
        let sub = grid_stack_with_utility_pv(&b, 2030).unwrap();
        assert_eq!(sub.generation, 1.6);
        let plain = grid_stack(&b, 2030).unwrap();
        assert_abs_diff_eq!(
            sub.total(),
            plain.total() - plain.generation + 1.6,
            epsilon = 1e-12
        );
    }
}
