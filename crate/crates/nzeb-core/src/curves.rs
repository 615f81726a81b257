//! Year-indexed cost curves and the data bundle that feeds the engine.
//!
//! Every curve is a list of `(year, value)` anchors in real 2020 dollars with
//! piecewise-linear interpolation between anchors. Curves are data, not code:
//! they ship as CSV files (`year,value` header) referenced from a manifest, so
//! recalibration never requires a code change.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use crate::error::{EngineError, Result};

/// Unit of a curve's values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveUnit {
    UsdPerWdc,
    UsdPerKwhStorage,
    CentsPerKwh,
    UsdPerKwCapex,
    UsdPerKgCapex,
}

impl CurveUnit {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "usd_per_wdc" => Some(Self::UsdPerWdc),
            "usd_per_kwh_storage" => Some(Self::UsdPerKwhStorage),
            "cents_per_kwh" => Some(Self::CentsPerKwh),
            "usd_per_kw_capex" => Some(Self::UsdPerKwCapex),
            "usd_per_kg_capex" => Some(Self::UsdPerKgCapex),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::UsdPerWdc => "usd_per_wdc",
            Self::UsdPerKwhStorage => "usd_per_kwh_storage",
            Self::CentsPerKwh => "cents_per_kwh",
            Self::UsdPerKwCapex => "usd_per_kw_capex",
            Self::UsdPerKgCapex => "usd_per_kg_capex",
        }
    }
}

impl fmt::Display for CurveUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Behaviour past the last anchor year.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extrapolation {
    /// Hold the last anchor value.
    HoldLast,
    /// Continue the slope of the last segment, clamped at a floor value.
    LinearLastSegmentWithFloor(f64),
}

/// A year-indexed anchor series with piecewise-linear interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct CostCurve {
    pub label: String,
    pub unit: CurveUnit,
    /// `(year, value)` pairs; years strictly increasing, values >= 0, real 2020$.
    pub anchors: Vec<(i32, f64)>,
    pub extrapolation: Extrapolation,
}

impl CostCurve {
    pub fn new(
        label: impl Into<String>,
        unit: CurveUnit,
        anchors: Vec<(i32, f64)>,
        extrapolation: Extrapolation,
    ) -> Result<Self> {
        let label = label.into();
        if anchors.is_empty() {
            return Err(EngineError::InvalidCurve {
                label,
                reason: "no anchors".into(),
            });
        }
        for w in anchors.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(EngineError::InvalidCurve {
                    label,
                    reason: format!("anchor years not strictly increasing at {}", w[1].0),
                });
            }
        }
        if let Some(&(y, v)) = anchors.iter().find(|&&(_, v)| !(v >= 0.0)) {
            return Err(EngineError::InvalidCurve {
                label,
                reason: format!("negative or non-finite value {v} at year {y}"),
            });
        }
        Ok(Self {
            label,
            unit,
            anchors,
            extrapolation,
        })
    }

    pub fn first_year(&self) -> i32 {
        self.anchors[0].0
    }

    pub fn last_year(&self) -> i32 {
        self.anchors[self.anchors.len() - 1].0
    }

    /// Evaluates the curve at a (possibly fractional) year.
    ///
    /// Queries at an anchor year return the stored anchor value exactly.
    /// Before the first anchor the first value is held; past the last anchor
    /// the extrapolation policy applies.
    pub fn eval(&self, year: f64) -> f64 {
        let first = &self.anchors[0];
        if year <= first.0 as f64 {
            return first.1;
        }
        let (last_y, last_v) = self.anchors[self.anchors.len() - 1];
        if year >= last_y as f64 {
            if year == last_y as f64 {
                return last_v;
            }
            return match self.extrapolation {
                Extrapolation::HoldLast => last_v,
                Extrapolation::LinearLastSegmentWithFloor(floor) => {
                    if self.anchors.len() < 2 {
                        return last_v.max(floor);
                    }
                    let (py, pv) = self.anchors[self.anchors.len() - 2];
                    let slope = (last_v - pv) / (last_y - py) as f64;
                    (last_v + slope * (year - last_y as f64)).max(floor)
                }
            };
        }
        // Interior: find the segment [y_i, y_i+1) containing the query.
        let idx = self
            .anchors
            .partition_point(|&(y, _)| (y as f64) <= year)
            .saturating_sub(1);
        let (x0, v0) = self.anchors[idx];
        if year == x0 as f64 {
            return v0;
        }
        let (x1, v1) = self.anchors[idx + 1];
        let f = (year - x0 as f64) / (x1 - x0) as f64;
        v0 + f * (v1 - v0)
    }

    /// True when every later anchor is <= every earlier one (technology curves).
    pub fn is_non_increasing(&self) -> bool {
        self.anchors.windows(2).all(|w| w[1].1 <= w[0].1)
    }

    fn require_non_increasing(self) -> Result<Self> {
        if !self.is_non_increasing() {
            return Err(EngineError::InvalidCurve {
                label: self.label,
                reason: "technology cost curve must be non-increasing in year".into(),
            });
        }
        Ok(self)
    }

    /// Parses `year,value` CSV content.
    pub fn from_csv_str(
        label: impl Into<String>,
        unit: CurveUnit,
        content: &str,
        extrapolation: Extrapolation,
    ) -> Result<Self> {
        let label = label.into();
        let mut rdr = csv::Reader::from_reader(content.as_bytes());
        let mut anchors = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let year: i32 = rec
                .get(0)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| EngineError::InvalidCurve {
                    label: label.clone(),
                    reason: format!("bad year field in row {:?}", rec),
                })?;
            let value: f64 = rec
                .get(1)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| EngineError::InvalidCurve {
                    label: label.clone(),
                    reason: format!("bad value field in row {:?}", rec),
                })?;
            anchors.push((year, value));
        }
        Self::new(label, unit, anchors, extrapolation)
    }

    /// Serializes to `year,value` CSV. f64 Display round-trips exactly.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("year,value\n");
        for &(y, v) in &self.anchors {
            out.push_str(&format!("{y},{v}\n"));
        }
        out
    }
}

/// One row of the residential grid-price stack (real 2020 cents/kWh).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridStackRow {
    pub year: i32,
    pub generation: f64,
    pub transmission: f64,
    pub distribution: f64,
    pub profit_taxes: f64,
}

impl GridStackRow {
    pub fn total(&self) -> f64 {
        self.generation + self.transmission + self.distribution + self.profit_taxes
    }
}

/// One sector row of the state energy account (TWh).
#[derive(Debug, Clone, PartialEq)]
pub struct SectorEnergy {
    pub sector: String,
    pub retail_twh: f64,
    pub losses_twh: f64,
    pub fossil_twh: f64,
}

/// One customer-class row: count and annual sales.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomerClass {
    pub class: String,
    pub customers: u64,
    pub sales_gwh: f64,
}

/// Sector energy balances plus customer composition for one reference year.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StateEnergyAccount {
    pub sectors: Vec<SectorEnergy>,
    pub classes: Vec<CustomerClass>,
}

impl StateEnergyAccount {
    pub fn total_retail_twh(&self) -> f64 {
        self.sectors.iter().map(|s| s.retail_twh).sum()
    }

    pub fn total_losses_twh(&self) -> f64 {
        self.sectors.iter().map(|s| s.losses_twh).sum()
    }

    pub fn class(&self, name: &str) -> Option<&CustomerClass> {
        self.classes.iter().find(|c| c.class == name)
    }
}

/// Default battery extrapolation floor, $/kWh. Linear continuation of the last
/// published segment is clamped here so far-future replacements stay physical.
pub const BATTERY_PRICE_FLOOR: f64 = 150.0;

/// Every data series the engine consumes, loaded once and immutable afterwards.
#[derive(Debug, Clone)]
pub struct DataBundle {
    pub pv_installed_existing: CostCurve,
    pub battery_installed_existing: CostCurve,
    pub battery_installed_new: CostCurve,
    pub utility_lcoe_pv: CostCurve,
    pub utility_lcoe_pv_battery: CostCurve,
    pub h2_pv_lcoe: CostCurve,
    pub h2_electrolyzer_capex: CostCurve,
    pub h2_tank_capex: CostCurve,
    pub grid_stack: Vec<GridStackRow>,
    pub state_account: StateEnergyAccount,
}

struct RawBundle {
    curves: HashMap<String, (CurveUnit, String)>,
    grid_components: String,
    state_energy: String,
    customer_classes: String,
}

impl DataBundle {
    /// The bundle compiled into the library (the `data/` directory contents).
    pub fn builtin() -> Self {
        let mut curves = HashMap::new();
        let manifest = include_str!("../data/manifest.csv");
        let files: [(&str, &str); 8] = [
            (
                "pv_installed_existing.csv",
                include_str!("../data/pv_installed_existing.csv"),
            ),
            (
                "battery_installed_existing.csv",
                include_str!("../data/battery_installed_existing.csv"),
            ),
            (
                "battery_installed_new.csv",
                include_str!("../data/battery_installed_new.csv"),
            ),
            (
                "utility_lcoe_pv.csv",
                include_str!("../data/utility_lcoe_pv.csv"),
            ),
            (
                "utility_lcoe_pv_battery.csv",
                include_str!("../data/utility_lcoe_pv_battery.csv"),
            ),
            ("h2_pv_lcoe.csv", include_str!("../data/h2_pv_lcoe.csv")),
            (
                "h2_electrolyzer_capex.csv",
                include_str!("../data/h2_electrolyzer_capex.csv"),
            ),
            ("h2_tank_capex.csv", include_str!("../data/h2_tank_capex.csv")),
        ];
        let lookup: HashMap<&str, &str> = files.into_iter().collect();
        for (label, path, unit) in parse_manifest(manifest).expect("builtin manifest") {
            let content = lookup.get(path.as_str()).expect("builtin manifest path");
            curves.insert(label, (unit, content.to_string()));
        }
        let raw = RawBundle {
            curves,
            grid_components: include_str!("../data/grid_price_components.csv").to_string(),
            state_energy: include_str!("../data/state_energy_2020.csv").to_string(),
            customer_classes: include_str!("../data/customer_classes_2020.csv").to_string(),
        };
        Self::from_raw(raw).expect("builtin data bundle is valid")
    }

    /// Loads a bundle from a directory holding `manifest.csv` plus the files
    /// it references and the three fixed-name tables.
    pub fn load(dir: &Path) -> Result<Self> {
        let read = |name: &str| -> Result<String> {
            let p = dir.join(name);
            std::fs::read_to_string(&p)
                .map_err(|_| EngineError::MissingData(p.display().to_string()))
        };
        let manifest = read("manifest.csv")?;
        let mut curves = HashMap::new();
        for (label, path, unit) in parse_manifest(&manifest)? {
            curves.insert(label, (unit, read(&path)?));
        }
        let raw = RawBundle {
            curves,
            grid_components: read("grid_price_components.csv")?,
            state_energy: read("state_energy_2020.csv")?,
            customer_classes: read("customer_classes_2020.csv")?,
        };
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawBundle) -> Result<Self> {
        let curve = |label: &str, extrap: Extrapolation| -> Result<CostCurve> {
            let (unit, content) = raw
                .curves
                .get(label)
                .ok_or_else(|| EngineError::MissingData(format!("curve `{label}`")))?;
            CostCurve::from_csv_str(label, *unit, content, extrap)
        };
        let floor = Extrapolation::LinearLastSegmentWithFloor(BATTERY_PRICE_FLOOR);
        let bundle = Self {
            pv_installed_existing: curve("pv_installed_existing", Extrapolation::HoldLast)?
                .require_non_increasing()?,
            battery_installed_existing: curve("battery_installed_existing", floor)?
                .require_non_increasing()?,
            battery_installed_new: curve("battery_installed_new", floor)?
                .require_non_increasing()?,
            utility_lcoe_pv: curve("utility_lcoe_pv", Extrapolation::HoldLast)?,
            utility_lcoe_pv_battery: curve("utility_lcoe_pv_battery", Extrapolation::HoldLast)?,
            h2_pv_lcoe: curve("h2_pv_lcoe", Extrapolation::HoldLast)?.require_non_increasing()?,
            h2_electrolyzer_capex: curve("h2_electrolyzer_capex", Extrapolation::HoldLast)?
                .require_non_increasing()?,
            h2_tank_capex: curve("h2_tank_capex", Extrapolation::HoldLast)?
                .require_non_increasing()?,
            grid_stack: parse_grid_stack(&raw.grid_components)?,
            state_account: StateEnergyAccount {
                sectors: parse_state_energy(&raw.state_energy)?,
                classes: parse_customer_classes(&raw.customer_classes)?,
            },
        };
        // Components must reconcile with the published retail total.
        for row in &bundle.grid_stack {
            let total = row.total();
            if (total - 11.3).abs() > 0.05 {
                return Err(EngineError::MalformedData {
                    file: "grid_price_components.csv".into(),
                    reason: format!("components at {} sum to {total:.3}, expected 11.3", row.year),
                });
            }
        }
        Ok(bundle)
    }

    /// Grid-stack components interpolated to an arbitrary year.
    pub fn grid_stack_at(&self, year: f64) -> Option<GridStackRow> {
        if self.grid_stack.is_empty() {
            return None;
        }
        let lerp = |f: fn(&GridStackRow) -> f64| -> f64 {
            let first = &self.grid_stack[0];
            let last = &self.grid_stack[self.grid_stack.len() - 1];
            if year <= first.year as f64 {
                return f(first);
            }
            if year >= last.year as f64 {
                return f(last);
            }
            let idx = self
                .grid_stack
                .partition_point(|r| (r.year as f64) <= year)
                .saturating_sub(1);
            let a = &self.grid_stack[idx];
            let b = &self.grid_stack[idx + 1];
            let t = (year - a.year as f64) / (b.year - a.year) as f64;
            f(a) + t * (f(b) - f(a))
        };
        Some(GridStackRow {
            year: year.floor() as i32,
            generation: lerp(|r| r.generation),
            transmission: lerp(|r| r.transmission),
            distribution: lerp(|r| r.distribution),
            profit_taxes: lerp(|r| r.profit_taxes),
        })
    }
}

fn parse_manifest(content: &str) -> Result<Vec<(String, String, CurveUnit)>> {
    let mut rdr = csv::Reader::from_reader(content.as_bytes());
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let get = |i: usize| rec.get(i).map(str::trim).unwrap_or("");
        let unit = CurveUnit::parse(get(2)).ok_or_else(|| EngineError::MalformedData {
            file: "manifest.csv".into(),
            reason: format!("unknown unit `{}`", get(2)),
        })?;
        out.push((get(0).to_string(), get(1).to_string(), unit));
    }
    Ok(out)
}

fn parse_grid_stack(content: &str) -> Result<Vec<GridStackRow>> {
    let mut rdr = csv::Reader::from_reader(content.as_bytes());
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| EngineError::MalformedData {
                    file: "grid_price_components.csv".into(),
                    reason: format!("bad field {i} in {rec:?}"),
                })
        };
        rows.push(GridStackRow {
            year: field(0)? as i32,
            generation: field(1)?,
            transmission: field(2)?,
            distribution: field(3)?,
            profit_taxes: field(4)?,
        });
    }
    Ok(rows)
}

fn parse_state_energy(content: &str) -> Result<Vec<SectorEnergy>> {
    let mut rdr = csv::Reader::from_reader(content.as_bytes());
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| EngineError::MalformedData {
                    file: "state_energy_2020.csv".into(),
                    reason: format!("bad field {i} in {rec:?}"),
                })
        };
        rows.push(SectorEnergy {
            sector: rec.get(0).unwrap_or("").trim().to_string(),
            retail_twh: num(1)?,
            losses_twh: num(2)?,
            fossil_twh: num(3)?,
        });
    }
    Ok(rows)
}

fn parse_customer_classes(content: &str) -> Result<Vec<CustomerClass>> {
    let mut rdr = csv::Reader::from_reader(content.as_bytes());
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let customers: u64 = rec
            .get(1)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| EngineError::MalformedData {
                file: "customer_classes_2020.csv".into(),
                reason: format!("bad customers field in {rec:?}"),
            })?;
        let sales: f64 = rec
            .get(2)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| EngineError::MalformedData {
                file: "customer_classes_2020.csv".into(),
                reason: format!("bad sales field in {rec:?}"),
            })?;
        rows.push(CustomerClass {
            class: rec.get(0).unwrap_or("").trim().to_string(),
            customers,
            sales_gwh: sales,
        });
    }
    Ok(rows)
}
