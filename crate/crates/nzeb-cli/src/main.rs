//! Batch front-end over the engine: loads the data bundle and an optional
//! config file, runs the requested analysis, and writes plot-ready CSV
//! reports plus plain-text summaries. Identical inputs produce byte-identical
//! outputs; files are written atomically.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use nzeb_core::hydrogen;
use nzeb_core::lcoe;
use nzeb_core::projections;
use nzeb_core::{
    crossover_month, financial_summary, monthly_savings, Basis, Construction, DataBundle,
    FinancingMode, HeatingValue, HomeProfile, InstallTiming, MonthlySavings, Params,
    ScenarioConfig, SizingChoice, UtilityKind,
};

#[derive(Parser)]
#[command(
    name = "nzeb",
    about = "Techno-economic reports for net-zero-energy homes: cost projections, LCOE, savings, finance, crossover dates, and hydrogen cost",
    version
)]
struct Cli {
    /// Directory with manifest.csv and the data files (default: built-in bundle)
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,

    /// Output directory for reports
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Config file with `key = value` parameter overrides
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Emit nominal-dollar columns alongside the real 2020$ values
    #[arg(long, global = true)]
    nominal: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Debug)]
enum CaseArg {
    Existing,
    New,
    Improved,
}

#[derive(Subcommand)]
enum Command {
    /// Levelized cost of electricity tables (rooftop, utility, price stack)
    Lcoe {
        /// Single year to print; omits the full grid
        #[arg(long)]
        year: Option<i32>,
        #[arg(long, value_enum)]
        case: Option<CaseArg>,
        #[arg(long, overrides_with = "no_itc")]
        itc: bool,
        #[arg(long = "no-itc")]
        no_itc: bool,
        /// Storage effectiveness fraction for the PV+battery variant
        #[arg(long)]
        storage: Option<f64>,
    },
    /// Gasoline-equivalent prices for the LCOE grid
    GasEquiv,
    /// Monthly-savings scenario grids, one CSV per report figure
    Savings,
    /// Financial indexes (NPV, IRR, SIR, SPB)
    Finance {
        #[arg(long, value_enum)]
        case: Option<CaseArg>,
        #[arg(long, default_value_t = 2020)]
        year: i32,
        #[arg(long, overrides_with = "no_itc")]
        itc: bool,
        #[arg(long = "no-itc")]
        no_itc: bool,
        /// Storage effectiveness fraction (default 0 = PV only)
        #[arg(long, default_value_t = 0.0)]
        storage: f64,
        /// Model storage as an EV through a bidirectional charger
        #[arg(long)]
        v2h: bool,
    },
    /// Crossover dates: first install month with non-negative savings
    Crossover,
    /// Hydrogen production cost with optimal sizing and 30% sensitivities
    H2,
    /// Run every report into the output directory
    ReportAll,
}

struct Ctx {
    bundle: DataBundle,
    params: Params,
    out: PathBuf,
    nominal: bool,
    run_id: String,
    written: Vec<(String, usize)>,
}

impl Ctx {
    fn write(&mut self, name: &str, content: &str) -> Result<()> {
        fs::create_dir_all(&self.out)
            .with_context(|| format!("creating {}", self.out.display()))?;
        let path = self.out.join(name);
        write_atomic(&path, content.as_bytes())?;
        self.written.push((name.to_string(), content.len()));
        Ok(())
    }

    fn nominal_factor(&self, year: i32) -> f64 {
        if self.nominal {
            (1.0 + self.params.terms.inflation).powi(year - 2020)
        } else {
            1.0
        }
    }
}

/// Temp-then-rename so partial runs never leave a corrupt report.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

fn profile_for(case: CaseArg) -> HomeProfile {
    match case {
        CaseArg::Existing => HomeProfile::average_existing(),
        CaseArg::New => HomeProfile::code_home(),
        CaseArg::Improved => HomeProfile::improved_home(),
    }
}

fn timing_for(case: CaseArg) -> InstallTiming {
    match case {
        CaseArg::Existing => InstallTiming::Retrofit,
        CaseArg::New | CaseArg::Improved => InstallTiming::AtConstruction,
    }
}

fn construction_for(case: CaseArg) -> Construction {
    match case {
        CaseArg::Existing => Construction::Existing,
        CaseArg::New | CaseArg::Improved => Construction::New,
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    let bundle = match &cli.data_dir {
        Some(dir) => DataBundle::load(dir)?,
        None => DataBundle::builtin(),
    };
    let mut params = Params::default();
    let mut config_text = String::new();
    if let Some(path) = &cli.config {
        config_text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        params.apply_config(&config_text)?;
    }
    let run_id = run_id(&cli, &config_text);
    let mut ctx = Ctx {
        bundle,
        params,
        out: cli.out.clone(),
        nominal: cli.nominal,
        run_id,
        written: Vec::new(),
    };

    match &cli.command {
        Command::Lcoe { year, case, itc, no_itc: _, storage } => {
            cmd_lcoe(&mut ctx, *year, *case, *itc, *storage)?
        }
        Command::GasEquiv => cmd_gas_equiv(&mut ctx)?,
        Command::Savings => cmd_savings(&mut ctx)?,
        Command::Finance { case, year, itc, no_itc: _, storage, v2h } => {
            cmd_finance(&mut ctx, *case, *year, *itc, *storage, *v2h)?
        }
        Command::Crossover => cmd_crossover(&mut ctx)?,
        Command::H2 => cmd_h2(&mut ctx)?,
        Command::ReportAll => {
            cmd_lcoe(&mut ctx, None, None, false, None)?;
            cmd_gas_equiv(&mut ctx)?;
            cmd_savings(&mut ctx)?;
            cmd_finance(&mut ctx, None, 2020, false, 0.0, false)?;
            cmd_finance(&mut ctx, None, 2020, false, 1.0, false)?;
            cmd_finance(&mut ctx, None, 2035, false, 1.0, false)?;
            cmd_crossover(&mut ctx)?;
            cmd_h2(&mut ctx)?;
        }
    }

    let mut manifest = String::from("run_id,file,bytes\n");
    for (name, bytes) in &ctx.written {
        manifest.push_str(&format!("{},{name},{bytes}\n", ctx.run_id));
    }
    let path = ctx.out.join("run_manifest.csv");
    fs::create_dir_all(&ctx.out)?;
    write_atomic(&path, manifest.as_bytes())?;
    Ok(())
}

/// Deterministic run id: hash of the resolved inputs.
fn run_id(cli: &Cli, config_text: &str) -> String {
    let mut h = Sha256::new();
    h.update(config_text.as_bytes());
    h.update([cli.nominal as u8]);
    if let Some(dir) = &cli.data_dir {
        let mut names: Vec<_> = fs::read_dir(dir)
            .into_iter()
            .flatten()
            .flatten()
            .map(|e| e.path())
            .collect();
        names.sort();
        for p in names {
            if let Ok(bytes) = fs::read(&p) {
                h.update(p.file_name().unwrap_or_default().as_encoded_bytes());
                h.update(&bytes);
            }
        }
    }
    hex::encode(&h.finalize()[..8])
}

const LCOE_CASES: [(&str, Construction, bool); 4] = [
    ("existing", Construction::Existing, false),
    ("new", Construction::New, false),
    ("existing_itc", Construction::Existing, true),
    ("new_itc", Construction::New, true),
];

fn cmd_lcoe(
    ctx: &mut Ctx,
    year: Option<i32>,
    case: Option<CaseArg>,
    itc: bool,
    storage: Option<f64>,
) -> Result<()> {
    let (tech, terms) = (&ctx.params.tech, &ctx.params.terms);
    if let Some(y) = year {
        let case = case.unwrap_or(CaseArg::Existing);
        let cons = construction_for(case);
        let r = match storage {
            Some(e) if e > 0.0 => {
                lcoe::lcoe_pv_battery(&ctx.bundle, y, &profile_for(case), e, itc, tech, terms)?
            }
            _ => lcoe::lcoe_pv(&ctx.bundle, y, cons, itc, tech, terms)?,
        };
        println!("lcoe {y}: {:.2} cents/kWh", r.cents_per_kwh);
        for (component, v) in &r.breakdown {
            println!("  {component}: {v:.3}");
        }
        return Ok(());
    }

    let mut rows = String::from("year,case,component,cents_per_kwh\n");
    let mut push = |year: i32, case: &str, r: &lcoe::LcoeResult| {
        for (component, v) in &r.breakdown {
            rows.push_str(&format!("{year},{case},{component},{v:.4}\n"));
        }
        rows.push_str(&format!("{year},{case},total,{:.4}\n", r.cents_per_kwh));
    };
    let home = HomeProfile::average_existing();
    let code = HomeProfile::code_home();
    for year in 2022..=2050 {
        for (name, cons, with_itc) in LCOE_CASES {
            let r = lcoe::lcoe_pv(&ctx.bundle, year, cons, with_itc, tech, terms)?;
            push(year, name, &r);
        }
        for (name, profile, with_itc) in [
            ("pv_battery_existing", &home, false),
            ("pv_battery_existing_itc", &home, true),
            ("pv_battery_new", &code, false),
            ("pv_battery_new_itc", &code, true),
        ] {
            let r = lcoe::lcoe_pv_battery(&ctx.bundle, year, profile, 1.0, with_itc, tech, terms)?;
            push(year, name, &r);
        }
        push(year, "grid_stack", &lcoe::grid_stack_lcoe(&ctx.bundle, year, tech, terms)?);
        push(
            year,
            "grid_stack_utility_pv",
            &lcoe::grid_stack_utility_pv_lcoe(&ctx.bundle, year, tech, terms)?,
        );
        rows.push_str(&format!(
            "{year},utility_pv,total,{:.4}\n",
            projections::utility_lcoe(&ctx.bundle, year, UtilityKind::Pv)?
        ));
        rows.push_str(&format!(
            "{year},utility_pv_battery,total,{:.4}\n",
            projections::utility_lcoe(&ctx.bundle, year, UtilityKind::PvPlus4hBattery)?
        ));
        rows.push_str(&format!(
            "{year},grid_price,total,{:.4}\n",
            projections::grid_price(&ctx.params.grid, year, Basis::Real2020)?
        ));
    }
    ctx.write("lcoe.csv", &rows)?;

    let mut text = String::from("LCOE, cents/kWh (real 2020$), no credit\n");
    text.push_str("year  existing   new   utility_pv   pv+battery(existing)\n");
    for year in [2022, 2030, 2040, 2050] {
        let e = lcoe::lcoe_pv(&ctx.bundle, year, Construction::Existing, false, tech, terms)?;
        let n = lcoe::lcoe_pv(&ctx.bundle, year, Construction::New, false, tech, terms)?;
        let u = projections::utility_lcoe(&ctx.bundle, year, UtilityKind::Pv)?;
        let b = lcoe::lcoe_pv_battery(&ctx.bundle, year, &home, 1.0, false, tech, terms)?;
        text.push_str(&format!(
            "{year}  {:8.2} {:6.2} {:10.2} {:16.2}\n",
            e.cents_per_kwh, n.cents_per_kwh, u, b.cents_per_kwh
        ));
    }
    ctx.write("lcoe_summary.txt", &text)?;
    Ok(())
}

fn cmd_gas_equiv(ctx: &mut Ctx) -> Result<()> {
    let (tech, terms, ev) = (&ctx.params.tech, &ctx.params.terms, &ctx.params.ev);
    let mut rows = String::from("year,case,usd_per_gallon\n");
    let home = HomeProfile::average_existing();
    for year in 2022..=2050 {
        for (name, cons, with_itc) in LCOE_CASES {
            let r = lcoe::lcoe_pv(&ctx.bundle, year, cons, with_itc, tech, terms)?;
            rows.push_str(&format!(
                "{year},{name},{:.4}\n",
                lcoe::gas_equivalent(r.cents_per_kwh, ev)
            ));
        }
        for (name, with_itc) in
            [("pv_battery_existing", false), ("pv_battery_existing_itc", true)]
        {
            let r = lcoe::lcoe_pv_battery(&ctx.bundle, year, &home, 1.0, with_itc, tech, terms)?;
            rows.push_str(&format!(
                "{year},{name},{:.4}\n",
                lcoe::gas_equivalent(r.cents_per_kwh, ev)
            ));
        }
        let u = projections::utility_lcoe(&ctx.bundle, year, UtilityKind::Pv)?;
        rows.push_str(&format!("{year},utility_pv,{:.4}\n", lcoe::gas_equivalent(u, ev)));
        let g = projections::grid_price(&ctx.params.grid, year, Basis::Real2020)?;
        rows.push_str(&format!("{year},grid_price,{:.4}\n", lcoe::gas_equivalent(g, ev)));
    }
    ctx.write("gas_equivalent.csv", &rows)?;

    let r2022 = lcoe::lcoe_pv(&ctx.bundle, 2022, Construction::Existing, false, tech, terms)?;
    let text = format!(
        "Gasoline equivalents (real 2020$)\nrooftop solar 2022: {:.2} $/gal vs pump {:.2} $/gal\n",
        lcoe::gas_equivalent(r2022.cents_per_kwh, ev),
        ev.gasoline_price
    );
    ctx.write("gas_equivalent_summary.txt", &text)?;
    Ok(())
}

struct FigureScenario {
    figure: &'static str,
    label: String,
    scenario: ScenarioConfig,
}

fn savings_grid(params: &Params) -> Vec<FigureScenario> {
    let years: Vec<i32> = (2020..=2050).step_by(5).collect();
    let existing = HomeProfile::average_existing;
    let code = HomeProfile::code_home;
    let improved = HomeProfile::improved_home;
    let retro = InstallTiming::Retrofit;
    let built = InstallTiming::AtConstruction;
    let ev = || params.ev.clone();
    let charger = params.ev.charger_cost;
    let mut out = Vec::new();
    let mut push = |figure: &'static str, label: String, scenario: ScenarioConfig| {
        out.push(FigureScenario { figure, label, scenario });
    };

    for &y in &years {
        // single-home PV-only ladders
        for (itc, tag) in [(false, "no_itc"), (true, "itc")] {
            push("fig7", format!("existing_pv_{tag}"),
                ScenarioConfig::new(existing(), y, retro).with_itc(itc, false));
            push("fig8", format!("code_at_construction_{tag}"),
                ScenarioConfig::new(code(), y, built).with_itc(itc, false));
            push("fig8", format!("code_retrofit_{tag}"),
                ScenarioConfig::new(code(), y, retro).with_itc(itc, false));
        }

        // storage-effectiveness ladders
        for eff in [0.0, 0.5, 1.0] {
            let pct = (eff * 100.0) as i32;
            for (itc, tag) in [(false, "no_itc"), (true, "itc")] {
                push("fig12", format!("existing_storage{pct}_{tag}"),
                    ScenarioConfig::new(existing(), y, retro).with_storage(eff).with_itc(itc, itc));
            }
            push("fig13", format!("code_storage{pct}"),
                ScenarioConfig::new(code(), y, built).with_storage(eff));
            push("fig13", format!("improved_storage{pct}"),
                ScenarioConfig::new(improved(), y, built).with_storage(eff));
            push("fig14", format!("code_storage{pct}_itc"),
                ScenarioConfig::new(code(), y, built).with_storage(eff).with_itc(true, true));
            push("fig14", format!("improved_storage{pct}_itc"),
                ScenarioConfig::new(improved(), y, built).with_storage(eff).with_itc(true, true));
            push("fig23", format!("code_retrofit_storage{pct}"),
                ScenarioConfig::new(code(), y, retro).with_storage(eff));
            push("fig23", format!("improved_retrofit_storage{pct}"),
                ScenarioConfig::new(improved(), y, retro).with_storage(eff));
            push("fig24", format!("code_retrofit_storage{pct}_itc"),
                ScenarioConfig::new(code(), y, retro).with_storage(eff).with_itc(true, true));
            push("fig24", format!("improved_retrofit_storage{pct}_itc"),
                ScenarioConfig::new(improved(), y, retro).with_storage(eff).with_itc(true, true));
        }

        // storage media: wall battery vs EV through a bidirectional charger
        for (itc, tag) in [(false, "no_itc"), (true, "itc")] {
            push("fig15", format!("existing_battery_{tag}"),
                ScenarioConfig::new(existing(), y, retro).with_storage(1.0).with_itc(itc, itc));
            push("fig15", format!("existing_v2h_{tag}"),
                ScenarioConfig::new(existing(), y, retro).with_storage(1.0)
                    .with_v2h(charger, ev()).with_itc(itc, itc));
            push("fig15", format!("existing_v2h_extra_pv_{tag}"),
                ScenarioConfig::new(existing(), y, retro).with_storage(1.0)
                    .with_v2h(charger, ev()).with_ev_miles(10_000.0, true).with_itc(itc, itc));
            push("fig17", format!("existing_battery_{tag}"),
                ScenarioConfig::new(existing(), y, retro).with_storage(1.0).with_itc(itc, itc));
            push("fig17", format!("existing_v2h_fuel_{tag}"),
                ScenarioConfig::new(existing(), y, retro).with_storage(1.0)
                    .with_v2h(charger, ev()).with_ev_miles(10_000.0, true).with_itc(itc, itc));
        }
        push("fig16", "code_battery".into(),
            ScenarioConfig::new(code(), y, built).with_storage(1.0));
        push("fig16", "improved_battery".into(),
            ScenarioConfig::new(improved(), y, built).with_storage(1.0));
        push("fig16", "code_v2h".into(),
            ScenarioConfig::new(code(), y, built).with_storage(1.0).with_v2h(charger, ev()));
        push("fig16", "improved_v2h".into(),
            ScenarioConfig::new(improved(), y, built).with_storage(1.0).with_v2h(charger, ev()));
        push("fig16", "code_v2h_extra_pv".into(),
            ScenarioConfig::new(code(), y, built).with_storage(1.0).with_v2h(charger, ev())
                .with_ev_miles(10_000.0, true));
        push("fig16", "improved_v2h_extra_pv".into(),
            ScenarioConfig::new(improved(), y, built).with_storage(1.0).with_v2h(charger, ev())
                .with_ev_miles(10_000.0, true));
    }
    out
}

fn cmd_savings(ctx: &mut Ctx) -> Result<()> {
    let grid = savings_grid(&ctx.params);
    let p = &ctx.params;
    let results: Vec<nzeb_core::Result<MonthlySavings>> =
        nzeb_core::batch::map_ordered(&grid, |fs| {
            monthly_savings(&fs.scenario, &ctx.bundle, &p.terms, &p.tech, &p.grid)
        });

    let figures =
        ["fig7", "fig8", "fig12", "fig13", "fig14", "fig15", "fig16", "fig17", "fig23", "fig24"];
    let mut files: Vec<(String, String)> = Vec::new();
    for fig in figures {
        let mut rows = String::from(
            "scenario_id,install_year,home,timing,storage_effectiveness,medium,itc_pv,itc_battery,ev_miles,pv_kw,battery_kwh,bill_avoided,ownership_cost,fuel_savings,savings_usd_per_month",
        );
        if ctx.nominal {
            rows.push_str(",savings_nominal");
        }
        rows.push('\n');
        for (fs, res) in grid.iter().zip(results.iter()) {
            if fs.figure != fig {
                continue;
            }
            let s = res.as_ref().map_err(|e| anyhow::anyhow!("{e}"))?;
            let sc = &fs.scenario;
            let medium = match sc.storage_medium {
                nzeb_core::StorageMedium::WallBattery => "wall_battery",
                nzeb_core::StorageMedium::V2h { .. } => "v2h",
            };
            let timing = match sc.install_timing {
                InstallTiming::AtConstruction => "at_construction",
                InstallTiming::Retrofit => "retrofit",
            };
            rows.push_str(&format!(
                "{label}_{y},{y},{home},{timing},{eff:.2},{medium},{ipv},{ib},{miles},{kw:.3},{kwh:.2},{bill:.2},{own:.2},{fuel:.2},{sav:.2}",
                label = fs.label,
                y = sc.install_year,
                home = sc.profile.name,
                eff = sc.storage_effectiveness,
                ipv = sc.itc_pv,
                ib = sc.itc_battery,
                miles = sc.ev_miles_per_year.unwrap_or(0.0),
                kw = sc.pv_kw(&p.tech),
                kwh = sc.battery_kwh(&p.tech),
                bill = s.bill_avoided,
                own = s.ownership_cost,
                fuel = s.fuel_savings,
                sav = s.dollars_per_month,
            ));
            if ctx.nominal {
                rows.push_str(&format!(
                    ",{:.2}",
                    s.dollars_per_month * ctx.nominal_factor(sc.install_year)
                ));
            }
            rows.push('\n');
        }
        files.push((format!("savings_{fig}.csv"), rows));
    }
    for (name, rows) in files {
        ctx.write(&name, &rows)?;
    }

    let mut text = String::from("Monthly savings, real 2020$/month (PV only, no credit)\n");
    text.push_str("year  existing  code_at_construction  improved_at_construction\n");
    for y in (2020..=2050).step_by(10) {
        let e = monthly_savings(
            &ScenarioConfig::new(HomeProfile::average_existing(), y, InstallTiming::Retrofit),
            &ctx.bundle, &p.terms, &p.tech, &p.grid,
        )?;
        let c = monthly_savings(
            &ScenarioConfig::new(HomeProfile::code_home(), y, InstallTiming::AtConstruction),
            &ctx.bundle, &p.terms, &p.tech, &p.grid,
        )?;
        let i = monthly_savings(
            &ScenarioConfig::new(HomeProfile::improved_home(), y, InstallTiming::AtConstruction),
            &ctx.bundle, &p.terms, &p.tech, &p.grid,
        )?;
        text.push_str(&format!(
            "{y}  {:8.0} {:21.0} {:25.0}\n",
            e.dollars_per_month, c.dollars_per_month, i.dollars_per_month
        ));
    }
    ctx.write("savings_summary.txt", &text)?;
    Ok(())
}

fn finance_cases(year: i32, storage: f64) -> Vec<(String, ScenarioConfig)> {
    let mk = |case: CaseArg, itc: bool| {
        ScenarioConfig::new(profile_for(case), year, timing_for(case))
            .with_storage(storage)
            .with_itc(itc, itc && storage > 0.0)
    };
    vec![
        ("existing".into(), mk(CaseArg::Existing, false)),
        ("new".into(), mk(CaseArg::New, false)),
        ("new_improved".into(), mk(CaseArg::Improved, false)),
        ("existing_itc".into(), mk(CaseArg::Existing, true)),
        ("new_itc".into(), mk(CaseArg::New, true)),
        ("new_itc_improved".into(), mk(CaseArg::Improved, true)),
    ]
}

fn cmd_finance(
    ctx: &mut Ctx,
    case: Option<CaseArg>,
    year: i32,
    itc: bool,
    storage: f64,
    v2h: bool,
) -> Result<()> {
    let p = &ctx.params;
    let cases: Vec<(String, ScenarioConfig)> = match case {
        Some(c) => {
            let mut s = ScenarioConfig::new(profile_for(c), year, timing_for(c))
                .with_storage(storage)
                .with_itc(itc, itc && storage > 0.0 && !v2h);
            if v2h {
                s = s.with_v2h(p.ev.charger_cost, p.ev.clone());
            }
            vec![(format!("{c:?}").to_lowercase(), s)]
        }
        None => finance_cases(year, storage),
    };

    let mut rows = String::from("year,case,storage_effectiveness,npv_usd,irr_pct,sir,spb_years");
    if ctx.nominal {
        rows.push_str(",npv_nominal");
    }
    rows.push('\n');
    let mut text = format!("Financial indexes, install year {year}, storage {storage:.2}\n");
    text.push_str("case               NPV($)    IRR(%)   SIR    SPB(yr)\n");
    for (name, scenario) in &cases {
        let s = financial_summary(scenario, &ctx.bundle, &p.terms, &p.tech, &p.grid)?;
        let irr_pct = s.irr.map(|r| r * 100.0);
        rows.push_str(&format!(
            "{year},{name},{storage:.2},{:.2},{},{:.4},{}",
            s.npv,
            irr_pct.map(|v| format!("{v:.3}")).unwrap_or_else(|| "na".into()),
            s.sir,
            s.spb.map(|v| format!("{v:.2}")).unwrap_or_else(|| "no_payback".into()),
        ));
        if ctx.nominal {
            rows.push_str(&format!(",{:.2}", s.npv * ctx.nominal_factor(year)));
        }
        rows.push('\n');
        text.push_str(&format!(
            "{name:<18} {:>8.0} {:>8} {:>6.2} {:>8}\n",
            s.npv,
            irr_pct.map(|v| format!("{v:.2}")).unwrap_or_else(|| "na".into()),
            s.sir,
            s.spb.map(|v| format!("{v:.2}")).unwrap_or_else(|| "never".into()),
        ));
        println!(
            "{name}: NPV {:.0} IRR {} SIR {:.2} SPB {}",
            s.npv,
            irr_pct.map(|v| format!("{v:.2}%")).unwrap_or_else(|| "na".into()),
            s.sir,
            s.spb.map(|v| format!("{v:.2} yr")).unwrap_or_else(|| "never".into()),
        );
    }
    let suffix = if storage > 0.0 { "pv_battery" } else { "pv" };
    ctx.write(&format!("finance_{year}_{suffix}.csv"), &rows)?;
    ctx.write(&format!("finance_{year}_{suffix}_summary.txt"), &text)?;

    // audit export of the first case's financed schedule
    if let Some((name, scenario)) = cases.first() {
        let schedule = nzeb_core::build_schedule(
            scenario, &ctx.bundle, &p.terms, &p.tech, &p.grid, FinancingMode::Loan,
        )?;
        ctx.write(&format!("schedule_{year}_{suffix}_{name}.csv"), &schedule.to_csv_string())?;
    }
    Ok(())
}

fn cmd_crossover(ctx: &mut Ctx) -> Result<()> {
    let p = &ctx.params;
    let families: Vec<(&str, ScenarioConfig)> = vec![
        ("existing_100_no_itc",
            ScenarioConfig::new(HomeProfile::average_existing(), 2020, InstallTiming::Retrofit)
                .with_storage(1.0)),
        ("existing_100_itc",
            ScenarioConfig::new(HomeProfile::average_existing(), 2020, InstallTiming::Retrofit)
                .with_storage(1.0).with_itc(true, true)),
        ("code_100_no_itc",
            ScenarioConfig::new(HomeProfile::code_home(), 2020, InstallTiming::AtConstruction)
                .with_storage(1.0)),
        ("improved_100_no_itc",
            ScenarioConfig::new(HomeProfile::improved_home(), 2020, InstallTiming::AtConstruction)
                .with_storage(1.0)),
        ("code_100_itc",
            ScenarioConfig::new(HomeProfile::code_home(), 2020, InstallTiming::AtConstruction)
                .with_storage(1.0).with_itc(true, true)),
        ("improved_100_itc",
            ScenarioConfig::new(HomeProfile::improved_home(), 2020, InstallTiming::AtConstruction)
                .with_storage(1.0).with_itc(true, true)),
    ];
    let mut rows = String::from("family,year,month\n");
    let mut text = String::from("Crossover: first install month with non-negative savings\n");
    for (name, scenario) in families {
        match crossover_month(&scenario, &ctx.bundle, &p.terms, &p.tech, &p.grid)? {
            Some((y, m)) => {
                rows.push_str(&format!("{name},{y},{m}\n"));
                text.push_str(&format!("{name:<24} {y}-{m:02}\n"));
                println!("{name}: {y}-{m:02}");
            }
            None => {
                rows.push_str(&format!("{name},,no_crossover\n"));
                text.push_str(&format!("{name:<24} no crossover by 2050\n"));
                println!("{name}: no crossover by 2050");
            }
        }
    }
    ctx.write("crossover.csv", &rows)?;
    ctx.write("crossover_summary.txt", &text)?;
    Ok(())
}

fn cmd_h2(ctx: &mut Ctx) -> Result<()> {
    let inputs = nzeb_core::H2CostInputs::from_bundle(&ctx.bundle);
    let profile = hydrogen::default_daily_profile();
    let pv_mw = 100.0;
    let mut rows = String::from("year,driver,low,nominal,high,usd_per_kg,usd_per_mbtu\n");
    let mut text = String::from("Hydrogen cost, optimal sizing, 30% sensitivity\n");
    text.push_str("year   $/kg   $/MBtu   elx_MW  tank_kg\n");
    for year in (2020..=2050).step_by(5) {
        let design = nzeb_core::optimize_sizing(&profile, &inputs, year, pv_mw)?;
        let bands = nzeb_core::sensitivity(
            SizingChoice::Auto { profile: &profile, pv_mw },
            &inputs,
            year,
            0.30,
        )?;
        for b in &bands {
            rows.push_str(&format!(
                "{year},{},{:.4},{:.4},{:.4},{:.4},{:.4}\n",
                b.driver.name(),
                b.low,
                b.nominal,
                b.high,
                design.lcoh_usd_per_kg,
                nzeb_core::per_mbtu(design.lcoh_usd_per_kg, HeatingValue::Lower),
            ));
        }
        text.push_str(&format!(
            "{year} {:6.2} {:8.2} {:8.1} {:8.0}\n",
            design.lcoh_usd_per_kg,
            nzeb_core::per_mbtu(design.lcoh_usd_per_kg, HeatingValue::Lower),
            design.electrolyzer_capacity_mw,
            design.tank_capacity_kg,
        ));
    }
    ctx.write("h2_cost.csv", &rows)?;
    ctx.write("h2_summary.txt", &text)?;
    Ok(())
}
