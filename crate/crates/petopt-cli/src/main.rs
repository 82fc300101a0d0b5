//! Command-line front end: sweep, design, compare and calibrate commands
//! over the design-space exploration engine.
//!
//! Exit codes: 0 success, 1 internal error, 2 configuration error,
//! 3 infeasible point / empty feasible set, 4 calibration residual above
//! the acceptance band.

mod config;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use petopt::evaluate::{calibrate, evaluate_design, residual_report, shipped_targets};
use petopt::sweep::{rank_topologies, sweep, SweepResult};
use petopt::{Error, TopologyKind};

use config::{
    canonical_config_text, coefficients_toml, config_hash, load_run_config, parse_targets,
    RunConfig,
};
use report::{
    chart_svg, design_kv, design_report, fmt_sig, infeasible_csv, manifest_csv, residuals_csv,
    sweep_csv, ChartSeries,
};

const EXIT_INTERNAL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_RESIDUAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "petopt",
    about = "Design-space exploration for MMC-based power electronic transformers \
             under boost-AC operation",
    version
)]
struct Cli {
    /// Configuration file (TOML) overlaying the shipped defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for generated files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output formats, comma separated: csv,svg.
    #[arg(long, global = true, value_delimiter = ',')]
    formats: Option<Vec<String>>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the modulation index per topology and write CSV/SVG reports.
    Sweep {
        /// Topology to sweep; repeat for several (default: config list).
        #[arg(long = "topology")]
        topologies: Vec<String>,
        /// Lower modulation bound of the grid.
        #[arg(long = "m-min")]
        m_min: Option<f64>,
        /// Upper modulation bound of the grid.
        #[arg(long = "m-max")]
        m_max: Option<f64>,
        /// Grid step.
        #[arg(long)]
        step: Option<f64>,
    },
    /// Report one design point in full.
    Design {
        #[arg(long)]
        topology: String,
        #[arg(long)]
        m: f64,
        /// Emit flat key=value lines for scripting.
        #[arg(long)]
        kv: bool,
    },
    /// Rank the boost-capable topologies over a modulation window.
    Compare {
        /// Window as lo:hi (default 1:2).
        #[arg(long, default_value = "1:2")]
        window: String,
    },
    /// Fit cost/volume coefficients to design-point ratio targets.
    Calibrate {
        /// Targets file; defaults to the shipped published-ratio set.
        #[arg(long)]
        targets: Option<PathBuf>,
        /// Search iterations per start.
        #[arg(long, default_value_t = 600)]
        budget: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}

fn fail(code: u8, msg: &str) -> u8 {
    eprintln!("error: {msg}");
    code
}

fn run(cli: Cli) -> Result<(), u8> {
    let mut cfg = load_config(&cli)?;
    if let Some(out) = &cli.out {
        cfg.output.directory = out.clone();
    }
    if let Some(formats) = &cli.formats {
        cfg.output.csv = false;
        cfg.output.svg = false;
        for f in formats {
            match f.as_str() {
                "csv" => cfg.output.csv = true,
                "svg" => cfg.output.svg = true,
                other => return Err(fail(EXIT_CONFIG, &format!("unknown format \"{other}\""))),
            }
        }
    }

    match cli.command {
        Command::Sweep {
            topologies,
            m_min,
            m_max,
            step,
        } => cmd_sweep(cfg, topologies, m_min, m_max, step),
        Command::Design { topology, m, kv } => cmd_design(cfg, &topology, m, kv),
        Command::Compare { window } => cmd_compare(cfg, &window),
        Command::Calibrate { targets, budget } => cmd_calibrate(cfg, targets, budget),
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, u8> {
    let text = match &cli.config {
        None => None,
        Some(path) => match fs::read_to_string(path) {
            Ok(t) => Some(t),
            Err(e) => {
                return Err(fail(
                    EXIT_CONFIG,
                    &format!("cannot read config {}: {e}", path.display()),
                ))
            }
        },
    };
    load_run_config(text.as_deref()).map_err(|issues| {
        for issue in &issues {
            eprintln!("config: {issue}");
        }
        EXIT_CONFIG
    })
}

fn write_file(dir: &std::path::Path, name: &str, content: &str) -> Result<(), u8> {
    let path = dir.join(name);
    fs::write(&path, content)
        .map_err(|e| fail(EXIT_INTERNAL, &format!("cannot write {}: {e}", path.display())))
}

fn cmd_sweep(
    mut cfg: RunConfig,
    topologies: Vec<String>,
    m_min: Option<f64>,
    m_max: Option<f64>,
    step: Option<f64>,
) -> Result<(), u8> {
    if !topologies.is_empty() {
        let mut kinds = Vec::new();
        for name in &topologies {
            match TopologyKind::parse(name) {
                Some(k) => kinds.push(k),
                None => {
                    return Err(fail(
                        EXIT_CONFIG,
                        &format!("unknown topology \"{name}\""),
                    ))
                }
            }
        }
        cfg.sweep.topologies = kinds;
    }
    if let Some(v) = m_min {
        cfg.sweep.m_lo = v;
    }
    if let Some(v) = m_max {
        cfg.sweep.m_hi = v;
    }
    if let Some(v) = step {
        cfg.sweep.step = v;
    }
    if !(cfg.sweep.m_lo > 0.0) || cfg.sweep.m_hi < cfg.sweep.m_lo || !(cfg.sweep.step > 0.0) {
        return Err(fail(
            EXIT_CONFIG,
            &format!(
                "invalid sweep range {}..{} step {}",
                cfg.sweep.m_lo, cfg.sweep.m_hi, cfg.sweep.step
            ),
        ));
    }

    let mut results: Vec<SweepResult> = Vec::new();
    for &kind in &cfg.sweep.topologies {
        let r = sweep(
            &cfg.system,
            kind,
            &cfg.catalog,
            &cfg.coefficients,
            cfg.sweep.m_lo,
            cfg.sweep.m_hi,
            cfg.sweep.step,
        )
        .map_err(|e| fail(error_code(&e), &e.to_string()))?;
        results.push(r);
    }
    if results.iter().all(|r| r.is_empty()) {
        return Err(fail(EXIT_INFEASIBLE, "no feasible design point in the sweep"));
    }

    fs::create_dir_all(&cfg.output.directory)
        .map_err(|e| fail(EXIT_INTERNAL, &format!("cannot create output dir: {e}")))?;
    let dir = cfg.output.directory.clone();
    let mut artifacts: Vec<String> = Vec::new();

    if cfg.output.csv {
        for r in &results {
            let name = format!("sweep_{}.csv", r.topology.as_str());
            write_file(&dir, &name, &sweep_csv(r))?;
            artifacts.push(name);
        }
        write_file(&dir, "infeasible.csv", &infeasible_csv(&results))?;
        artifacts.push("infeasible.csv".into());
    }
    if cfg.output.svg {
        let charts = [
            ("fig5_volume.svg", "Total volume vs modulation index", ChartSeries::TotalVolumeRatio),
            ("fig6_cost.svg", "Total cost vs modulation index", ChartSeries::TotalCostRatio),
            ("fig7_losses.svg", "MMC power losses vs modulation index", ChartSeries::MmcLossWatts),
        ];
        for (name, title, series) in charts {
            write_file(&dir, name, &chart_svg(title, series, &results))?;
            artifacts.push(name.into());
        }
    }
    let manifest = manifest_csv(
        config_hash(&cfg),
        cfg.sweep.m_lo,
        cfg.sweep.m_hi,
        cfg.sweep.step,
        &cfg.sweep.topologies,
        &artifacts,
    );
    write_file(&dir, "run_manifest.csv", &manifest)?;

    let feasible: usize = results.iter().map(|r| r.evaluations.len()).sum();
    let skipped: usize = results.iter().map(|r| r.infeasible.len()).sum();
    println!(
        "swept {} topologies over [{}, {}] step {}: {} feasible, {} infeasible -> {}",
        results.len(),
        fmt_sig(cfg.sweep.m_lo),
        fmt_sig(cfg.sweep.m_hi),
        fmt_sig(cfg.sweep.step),
        feasible,
        skipped,
        dir.display()
    );
    Ok(())
}

fn cmd_design(cfg: RunConfig, topology: &str, m: f64, kv: bool) -> Result<(), u8> {
    let Some(kind) = TopologyKind::parse(topology) else {
        return Err(fail(EXIT_CONFIG, &format!("unknown topology \"{topology}\"")));
    };
    let Some(topo) = cfg.catalog.topology(kind) else {
        return Err(fail(EXIT_CONFIG, &format!("catalog has no {kind} topology")));
    };
    match evaluate_design(&cfg.system, topo, m, &cfg.catalog, &cfg.coefficients) {
        Ok(eval) => {
            if kv {
                print!("{}", design_kv(&eval));
            } else {
                print!("{}", design_report(&eval));
            }
            Ok(())
        }
        Err(e) => Err(fail(error_code(&e), &e.to_string())),
    }
}

fn cmd_compare(cfg: RunConfig, window: &str) -> Result<(), u8> {
    let Some((lo_s, hi_s)) = window.split_once(':') else {
        return Err(fail(EXIT_CONFIG, &format!("window must be lo:hi (got \"{window}\")")));
    };
    let (Ok(lo), Ok(hi)) = (lo_s.parse::<f64>(), hi_s.parse::<f64>()) else {
        return Err(fail(EXIT_CONFIG, &format!("window must be numeric (got \"{window}\")")));
    };
    let table = rank_topologies(&cfg.system, &cfg.catalog, &cfg.coefficients, (lo, hi))
        .map_err(|e| fail(error_code(&e), &e.to_string()))?;

    println!(
        "topology comparison over window ({}, {}], {} common grid points",
        fmt_sig(lo),
        fmt_sig(hi),
        table.common_points.len()
    );
    println!(
        "{:<20} {:>11} {:>14} {:>11} {:>11}  ranks range/pd/eff/cost",
        "topology", "m range", "power density", "efficiency", "mean cost"
    );
    for row in &table.rows {
        let fmt_opt = |v: Option<f64>| v.map(fmt_sig).unwrap_or_else(|| "-".into());
        let rank_opt = |v: Option<u32>| v.map(|r| r.to_string()).unwrap_or_else(|| "-".into());
        println!(
            "{:<20} {:>11} {:>14} {:>11} {:>11}  {}/{}/{}/{}{}",
            row.topology.as_str(),
            fmt_sig(row.modulation_range_width),
            fmt_opt(row.mean_power_density),
            fmt_opt(row.mean_efficiency),
            fmt_opt(row.mean_cost_ratio),
            row.rank_modulation_range,
            rank_opt(row.rank_power_density),
            rank_opt(row.rank_efficiency),
            rank_opt(row.rank_cost),
            if row.absent_from_window {
                "  (absent from window)"
            } else {
                ""
            }
        );
    }
    Ok(())
}

fn cmd_calibrate(cfg: RunConfig, targets_path: Option<PathBuf>, budget: usize) -> Result<(), u8> {
    let targets = match &targets_path {
        None => shipped_targets(),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                fail(EXIT_CONFIG, &format!("cannot read targets {}: {e}", path.display()))
            })?;
            parse_targets(&text).map_err(|issues| {
                for issue in &issues {
                    eprintln!("targets: {issue}");
                }
                EXIT_CONFIG
            })?
        }
    };

    let result = calibrate(&cfg.system, &cfg.catalog, &targets, budget)
        .map_err(|e| fail(error_code(&e), &e.to_string()))?;
    for warning in &result.warnings {
        eprintln!("warning: {warning}");
    }

    fs::create_dir_all(&cfg.output.directory)
        .map_err(|e| fail(EXIT_INTERNAL, &format!("cannot create output dir: {e}")))?;
    let dir = cfg.output.directory.clone();
    write_file(&dir, "coefficients.toml", &coefficients_toml(&result.coefficients))?;
    let residuals =
        residual_report(&cfg.system, &cfg.catalog, &result.coefficients, &targets)
            .map_err(|e| fail(EXIT_INTERNAL, &e.to_string()))?;
    write_file(&dir, "residuals.csv", &residuals_csv(&residuals))?;
    let manifest = manifest_csv(
        config_hash(&cfg),
        cfg.sweep.m_lo,
        cfg.sweep.m_hi,
        cfg.sweep.step,
        &cfg.sweep.topologies,
        &["coefficients.toml".into(), "residuals.csv".into()],
    );
    write_file(&dir, "run_manifest.csv", &manifest)?;

    println!(
        "fitted {} targets: max |residual| = {} -> {}",
        targets.len(),
        fmt_sig(result.max_abs_residual),
        dir.display()
    );
    if result.max_abs_residual <= 0.10 {
        Ok(())
    } else {
        Err(EXIT_RESIDUAL)
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::Domain(_) | Error::Calibration(_) => EXIT_CONFIG,
        Error::Infeasible(_) | Error::EmptyFeasibleSet | Error::DeviceOutOfRange { .. } => {
            EXIT_INFEASIBLE
        }
    }
}

// canonical_config_text is exercised through config_hash; keep it reachable
// for debugging builds
#[allow(dead_code)]
fn dump_config(cfg: &RunConfig) -> String {
    canonical_config_text(cfg)
}
