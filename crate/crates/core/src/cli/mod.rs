//! Command-line experiment driver: reproducible runs with full artifact
//! trails (`trace.csv`, per-step snapshots, `report.json`, optional SVG
//! frames), delta sweeps with Cauchy diagnostics, offline re-verification of
//! stored runs, the radial ODE oracle, and the counterexample tables.
//!
//! Exit codes: `0` success with all enabled checks passing, `1` checks
//! failed, `2` configuration or usage error, `3` a movement step failed,
//! `4` a stored trace is corrupt.

mod artifacts;
mod config;
mod report;

pub use artifacts::{read_run_dir, read_trace_csv, write_report, write_run_dir, write_trace_csv};
pub use config::{all_suites, CheckSuite, ExperimentConfig, ShapeSpec};
pub use report::{build_report, RunReport, REFLECTION_PLANES};

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::barriers::{radial_ode, RadialForcing};
use crate::counterexamples::{annuli_family, bump_family, cone_family};
use crate::error::StarflowError;
use crate::flow::{lambda_l2, run_flow, FlowTrace};
use crate::starset::hausdorff_distance;
use crate::Result;

#[derive(Parser)]
#[command(
    name = "starflow",
    about = "Volume-preserving curvature flow of star-shaped planar sets by minimizing movements"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Annuli,
    Bumps,
    Cones,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a JSON config and write its artifacts.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also render one SVG frame per step.
        #[arg(long)]
        svg: bool,
    },
    /// Re-run the base config at several deltas and report the
    /// consecutive-trace Cauchy diagnostic and multiplier norms.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated list of at least two delta values.
        #[arg(long, value_delimiter = ',')]
        deltas: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the report of a stored run directory.
    Verify { dir: PathBuf },
    /// Integrate the radial ODE `r' = -1/r + (1 - pi r^2)/delta` and emit
    /// `t,r` samples.
    Oracle {
        #[arg(long)]
        r0: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long = "T")]
        t_end: f64,
        #[arg(long, default_value_t = 1e-4)]
        dt: f64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate one of the negative-result families.
    Counterexamples {
        #[arg(long)]
        family: Family,
        /// Family size: hole/bump count, or the number of dyadic apertures.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &StarflowError) -> i32 {
    match e {
        StarflowError::StepFailed { .. } | StarflowError::Collapse { .. } => 3,
        StarflowError::CorruptTrace(_) => 4,
        _ => 2,
    }
}

/// Parse the process arguments, dispatch, and return the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("one or more checks failed");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Run { config, out, svg } => cmd_run(&config, out.as_deref(), svg),
        Command::Sweep {
            config,
            deltas,
            out,
        } => cmd_sweep(&config, &deltas, out.as_deref()),
        Command::Verify { dir } => cmd_verify(&dir),
        Command::Oracle {
            r0,
            delta,
            t_end,
            dt,
            out,
        } => cmd_oracle(r0, delta, t_end, dt, out.as_deref()),
        Command::Counterexamples { family, n, out } => {
            cmd_counterexamples(family, n, out.as_deref())
        }
    }
}

fn print_report(report: &RunReport) {
    for c in &report.checks {
        println!(
            "check {:<18} {}  (worst margin {:+.3e}, tolerance {:.1e})",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.worst_margin,
            c.tolerance
        );
    }
}

/// Run one configured experiment into `dir` and report whether all enabled
/// checks passed.
fn run_once(config: &ExperimentConfig, dir: &Path, svg: bool) -> Result<(FlowTrace, RunReport)> {
    let e0 = config.initial_set()?;
    let trace = run_flow(&e0, &config.flow)?;
    let report = build_report(&trace, &config.checks, config.seed)?;
    write_run_dir(dir, config, &trace, svg)?;
    write_report(dir, &report)?;
    Ok((trace, report))
}

fn cmd_run(config_path: &Path, out: Option<&Path>, svg: bool) -> Result<bool> {
    let mut config = ExperimentConfig::load(config_path)?;
    if let Some(dir) = out {
        config.output_dir = dir.to_path_buf();
    }
    let dir = config.output_dir.clone();
    let (trace, report) = run_once(&config, &dir, svg)?;
    println!(
        "ran {} steps to T={}, wrote {}",
        trace.steps.len() - 1,
        config.flow.t_end,
        dir.display()
    );
    print_report(&report);
    Ok(report.passed)
}

fn cmd_sweep(config_path: &Path, deltas: &[f64], out: Option<&Path>) -> Result<bool> {
    if deltas.len() < 2 {
        return Err(StarflowError::Config(
            "sweep needs at least 2 deltas".into(),
        ));
    }
    let mut config = ExperimentConfig::load(config_path)?;
    if let Some(dir) = out {
        config.output_dir = dir.to_path_buf();
    }
    let root = config.output_dir.clone();
    let mut traces: Vec<(f64, FlowTrace, RunReport)> = Vec::new();
    for &delta in deltas {
        let mut c = config.clone();
        c.flow.delta = delta;
        c.flow.validate()?;
        let dir = root.join(format!("delta_{delta:.6}"));
        c.output_dir = dir.clone();
        let (trace, report) = run_once(&c, &dir, false)?;
        traces.push((delta, trace, report));
    }

    // Cauchy diagnostic: sup over shared times (up to t = 1) of the
    // Hausdorff distance between consecutive-delta traces.
    let h = config.flow.h;
    let k_max = ((1.0 / h) as usize).min(traces[0].1.sets.len() - 1);
    let mut rows = Vec::new();
    for (i, (delta, trace, report)) in traces.iter().enumerate() {
        let sup_dh = if i == 0 {
            None
        } else {
            let prev = &traces[i - 1].1;
            let k_hi = k_max.min(prev.sets.len() - 1).min(trace.sets.len() - 1);
            Some(
                (0..=k_hi)
                    .map(|k| hausdorff_distance(&trace.sets[k], &prev.sets[k]))
                    .fold(0.0f64, f64::max),
            )
        };
        rows.push((*delta, lambda_l2(trace, 0.0, 1.0), sup_dh, report.passed));
    }

    let mut table = String::from("delta,lambda_l2,sup_dH_prev\n");
    println!("delta     lambda_l2      sup_dH vs previous delta");
    for (delta, l2, sup, _) in &rows {
        let sup_text = sup.map(|v| format!("{v:.17e}")).unwrap_or_default();
        table.push_str(&format!("{delta:.17e},{l2:.17e},{sup_text}\n"));
        println!(
            "{delta:<9} {l2:<14.6e} {}",
            sup.map(|v| format!("{v:.6e}")).unwrap_or_else(|| "-".into())
        );
    }
    std::fs::create_dir_all(&root)?;
    std::fs::write(root.join("sweep.csv"), table)?;
    Ok(rows.iter().all(|r| r.3))
}

fn cmd_verify(dir: &Path) -> Result<bool> {
    let (config, trace) = read_run_dir(dir)?;
    let report = build_report(&trace, &config.checks, config.seed)?;
    write_report(dir, &report)?;
    print_report(&report);
    Ok(report.passed)
}

fn cmd_oracle(r0: f64, delta: f64, t_end: f64, dt: f64, out: Option<&Path>) -> Result<bool> {
    let samples = radial_ode(r0, &RadialForcing::Penalty { delta }, t_end, dt)?;
    let mut text = String::from("t,r\n");
    for (t, r) in samples {
        text.push_str(&format!("{t:.17e},{r:.17e}\n"));
    }
    emit(out, &text)?;
    Ok(true)
}

fn cmd_counterexamples(family: Family, n: usize, out: Option<&Path>) -> Result<bool> {
    let text = match family {
        Family::Annuli => {
            let mut t = String::from("index,total_curvature,perimeter,area\n");
            for i in 0..=n {
                let m = annuli_family(i)?;
                t.push_str(&format!(
                    "{i},{:.17e},{:.17e},{:.17e}\n",
                    m.total_curvature, m.perimeter, m.area
                ));
            }
            t
        }
        Family::Bumps => {
            let mut t = String::from("index,total_curvature,perimeter,volume\n");
            for i in 1..=n {
                let m = bump_family(i);
                t.push_str(&format!(
                    "{i},{:.17e},{:.17e},{:.17e}\n",
                    m.total_curvature, m.perimeter, m.volume
                ));
            }
            t
        }
        Family::Cones => {
            let mut t = String::from("epsilon,dH,dtilde,ratio\n");
            for j in 1..=n {
                let m = cone_family(0.5f64.powi(j as i32));
                t.push_str(&format!(
                    "{:.17e},{:.17e},{:.17e},{:.17e}\n",
                    m.epsilon,
                    m.hausdorff,
                    m.dtilde_sq.sqrt(),
                    m.ratio
                ));
            }
            t
        }
    };
    emit(out, &text)?;
    Ok(true)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let stdout = std::io::stdout();
            stdout.lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}
