use std::fs;
use std::path::{Path, PathBuf};

use crate::error::StarflowError;
use crate::flow::{FlowTrace, StepStats};
use crate::starset::{read_radial_csv, write_radial_csv, write_svg, RadialSet};
use crate::Result;

use super::config::ExperimentConfig;
use super::report::RunReport;

fn set_path(dir: &Path, k: usize) -> PathBuf {
    dir.join("sets").join(format!("E_{k:06}.csv"))
}

fn frame_path(dir: &Path, k: usize) -> PathBuf {
    dir.join("frames").join(format!("{k:06}.svg"))
}

pub fn write_trace_csv(path: &Path, steps: &[StepStats]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for s in steps {
        w.serialize(s)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<StepStats>> {
    let mut r = csv::Reader::from_path(path)
        .map_err(|e| StarflowError::CorruptTrace(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for row in r.deserialize() {
        let s: StepStats =
            row.map_err(|e| StarflowError::CorruptTrace(format!("{}: {e}", path.display())))?;
        out.push(s);
    }
    if out.is_empty() {
        return Err(StarflowError::CorruptTrace(format!(
            "{}: no rows",
            path.display()
        )));
    }
    Ok(out)
}

/// Write the full artifact set for one run: the config echo, the per-step
/// diagnostics table, one radii snapshot per step, and (optionally) one SVG
/// frame per step.
pub fn write_run_dir(
    dir: &Path,
    config: &ExperimentConfig,
    trace: &FlowTrace,
    svg: bool,
) -> Result<()> {
    fs::create_dir_all(dir.join("sets"))?;
    let mut config_text = serde_json::to_string_pretty(config)?;
    config_text.push('\n');
    fs::write(dir.join("config.json"), config_text)?;
    write_trace_csv(&dir.join("trace.csv"), &trace.steps)?;
    for (k, s) in trace.sets.iter().enumerate() {
        write_radial_csv(s, &set_path(dir, k))?;
    }
    if svg {
        fs::create_dir_all(dir.join("frames"))?;
        let reference = if trace.params.enforce_unit_volume {
            Some(std::f64::consts::PI.powf(-0.5))
        } else {
            None
        };
        for (k, s) in trace.sets.iter().enumerate() {
            write_svg(s, &frame_path(dir, k), reference)?;
        }
    }
    Ok(())
}

pub fn write_report(dir: &Path, report: &RunReport) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    fs::write(dir.join("report.json"), text)?;
    Ok(())
}

/// Reload a run directory produced by [`write_run_dir`]. Missing or
/// inconsistent artifacts surface as corrupt-trace errors.
pub fn read_run_dir(dir: &Path) -> Result<(ExperimentConfig, FlowTrace)> {
    let config_path = dir.join("config.json");
    let text = fs::read_to_string(&config_path)
        .map_err(|e| StarflowError::CorruptTrace(format!("{}: {e}", config_path.display())))?;
    let config: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| StarflowError::CorruptTrace(format!("{}: {e}", config_path.display())))?;
    let steps = read_trace_csv(&dir.join("trace.csv"))?;
    let mut sets: Vec<RadialSet> = Vec::with_capacity(steps.len());
    for k in 0..steps.len() {
        let path = set_path(dir, k);
        if !path.exists() {
            return Err(StarflowError::CorruptTrace(format!(
                "missing snapshot {}",
                path.display()
            )));
        }
        let set = read_radial_csv(&path, config.flow.r0, config.flow.big_r0).map_err(|e| {
            StarflowError::CorruptTrace(format!("{}: {e}", path.display()))
        })?;
        if set.len() != config.flow.m {
            return Err(StarflowError::CorruptTrace(format!(
                "{}: {} directions, config says {}",
                path.display(),
                set.len(),
                config.flow.m
            )));
        }
        sets.push(set);
    }
    Ok((
        config.clone(),
        FlowTrace {
            params: config.flow,
            sets,
            steps,
        },
    ))
}
