use serde::{Deserialize, Serialize};

use crate::error::StarflowError;
use crate::starset::{hausdorff_distance, pseudo_distance, RadialSet};
use crate::Result;

use super::params::{gamma_delta, FlowParams};
use super::solver::{energy, mm_step};

/// Per-step diagnostics row (the `trace.csv` schema).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StepStats {
    pub t: f64,
    pub volume: f64,
    pub perimeter: f64,
    pub energy: f64,
    pub lambda: f64,
    /// `d~(E_k, E_{k-1})`; zero on the initial row.
    pub dtilde_step: f64,
    /// `d_H(E_k, E_{k-1})`; zero on the initial row.
    #[serde(rename = "dH_step")]
    pub dh_step: f64,
    pub iters: usize,
    pub residual: f64,
}

/// A discrete trajectory: the sets `E_k` at times `k h` plus per-step
/// diagnostics (first row describes the initial set).
#[derive(Debug, Clone)]
pub struct FlowTrace {
    pub params: FlowParams,
    pub sets: Vec<RadialSet>,
    pub steps: Vec<StepStats>,
}

impl FlowTrace {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.steps.iter().map(|s| s.t)
    }

    /// Set index for a time in `[0, T]` (piecewise-constant `[t/h]` rule).
    pub fn set_at(&self, t: f64) -> &RadialSet {
        let k = ((t / self.params.h) as usize).min(self.sets.len() - 1);
        &self.sets[k]
    }

    pub fn last(&self) -> &RadialSet {
        self.sets.last().expect("trace has at least the initial set")
    }
}

fn stats_row(s: &RadialSet, t: f64, delta: f64) -> StepStats {
    let v = s.volume();
    StepStats {
        t,
        volume: v,
        perimeter: s.perimeter(),
        energy: energy(s, delta),
        lambda: gamma_delta(v, delta),
        dtilde_step: 0.0,
        dh_step: 0.0,
        iters: 0,
        residual: 0.0,
    }
}

/// Iterate the movement step from `e0` up to the horizon `T`.
pub fn run_flow(e0: &RadialSet, params: &FlowParams) -> Result<FlowTrace> {
    params.validate()?;
    if e0.len() != params.m {
        return Err(StarflowError::Config(format!(
            "initial set has {} directions, params ask for {}",
            e0.len(),
            params.m
        )));
    }
    if params.enforce_unit_volume && (e0.volume() - 1.0).abs() > 1e-6 {
        return Err(StarflowError::Config(format!(
            "initial volume {} is not 1 (use rescaled_to_volume)",
            e0.volume()
        )));
    }
    let steps = params.steps();
    let mut sets = Vec::with_capacity(steps + 1);
    let mut rows = Vec::with_capacity(steps + 1);
    sets.push(e0.clone());
    rows.push(stats_row(e0, 0.0, params.delta));
    for k in 1..=steps {
        let prev = sets.last().unwrap();
        let t = k as f64 * params.h;
        let (next, info) = mm_step(prev, params).map_err(|e| match e {
            StarflowError::StepFailed { detail, .. } => StarflowError::StepFailed { t, detail },
            other => other,
        })?;
        let mut row = stats_row(&next, t, params.delta);
        row.dtilde_step = pseudo_distance(&next, prev);
        row.dh_step = hausdorff_distance(&next, prev);
        row.iters = info.iters;
        row.residual = info.residual;
        sets.push(next);
        rows.push(row);
    }
    Ok(FlowTrace {
        params: params.clone(),
        sets,
        steps: rows,
    })
}
