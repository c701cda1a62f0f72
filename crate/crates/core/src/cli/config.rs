use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::StarflowError;
use crate::flow::FlowParams;
use crate::geochecks::check_star_shaped;
use crate::starset::{ball, flower, read_radial_csv, RadialSet};
use crate::Result;

/// Initial-shape specification. Lengths are in the same units as the radii
/// bounds of [`FlowParams`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeSpec {
    /// Centered disk of radius `r`.
    Ball { r: f64 },
    /// Cosine flower `a + b cos(k theta)`.
    Flower { a: f64, b: f64, k: u32 },
    /// Radii loaded from a `theta,r` CSV on the standard direction grid.
    RadiiFile { path: PathBuf },
}

/// Which verification suites a run executes and reports on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckSuite {
    /// Star-shape support, reflection symmetry bound, confinement.
    Geometry,
    /// Per-step energy decrease and the movement-distance budget.
    Dissipation,
    /// Optimality margins for the dilation and shrink variations.
    EulerLagrange,
    /// Time-regularity fit of step displacements.
    Holder,
    /// Barrier confinement and ordering of auxiliary nested runs.
    Comparison,
}

pub fn all_suites() -> Vec<CheckSuite> {
    vec![
        CheckSuite::Geometry,
        CheckSuite::Dissipation,
        CheckSuite::EulerLagrange,
        CheckSuite::Holder,
        CheckSuite::Comparison,
    ]
}

/// One experiment: flow parameters, the initial shape, reproducibility seed,
/// where artifacts go, and which checks gate the exit code.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub flow: FlowParams,
    pub shape: ShapeSpec,
    /// Single seed behind every sampler used by the checkers.
    #[serde(default)]
    pub seed: u64,
    pub output_dir: PathBuf,
    #[serde(default = "all_suites")]
    pub checks: Vec<CheckSuite>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let config: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| StarflowError::Config(format!("invalid config {}: {e}", path.display())))?;
        config.flow.validate()?;
        Ok(config)
    }

    /// Build the initial set on the configured grid and reject combinations
    /// that start outside the admissible class, quoting the failed check.
    pub fn initial_set(&self) -> Result<RadialSet> {
        let p = &self.flow;
        let raw = match &self.shape {
            ShapeSpec::Ball { r } => {
                if !(*r > 0.0) {
                    return Err(StarflowError::Config("ball radius must be positive".into()));
                }
                ball(p.m, *r)
            }
            ShapeSpec::Flower { a, b, k } => flower(p.m, *a, *b, *k),
            ShapeSpec::RadiiFile { path } => read_radial_csv(path, p.r0, p.big_r0)?,
        };
        let set = if p.enforce_unit_volume {
            raw.rescaled_to_volume(1.0)?
        } else {
            raw
        };
        if set.len() != p.m {
            return Err(StarflowError::Config(format!(
                "initial set has {} directions, params ask for {}",
                set.len(),
                p.m
            )));
        }
        if set.min_radius() < p.r0 || set.max_radius() > p.big_r0 {
            return Err(StarflowError::Config(format!(
                "initial radii [{:.6}, {:.6}] leave the admissible band [{}, {}]",
                set.min_radius(),
                set.max_radius(),
                p.r0,
                p.big_r0
            )));
        }
        let star = check_star_shaped(&set, p.r0);
        if !star.passed {
            return Err(StarflowError::Config(format!(
                "initial shape fails the star-shape check: {}",
                serde_json::to_string(&star).unwrap_or_default()
            )));
        }
        Ok(set)
    }
}
