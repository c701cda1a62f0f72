use serde::{Deserialize, Serialize};

use crate::error::StarflowError;
use crate::Result;

/// Assumption bound on the reflection radius: `rho < 1/(5 sqrt(pi))` in the
/// plane (`(c_n 5)^{-1}` with `c_n = |B_1|^{1/n}`).
pub const RHO_MAX: f64 = 0.112_837_916_709_551_26;

/// Parameters of the discrete flow (plane only, `n = 2`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowParams {
    /// Volume-penalty scale: the forcing is `gamma_delta(v) = (1 - v)/delta`.
    pub delta: f64,
    /// Time step of the minimizing-movement scheme.
    pub h: f64,
    /// Inner star-ball radius of the admissible class `S_{r0,R0}`.
    pub r0: f64,
    /// Outer radius bound of the admissible class.
    #[serde(rename = "R0")]
    pub big_r0: f64,
    /// Reflection radius claimed for the initial set.
    pub rho: f64,
    /// Time horizon.
    #[serde(rename = "T")]
    pub t_end: f64,
    /// Number of grid directions.
    #[serde(rename = "M")]
    pub m: usize,
    /// Inner-solver first-order residual target (curvature units).
    #[serde(default = "default_inner_tol")]
    pub inner_tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_inner_iters: usize,
    /// Require `|E0| = 1` (within 1e-6) at the start of a run.
    #[serde(default = "default_true")]
    pub enforce_unit_volume: bool,
    /// Enforce the small-parameter guards `delta < delta_0(rho)` and
    /// `R0 > R_1 = 5 rho + sqrt(pi)` in addition to basic sanity. The guards
    /// come from the regime where the confinement estimates are proved; the
    /// scheme itself is well defined without them, so diagnostics-oriented
    /// callers may disable this.
    #[serde(default = "default_true")]
    pub strict_guards: bool,
}

fn default_inner_tol() -> f64 {
    1e-7
}

fn default_max_iters() -> usize {
    500
}

fn default_true() -> bool {
    true
}

impl FlowParams {
    /// Guard scale `delta_0 = rho (1 - |B_{5 rho}|)/(n-1)`; in the plane
    /// `|B_{5 rho}| = 25 pi rho^2`.
    pub fn delta_0(&self) -> f64 {
        self.rho * (1.0 - 25.0 * std::f64::consts::PI * self.rho * self.rho)
    }

    /// Confinement radius `R_1 = 5 rho + w_n^{1/n}` (`sqrt(pi)` in the plane).
    pub fn big_r1(&self) -> f64 {
        5.0 * self.rho + std::f64::consts::PI.sqrt()
    }

    /// Shrink-map feasibility bound `s_2 = 1/(2(R0^2 - r0^2))`.
    pub fn s2(&self) -> f64 {
        1.0 / (2.0 * (self.big_r0 * self.big_r0 - self.r0 * self.r0))
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.h).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.r0 && self.r0 < self.big_r0) {
            return Err(StarflowError::Config(format!(
                "need 0 < r0 < R0, got ({}, {})",
                self.r0, self.big_r0
            )));
        }
        if !(self.h > 0.0 && self.t_end >= 0.0) {
            return Err(StarflowError::Config(format!(
                "need h > 0 and T >= 0, got h={}, T={}",
                self.h, self.t_end
            )));
        }
        if !(self.delta > 0.0) {
            return Err(StarflowError::Config(format!(
                "need delta > 0, got {}",
                self.delta
            )));
        }
        if !(self.rho >= 0.0 && self.rho < RHO_MAX) {
            return Err(StarflowError::Config(format!(
                "rho={} outside [0, {RHO_MAX})",
                self.rho
            )));
        }
        if self.m < 16 {
            return Err(StarflowError::Config(format!("need M >= 16, got {}", self.m)));
        }
        if self.strict_guards {
            if self.delta >= self.delta_0() {
                return Err(StarflowError::Config(format!(
                    "delta exceeds delta_0: {} >= {}",
                    self.delta,
                    self.delta_0()
                )));
            }
            if self.big_r0 <= self.big_r1() {
                return Err(StarflowError::Config(format!(
                    "R0={} must exceed R_1={}",
                    self.big_r0,
                    self.big_r1()
                )));
            }
        }
        Ok(())
    }
}

/// Forcing scale `gamma_delta(v) = (1 - v)/delta`; curvature units under the
/// unit-volume normalization.
#[inline]
pub fn gamma_delta(v: f64, delta: f64) -> f64 {
    (1.0 - v) / delta
}
