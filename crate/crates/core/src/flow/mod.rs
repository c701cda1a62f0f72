//! The penalized energy, the constrained minimizing-movement step, the flow
//! driver, multiplier diagnostics, first variations and the optimality
//! inequality checks.

mod diagnostics;
mod driver;
mod params;
mod solver;
mod variation;

pub use diagnostics::{
    dissipation_report, equilibrium_volume, holder_fit, lambda_l2, HolderFit,
};
pub use driver::{run_flow, FlowTrace, StepStats};
pub use params::{gamma_delta, FlowParams, RHO_MAX};
pub use solver::{energy, mm_step, SolveInfo};
pub use variation::{
    dtilde_first_variation, euler_lagrange_check, first_variation_perimeter,
    first_variation_volume, sigma2_ratio, variation_feasibility, ElCheck, ElMargin,
    VariationField,
};
