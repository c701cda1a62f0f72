//! Closed-form radial dynamics and barrier constructions: the ODE satisfied
//! by evolving balls, the inner/outer barrier ball families driven by a time
//! forcing, and the comparison probe (confinement and ordering) for traces.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::StarflowError;
use crate::flow::{run_flow, FlowTrace};
use crate::geochecks::CheckReport;
use crate::starset::{ball, RadialSet, TimeForcing};
use crate::Result;

/// Forcing on the right-hand side of the radial ODE
/// `r' = -(n-1)/r + lambda(t)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum RadialForcing {
    /// The volume penalty `gamma_delta(w_n r^n)`; in the plane
    /// `(1 - pi r^2)/delta`.
    Penalty { delta: f64 },
    /// A prescribed multiplier `lambda(t)`.
    Prescribed(TimeForcingSpec),
    /// No forcing: pure curvature flow, `r(t) = sqrt(r0^2 - 2t)` in the
    /// plane.
    None,
}

/// Serializable stand-in for a sampled forcing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimeForcingSpec {
    pub dt: f64,
    pub lambda: Vec<f64>,
}

impl RadialForcing {
    fn value(&self, r: f64, t: f64) -> f64 {
        match self {
            RadialForcing::Penalty { delta } => {
                (1.0 - std::f64::consts::PI * r * r) / delta
            }
            RadialForcing::Prescribed(spec) => {
                let forcing = TimeForcing::from_samples(spec.dt, spec.lambda.clone());
                forcing.value_at(t)
            }
            RadialForcing::None => 0.0,
        }
    }
}

/// RK4 integration of `r' = -1/r + lambda` (plane). Returns `(t_k, r_k)`
/// samples at spacing `dt`; errors with `collapse` if the radius reaches 0.
pub fn radial_ode(
    r0: f64,
    forcing: &RadialForcing,
    t_end: f64,
    dt: f64,
) -> Result<Vec<(f64, f64)>> {
    if !(r0 > 0.0 && dt > 0.0) {
        return Err(StarflowError::Config(format!(
            "radial_ode needs r0 > 0 and dt > 0, got r0={r0}, dt={dt}"
        )));
    }
    let rhs = |r: f64, t: f64| -1.0 / r + forcing.value(r, t);
    let steps = (t_end / dt).round() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    let mut r = r0;
    out.push((0.0, r));
    for k in 0..steps {
        let t = k as f64 * dt;
        let k1 = rhs(r, t);
        let k2 = rhs(r + 0.5 * dt * k1, t + 0.5 * dt);
        let k3 = rhs(r + 0.5 * dt * k2, t + 0.5 * dt);
        let k4 = rhs(r + dt * k3, t + dt);
        r += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !(r > 0.0) || !r.is_finite() {
            return Err(StarflowError::Collapse { radius: r, t: t + dt });
        }
        out.push(((k + 1) as f64 * dt, r));
    }
    Ok(out)
}

/// The two barrier families `B_{c - Lambda(t)}` and `B_{c + Lambda(t)}`
/// driven by a forcing integral; the inner one is `None` once its radius
/// is nonpositive.
pub fn barrier_sets(
    c: f64,
    forcing: &TimeForcing,
    t: f64,
    m: usize,
) -> (Option<RadialSet>, RadialSet) {
    let big_lambda = forcing.integral_at(t);
    let inner = if c - big_lambda > 0.0 {
        Some(ball(m, c - big_lambda))
    } else {
        None
    };
    (inner, ball(m, c + big_lambda))
}

/// Confinement and ordering probe: every set of the trace stays inside
/// `B_{R_1}` (`R_1 = 5 rho + sqrt(pi)`), and two auxiliary runs from nested
/// balls remain nested at every step (radius-wise). The worst margin is the
/// most negative of the confinement gaps and the nesting gaps.
pub fn comparison_probe(trace: &FlowTrace) -> Result<CheckReport> {
    let r1 = trace.params.big_r1();
    let mut worst = f64::INFINITY;
    let mut witness = json!(null);
    for (k, s) in trace.sets.iter().enumerate() {
        let gap = r1 - s.max_radius();
        if gap < worst {
            worst = gap;
            witness = json!({ "kind": "confinement", "step": k, "max_radius": s.max_radius() });
        }
    }

    // Ordering: a strictly smaller and a strictly larger ball around the
    // equilibrium scale, evolved with the trace's parameters over a short
    // window.
    let mut p = trace.params.clone();
    p.t_end = (trace.params.t_end).min(0.05);
    p.enforce_unit_volume = false;
    let lo = run_flow(&ball(p.m, 0.45), &p)?;
    let hi = run_flow(&ball(p.m, 0.70), &p)?;
    for k in 0..lo.sets.len() {
        for i in 0..p.m {
            let gap = hi.sets[k].radii()[i] - lo.sets[k].radii()[i];
            if gap < worst {
                worst = gap;
                witness = json!({ "kind": "ordering", "step": k, "direction": i });
            }
        }
    }
    Ok(CheckReport {
        name: "comparison_probe".into(),
        passed: worst >= -1e-9,
        worst_margin: worst,
        witness,
        tolerance: 1e-9,
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::equilibrium_volume;

    #[test]
    fn equilibrium_is_fixed_point_of_ode() {
        let delta = 0.05;
        let v = equilibrium_volume(delta);
        let r_eq = (v / std::f64::consts::PI).sqrt();
        let traj = radial_ode(r_eq, &RadialForcing::Penalty { delta }, 1.0, 1e-4).unwrap();
        for &(_, r) in &traj {
            assert!((r - r_eq).abs() < 1e-10, "drifted to {r}");
        }
    }

    #[test]
    fn pure_mcf_matches_closed_form() {
        let traj = radial_ode(1.0, &RadialForcing::None, 0.4, 1e-5).unwrap();
        for &(t, r) in &traj {
            let exact = (1.0 - 2.0 * t).sqrt();
            assert!((r - exact).abs() < 1e-9, "t={t}: {r} vs {exact}");
        }
        // Collapse detection: the circle vanishes at t = 1/2.
        assert!(matches!(
            radial_ode(1.0, &RadialForcing::None, 0.6, 1e-5),
            Err(StarflowError::Collapse { .. })
        ));
    }

    #[test]
    fn monotone_approach_to_equilibrium() {
        let delta = 0.05;
        let below = radial_ode(0.4, &RadialForcing::Penalty { delta }, 0.2, 1e-4).unwrap();
        assert!(below.last().unwrap().1 > below[0].1, "should grow");
        let above = radial_ode(0.7, &RadialForcing::Penalty { delta }, 0.2, 1e-4).unwrap();
        assert!(above.last().unwrap().1 < above[0].1, "should shrink");
    }

    #[test]
    fn rk4_self_convergence() {
        let f = RadialForcing::Penalty { delta: 0.05 };
        let a = radial_ode(0.45, &f, 0.5, 1e-3).unwrap().last().unwrap().1;
        let b = radial_ode(0.45, &f, 0.5, 5e-4).unwrap().last().unwrap().1;
        assert!((a - b).abs() < 1e-8, "dt halving moved r(T) by {}", (a - b).abs());
    }

    #[test]
    fn barrier_examples() {
        let forcing = TimeForcing::constant(1.0, 0.05, 20);
        let (inner, outer) = barrier_sets(2.0, &forcing, 0.5, 64);
        assert!((inner.unwrap().max_radius() - 1.5).abs() < 1e-12);
        assert!((outer.max_radius() - 2.5).abs() < 1e-12);
        let zero = TimeForcing::constant(0.0, 0.05, 20);
        let (i0, o0) = barrier_sets(2.0, &zero, 0.5, 64);
        assert_eq!(i0.unwrap().radii(), o0.radii());
        // Degenerate inner barrier.
        let (gone, _) = barrier_sets(0.3, &forcing, 0.5, 64);
        assert!(gone.is_none());
    }
}
