//! Inner minimization of one movement step:
//! `F = argmin_{S_{r0,R0}} J_delta(F) + d~^2(F, E)/h`, solved over radii
//! vectors by limited-memory BFGS with a diagonal seed, Armijo backtracking,
//! box clamping to `[r0, R0]`, and a local smoothing repair for the
//! star-shape constraint. The iterate starts at `E` and only ever moves to
//! feasible points of lower objective, so the minimality contract
//! `objective(F) <= objective(E)` holds by construction.

use std::collections::VecDeque;

use crate::error::StarflowError;
use crate::starset::{
    boundary_distance_hinted, pseudo_distance_sq_radii, BoundaryPolyline, DirectionGrid, RadialSet,
};
use crate::Result;

use super::params::{gamma_delta, FlowParams};

/// Penalized energy `J_delta = Per + (1 - |.|)^2 / (2 delta)`.
pub fn energy(s: &RadialSet, delta: f64) -> f64 {
    s.perimeter() + (1.0 - s.volume()).powi(2) / (2.0 * delta)
}

/// Convergence report of one inner solve.
#[derive(Debug, Clone, Copy)]
pub struct SolveInfo {
    pub iters: usize,
    /// Final first-order residual, `max_i |g_i| / (dtheta r_i)` with bound
    /// constraints projected out (curvature units).
    pub residual: f64,
    pub objective: f64,
}

struct Objective<'a> {
    grid: &'a DirectionGrid,
    prev_radii: &'a [f64],
    prev_boundary: &'a BoundaryPolyline,
    delta: f64,
    h: f64,
}

impl Objective<'_> {
    /// Perimeter, volume and penalty use the same stencils as `RadialSet`,
    /// so `value` agrees exactly with `energy(F) + d~^2(F,E)/h`.
    fn value(&self, r: &[f64]) -> f64 {
        let m = r.len();
        let dt = self.grid.dtheta();
        let mut per = 0.0;
        let mut vol = 0.0;
        for i in 0..m {
            let p = deriv(r, i, dt);
            per += (r[i] * r[i] + p * p).sqrt() * dt;
            vol += 0.5 * r[i] * r[i] * dt;
        }
        let dsq = pseudo_distance_sq_radii(self.grid, r, self.prev_radii, self.prev_boundary);
        per + (1.0 - vol).powi(2) / (2.0 * self.delta) + dsq / self.h
    }

    fn gradient(&self, r: &[f64], g: &mut [f64]) {
        let m = r.len();
        let dt = self.grid.dtheta();
        // q_i = p_i / s_i feeds the perimeter chain rule through the stencil.
        let mut q = vec![0.0; m];
        let mut vol = 0.0;
        for i in 0..m {
            let p = deriv(r, i, dt);
            let s = (r[i] * r[i] + p * p).sqrt();
            q[i] = p / s;
            vol += 0.5 * r[i] * r[i] * dt;
            g[i] = dt * r[i] / s;
        }
        let lambda = gamma_delta(vol, self.delta);
        for i in 0..m {
            let qm1 = q[(i + m - 1) % m];
            let qp1 = q[(i + 1) % m];
            let qm2 = q[(i + m - 2) % m];
            let qp2 = q[(i + 2) % m];
            g[i] += (8.0 * (qm1 - qp1) - (qm2 - qp2)) / 12.0;
            g[i] -= lambda * dt * r[i];
            // d~^2 endpoint derivative: distance to the previous boundary at
            // the current boundary point, signed by which side it sits on.
            let x = [r[i] * self.grid.dir(i)[0], r[i] * self.grid.dir(i)[1]];
            let d = boundary_distance_hinted(x, self.prev_boundary, i);
            g[i] += dt * d * r[i] * (r[i] - self.prev_radii[i]).signum() / self.h;
        }
    }
}

/// Periodic five-point first derivative, identical to
/// `RadialSet::radius_deriv`.
#[inline]
fn deriv(r: &[f64], i: usize, dt: f64) -> f64 {
    let m = r.len();
    (8.0 * (r[(i + 1) % m] - r[(i + m - 1) % m]) - (r[(i + 2) % m] - r[(i + m - 2) % m]))
        / (12.0 * dt)
}

/// Discrete star-shape support `r_i^2 / sqrt(r_i^2 + r_i'^2)`.
#[inline]
fn support(r: &[f64], i: usize, dt: f64) -> f64 {
    let p = deriv(r, i, dt);
    r[i] * r[i] / (r[i] * r[i] + p * p).sqrt()
}

/// Clamp to the box and relax toward the local mean wherever the star-shape
/// support drops below `r0`; smoothing shrinks `|r'|`, which is what the
/// constraint bounds.
fn repair(r: &mut [f64], params: &FlowParams, dt: f64) -> bool {
    let m = r.len();
    let mut touched = false;
    for v in r.iter_mut() {
        let c = v.clamp(params.r0, params.big_r0);
        if c != *v {
            *v = c;
            touched = true;
        }
    }
    for _ in 0..50 {
        let bad: Vec<usize> = (0..m)
            .filter(|&i| support(r, i, dt) < params.r0 * (1.0 - 1e-12))
            .collect();
        if bad.is_empty() {
            return touched;
        }
        touched = true;
        let snapshot = r.to_vec();
        for &i in &bad {
            for j in [(i + m - 1) % m, i, (i + 1) % m] {
                let mean = (snapshot[(j + m - 1) % m] + snapshot[j] + snapshot[(j + 1) % m]) / 3.0;
                r[j] = (0.5 * snapshot[j] + 0.5 * mean).clamp(params.r0, params.big_r0);
            }
        }
    }
    touched
}

fn is_feasible(r: &[f64], params: &FlowParams, dt: f64, tol: f64) -> bool {
    r.iter().all(|&v| v >= params.r0 - tol && v <= params.big_r0 + tol)
        && (0..r.len()).all(|i| support(r, i, dt) >= params.r0 - tol)
}

/// First-order residual with active box bounds projected out.
fn residual(r: &[f64], g: &[f64], params: &FlowParams, dt: f64) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..r.len() {
        let at_lo = r[i] <= params.r0 * (1.0 + 1e-12) && g[i] > 0.0;
        let at_hi = r[i] >= params.big_r0 * (1.0 - 1e-12) && g[i] < 0.0;
        if at_lo || at_hi {
            continue;
        }
        worst = worst.max(g[i].abs() / (dt * r[i]));
    }
    worst
}

/// One constrained minimizing-movement step.
pub fn mm_step(e: &RadialSet, params: &FlowParams) -> Result<(RadialSet, SolveInfo)> {
    let grid = e.grid();
    let dt = grid.dtheta();
    let m = e.len();
    let feas_tol = 1e-9 * params.big_r0;
    if !is_feasible(e.radii(), params, dt, feas_tol) {
        return Err(StarflowError::Config(
            "mm_step input is not in the admissible class".into(),
        ));
    }
    let prev_boundary = e.boundary();
    let obj = Objective {
        grid,
        prev_radii: e.radii(),
        prev_boundary: &prev_boundary,
        delta: params.delta,
        h: params.h,
    };

    let mut x = e.radii().to_vec();
    let mut fx = obj.value(&x);
    let f0 = fx;
    let mut g = vec![0.0; m];
    obj.gradient(&x, &mut g);

    // Diagonal seed: the movement term contributes ~ dtheta r / h per radius,
    // the perimeter up to ~ 1/dtheta on the stiffest mode.
    let seed = |r: &[f64], i: usize| dt * r[i] / params.h + 2.0 / dt;
    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new(); // (s, y, 1/s.y)
    let mut info = SolveInfo {
        iters: 0,
        residual: residual(&x, &g, params, dt),
        objective: fx,
    };

    for iter in 0..params.max_inner_iters {
        if info.residual <= params.inner_tol {
            break;
        }
        // L-BFGS two-loop recursion on the preconditioned metric.
        let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut alphas = Vec::with_capacity(pairs.len());
        for (s, y, inv_sy) in pairs.iter().rev() {
            let a = inv_sy * s.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>();
            for (di, yi) in d.iter_mut().zip(y) {
                *di -= a * yi;
            }
            alphas.push(a);
        }
        for (i, di) in d.iter_mut().enumerate() {
            *di /= seed(&x, i);
        }
        for ((s, y, inv_sy), a) in pairs.iter().zip(alphas.iter().rev()) {
            let b = inv_sy * y.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>();
            for (di, si) in d.iter_mut().zip(s) {
                *di += (a - b) * si;
            }
        }
        let mut slope: f64 = d.iter().zip(&g).map(|(a, b)| a * b).sum();
        if slope >= 0.0 {
            // Fall back to preconditioned steepest descent.
            for (i, di) in d.iter_mut().enumerate() {
                *di = -g[i] / seed(&x, i);
            }
            slope = d.iter().zip(&g).map(|(a, b)| a * b).sum();
            pairs.clear();
        }

        // Armijo backtracking; every trial point is repaired to feasibility
        // before evaluation, so accepted iterates stay in the class.
        let mut step = 1.0;
        let mut accepted = false;
        let f_before = fx;
        let rounding = 4.0 * f64::EPSILON * fx.abs().max(1.0);
        for _ in 0..40 {
            if step * slope.abs() < rounding {
                // Any further decrease is below f64 resolution of the
                // objective; stop instead of accepting rounding noise.
                break;
            }
            let mut xt: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di).collect();
            let repaired = repair(&mut xt, params, dt);
            let ft = obj.value(&xt);
            if ft <= fx + 1e-4 * step * slope {
                let mut gt = vec![0.0; m];
                obj.gradient(&xt, &mut gt);
                let s: Vec<f64> = xt.iter().zip(&x).map(|(a, b)| a - b).collect();
                let y: Vec<f64> = gt.iter().zip(&g).map(|(a, b)| a - b).collect();
                let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
                if repaired {
                    pairs.clear();
                } else if sy > 1e-14 {
                    if pairs.len() == 8 {
                        pairs.pop_front();
                    }
                    pairs.push_back((s, y, 1.0 / sy));
                }
                x = xt;
                fx = ft;
                g = gt;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        info.iters = iter + 1;
        info.residual = residual(&x, &g, params, dt);
        info.objective = fx;
        if !accepted || f_before - fx < rounding {
            break; // converged to floating-point resolution of the objective
        }
    }

    if fx > f0 + 1e-12 * f0.abs().max(1.0) || !is_feasible(&x, params, dt, feas_tol) {
        return Err(StarflowError::StepFailed {
            t: f64::NAN,
            detail: format!(
                "inner solve left the feasible set or increased the objective \
                 (f0={f0}, f={fx}, residual={})",
                info.residual
            ),
        });
    }
    let set = RadialSet::new(grid.clone(), x, params.r0, params.big_r0)?;
    Ok((set, info))
}
