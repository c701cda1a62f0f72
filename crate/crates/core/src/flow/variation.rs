//! First variations of perimeter, volume and the movement term along the two
//! canonical deformation fields (dilation `x` and the inward field
//! `-(|x|^2 - r0^2) x`), plus the optimality-inequality margins they induce
//! at each flow step and the feasibility of the deformed sets.

use serde_json::json;

use crate::geochecks::{check_star_shaped, CheckReport};
use crate::starset::{boundary_distance_hinted, RadialSet};
use crate::Result;

use super::driver::FlowTrace;

/// A deformation field sampled on a boundary: values, normal components and
/// tangential divergence `div Psi - n . grad(Psi) n` at each boundary sample.
#[derive(Debug, Clone)]
pub struct VariationField {
    pub psi: Vec<[f64; 2]>,
    pub normal_component: Vec<f64>,
    pub surface_divergence: Vec<f64>,
}

impl VariationField {
    /// Dilation field `Psi(x) = x`: `grad(Psi) = I`, so the tangential
    /// divergence is `n - 1 = 1` in the plane, and `Psi . n = x . n`.
    pub fn dilation(e: &RadialSet) -> Self {
        let b = e.boundary();
        let mut psi = Vec::with_capacity(e.len());
        let mut normal = Vec::with_capacity(e.len());
        let mut div = Vec::with_capacity(e.len());
        for i in 0..e.len() {
            let x = b.points[i];
            let n = b.normals[i];
            psi.push(x);
            normal.push(x[0] * n[0] + x[1] * n[1]);
            div.push(1.0);
        }
        Self {
            psi,
            normal_component: normal,
            surface_divergence: div,
        }
    }

    /// Inward field `Psi(x) = -(|x|^2 - r0^2) x`, the `s`-derivative of the
    /// shrink map. `grad(Psi) = -((|x|^2 - r0^2) I + 2 x x^T)`, so
    /// `div Psi - n.grad(Psi) n = -(|x|^2 - r0^2) - 2|x|^2 + 2 (x.n)^2`.
    pub fn shrink(e: &RadialSet, r0: f64) -> Self {
        let b = e.boundary();
        let mut psi = Vec::with_capacity(e.len());
        let mut normal = Vec::with_capacity(e.len());
        let mut div = Vec::with_capacity(e.len());
        for i in 0..e.len() {
            let x = b.points[i];
            let n = b.normals[i];
            let xx = x[0] * x[0] + x[1] * x[1];
            let xn = x[0] * n[0] + x[1] * n[1];
            let c = xx - r0 * r0;
            psi.push([-c * x[0], -c * x[1]]);
            normal.push(-c * xn);
            div.push(-c - 2.0 * xx + 2.0 * xn * xn);
        }
        Self {
            psi,
            normal_component: normal,
            surface_divergence: div,
        }
    }
}

/// `d/ds Per(f_s(E))|_0 = int tangential divergence of Psi`.
pub fn first_variation_perimeter(e: &RadialSet, field: &VariationField) -> f64 {
    let b = e.boundary();
    field
        .surface_divergence
        .iter()
        .zip(&b.arc_weights)
        .map(|(d, w)| d * w)
        .sum()
}

/// `d/ds |f_s(E)||_0 = int Psi . n`.
pub fn first_variation_volume(e: &RadialSet, field: &VariationField) -> f64 {
    let b = e.boundary();
    field
        .normal_component
        .iter()
        .zip(&b.arc_weights)
        .map(|(v, w)| v * w)
        .sum()
}

/// `d/ds d~^2(f_s(E), F)|_0 = int d_signed(x, boundary F) Psi . n` over the
/// boundary of `E` (signed distance positive outside `F`).
pub fn dtilde_first_variation(e: &RadialSet, f: &RadialSet, field: &VariationField) -> f64 {
    let be = e.boundary();
    let bf = f.boundary();
    let mut acc = 0.0;
    for i in 0..e.len() {
        let x = be.points[i];
        let d = boundary_distance_hinted(x, &bf, i * f.len() / e.len());
        let sign = if f.contains(x) { -1.0 } else { 1.0 };
        acc += sign * d * field.normal_component[i] * be.arc_weights[i];
    }
    acc
}

/// Optimality-inequality margins at step `k` for one field:
/// `int div_tan Psi + (1/h) int d_signed(x, prev) Psi.n - lambda int Psi.n`,
/// which minimality makes nonnegative up to the inner residual and the
/// quadrature resolution (both folded into `tolerance`).
#[derive(Debug, Clone, Copy)]
pub struct ElMargin {
    pub margin: f64,
    pub tolerance: f64,
}

/// Both canonical fields at step `k >= 1` of a trace.
#[derive(Debug, Clone, Copy)]
pub struct ElCheck {
    pub dilation: ElMargin,
    pub shrink: ElMargin,
}

pub fn euler_lagrange_check(trace: &FlowTrace, k: usize) -> ElCheck {
    assert!(k >= 1 && k < trace.sets.len(), "need an interior step index");
    let e = &trace.sets[k];
    let prev = &trace.sets[k - 1];
    let row = &trace.steps[k];
    let h = trace.params.h;
    let dtheta = e.grid().dtheta();
    let bp = prev.boundary();
    let be = e.boundary();
    let eval = |field: &VariationField| {
        let mut margin = 0.0;
        let mut scale = 0.0;
        for i in 0..e.len() {
            let x = be.points[i];
            let d = boundary_distance_hinted(x, &bp, i);
            let sign = (e.radii()[i] - prev.radii()[i]).signum();
            margin += (field.surface_divergence[i]
                + (sign * d / h - row.lambda) * field.normal_component[i])
                * be.arc_weights[i];
            scale += e.radii()[i] * field.psi_radial(i).abs() * dtheta;
        }
        // Residual-weighted slack from the inner solve plus the second-order
        // quadrature floor of the boundary integrals.
        let tolerance = 4.0 * row.residual * scale + 50.0 * dtheta * dtheta;
        ElMargin { margin, tolerance }
    };
    ElCheck {
        dilation: eval(&VariationField::dilation(e)),
        shrink: eval(&VariationField::shrink(e, trace.params.r0)),
    }
}

impl VariationField {
    /// Radial component of the generated boundary perturbation: the radius
    /// derivative `psi_i . omega_i` used to weigh the solver residual.
    fn psi_radial(&self, i: usize) -> f64 {
        let p = self.psi[i];
        (p[0] * p[0] + p[1] * p[1]).sqrt()
    }
}

/// Companion ratio `int_{boundary E_k} d^2(x, boundary E_{k-1}) dsigma`
/// divided by `d~^2(E_k, E_{k-1})`; bounded by a single constant along a
/// trace.
pub fn sigma2_ratio(trace: &FlowTrace, k: usize) -> Option<f64> {
    let e = &trace.sets[k];
    let prev = &trace.sets[k - 1];
    let dsq = trace.steps[k].dtilde_step.powi(2);
    if dsq <= 0.0 {
        return None;
    }
    let bp = prev.boundary();
    let be = e.boundary();
    let mut num = 0.0;
    for i in 0..e.len() {
        let d = boundary_distance_hinted(be.points[i], &bp, i);
        num += d * d * be.arc_weights[i];
    }
    Some(num / dsq)
}

/// Feasibility of the two deformation families: `(1+s)E` for
/// `s in [0, R0/max r - 1)` and the shrink map for `s in [0, s2)`,
/// `s2 = 1/(2(R0^2 - r0^2))`. Each deformed set must stay star-shaped with
/// respect to `B_{r0}` with radii at most `R0`.
pub fn variation_feasibility(
    e: &RadialSet,
    r0: f64,
    big_r0: f64,
    samples: usize,
) -> Result<CheckReport> {
    let base = RadialSet::new(e.grid().clone(), e.radii().to_vec(), r0, big_r0)?;
    let s1 = big_r0 / base.max_radius() - 1.0;
    let s2 = 1.0 / (2.0 * (big_r0 * big_r0 - r0 * r0));
    let mut worst = f64::INFINITY;
    let mut witness = json!(null);
    let mut tolerance: f64 = 1e-9;
    let mut consider = |set: &RadialSet, family: &str, s: f64| {
        let star = check_star_shaped(set, r0);
        let margin = star.worst_margin.min(big_r0 - set.max_radius());
        if margin < worst {
            worst = margin;
            witness = json!({ "family": family, "s": s });
        }
        tolerance = tolerance.max(star.tolerance);
    };
    for j in 0..samples {
        let frac = j as f64 / samples as f64;
        let scaled = base.scale(1.0 + frac * s1 * 0.999)?;
        consider(&scaled, "dilation", frac * s1 * 0.999);
        let shrunk = base.apply_shrink_map(frac * s2 * 0.999, r0)?;
        consider(&shrunk, "shrink", frac * s2 * 0.999);
    }
    Ok(CheckReport {
        name: "variation_feasibility".into(),
        passed: worst >= -tolerance,
        worst_margin: worst,
        witness,
        tolerance,
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::starset::{ball, pseudo_distance_sq, random_star_set};
    use std::f64::consts::PI;

    /// Magnitude scale of the rate integral, `int |d| |Psi.n| dsigma`.
    fn dtilde_first_variation_abs(e: &RadialSet, f: &RadialSet, field: &VariationField) -> f64 {
        let be = e.boundary();
        let bf = f.boundary();
        (0..e.len())
            .map(|i| {
                let d = crate::starset::boundary_distance(be.points[i], &bf);
                d * field.normal_component[i].abs() * be.arc_weights[i]
            })
            .sum()
    }

    #[test]
    fn circle_closed_forms() {
        let r = 1.3;
        let b = ball(1024, r);
        let dil = VariationField::dilation(&b);
        assert!((first_variation_volume(&b, &dil) - 2.0 * PI * r * r).abs() < 1e-6);
        assert!((first_variation_perimeter(&b, &dil) - 2.0 * PI * r).abs() < 1e-6);
        let r0 = 0.5;
        let shr = VariationField::shrink(&b, r0);
        let expect = -2.0 * PI * r * r * (r * r - r0 * r0);
        assert!((first_variation_volume(&b, &shr) - expect).abs() < 1e-6 * expect.abs());
        // d~^2 variation between concentric circles: d_signed = -1 on the
        // inner boundary of B_2 relative to... here E=B_1 inside F=B_2.
        let e = ball(1024, 1.0);
        let f = ball(1024, 2.0);
        let rate = dtilde_first_variation(&e, &f, &VariationField::dilation(&e));
        assert!((rate - (-2.0 * PI)).abs() < 1e-3, "rate {rate}");
        assert!(dtilde_first_variation(&e, &e, &VariationField::dilation(&e)).abs() < 1e-9);
    }

    #[test]
    fn variations_match_finite_differences() {
        for seed in 0..8u64 {
            let e = random_star_set(512, 0.5, 1.1, seed);
            let f = random_star_set(512, 0.5, 1.1, seed + 100);
            let s = 1e-4;
            // Dilation family: exact homogeneity.
            let dil = VariationField::dilation(&e);
            let scaled = e.scale(1.0 + s).unwrap();
            let fd_per = (scaled.perimeter() - e.perimeter()) / s;
            let fd_vol = (scaled.volume() - e.volume()) / s;
            let an_per = first_variation_perimeter(&e, &dil);
            let an_vol = first_variation_volume(&e, &dil);
            assert!((fd_per - an_per).abs() / an_per.abs() < 1e-3);
            assert!((fd_vol - an_vol).abs() / an_vol.abs() < 1e-3);
            let shrunk_e = e.scale(1.0 - s).unwrap();
            let fd_dt =
                (pseudo_distance_sq(&scaled, &f) - pseudo_distance_sq(&shrunk_e, &f)) / (2.0 * s);
            let an_dt = dtilde_first_variation(&e, &f, &dil);
            // Relative to the non-cancelling magnitude of the rate integral.
            let scale_dt = dtilde_first_variation_abs(&e, &f, &dil);
            assert!(
                (fd_dt - an_dt).abs() / scale_dt < 1e-3,
                "seed={seed} fd={fd_dt} an={an_dt} scale={scale_dt}"
            );
            // Shrink family through the actual map.
            let r0 = 0.3;
            let shr = VariationField::shrink(&e, r0);
            let mapped = e.apply_shrink_map(s, r0).unwrap();
            let fd_per = (mapped.perimeter() - e.perimeter()) / s;
            let fd_vol = (mapped.volume() - e.volume()) / s;
            let an_per = first_variation_perimeter(&e, &shr);
            let an_vol = first_variation_volume(&e, &shr);
            assert!(
                (fd_per - an_per).abs() / an_per.abs().max(1e-3) < 1e-2,
                "seed={seed} fd={fd_per} an={an_per}"
            );
            assert!((fd_vol - an_vol).abs() / an_vol.abs() < 1e-3);
        }
    }

    #[test]
    fn feasibility_examples() {
        let b2 = ball(128, 2.0);
        let rep = variation_feasibility(&b2, 1.0, 3.0, 12).unwrap();
        assert!(rep.passed, "margin {}", rep.worst_margin);
        let tight = ball(128, 2.99);
        let rep = variation_feasibility(&tight, 1.0, 3.0, 12).unwrap();
        assert!(rep.passed, "s1 shrinks with max radius: {}", rep.worst_margin);
    }
}
