//! Negative results made executable. Three families show why the uniform
//! star-shape class is load-bearing:
//!
//! * [`annuli_family`]: a planar disk with shrinking circular holes whose
//!   total boundary curvature diverges linearly in the hole count while
//!   perimeter and area stay bounded (every hole contributes `-2 pi` by the
//!   turning-number argument).
//! * [`bump_family`]: the simply connected, star-shaped analogue in three
//!   dimensions — a cube carrying shrinking spherical-cap bumps on one face;
//!   total mean curvature grows like the harmonic series while volume and
//!   surface area converge.
//! * [`cone_family`] / [`translate_family`]: thin cone spikes attached to the
//!   unit ball, for which the Hausdorff distance stays put while the movement
//!   pseudo-distance collapses, so no constant can dominate
//!   `d_H^3` by `d~^2` once the class constraint is dropped.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;

use crate::error::StarflowError;
use crate::starset::{ball, pseudo_distance_sq, DirectionGrid, RadialSet};
use crate::Result;

/// Radius of the outer disk in the holes family.
pub const ANNULI_OUTER_RADIUS: f64 = 10.0;

/// Closed-form metrics of the disk-with-holes truncation.
#[derive(Debug, Clone, Serialize)]
pub struct AnnuliMetrics {
    pub holes: usize,
    /// `2 pi (1 - N)`: the outer circle turns once, each hole once backwards.
    pub total_curvature: f64,
    /// `20 pi + sum 2 pi / i^2`.
    pub perimeter: f64,
    /// `pi (100 - sum 1 / i^4)`.
    pub area: f64,
    /// Deterministic hole centers, pairwise disjoint and strictly inside the
    /// outer disk.
    pub centers: Vec<[f64; 2]>,
}

/// The first `holes` members of the family: hole `i` is a disk of radius
/// `1/i^2`, packed left to right along the horizontal diameter. All metrics
/// are exact closed forms; the centers only witness that the packing exists.
pub fn annuli_family(holes: usize) -> Result<AnnuliMetrics> {
    let gap = 0.05;
    let mut cursor = -(ANNULI_OUTER_RADIUS - 1.0);
    let mut centers = Vec::with_capacity(holes);
    let mut perimeter = TAU * ANNULI_OUTER_RADIUS;
    let mut area = PI * ANNULI_OUTER_RADIUS * ANNULI_OUTER_RADIUS;
    for i in 1..=holes {
        let r = 1.0 / (i * i) as f64;
        let c = cursor + gap + r;
        if c + r > ANNULI_OUTER_RADIUS - 1.0 {
            return Err(StarflowError::Config(format!(
                "cannot place {holes} disjoint holes inside the outer disk \
                 (ran out of room at hole {i})"
            )));
        }
        centers.push([c, 0.0]);
        cursor = c + r;
        perimeter += TAU * r;
        area -= PI * r * r;
    }
    Ok(AnnuliMetrics {
        holes,
        total_curvature: TAU * (1.0 - holes as f64),
        perimeter,
        area,
        centers,
    })
}

/// `H_n = sum_{i<=n} 1/i`.
pub fn harmonic_number(n: usize) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}

// --- Bump family (three dimensions) ----------------------------------------
//
// The body is the cube `[-40, 40]^3`; bump `i` is the graph of
// `r_i phi(|x'| / r_i)` with `r_i = 1/i`, raised on the face `x1 = 40` over a
// disjoint disk footprint with center in the radius-10 disk. Scaling the
// unit cap by `r` scales its total mean curvature by `r` (one curvature
// factor `1/r` against two area factors `r`), so the caps contribute
// `C * H_N` in total, where `C` is the unit cap's total mean curvature.

/// Unit bump profile: concave, valued in `(0, 1/2]` on the open unit disk,
/// with radial slope `-rho` (so `|grad| <= 1`).
fn bump_profile(rho: f64) -> f64 {
    0.5 * (1.0 - rho * rho)
}

fn bump_slope(rho: f64) -> f64 {
    -rho
}

/// Composite Simpson rule on `[a, b]` with an even interval count.
fn simpson<F: Fn(f64) -> f64>(a: f64, b: f64, intervals: usize, f: F) -> f64 {
    assert!(intervals >= 2 && intervals % 2 == 0, "need an even interval count");
    let h = (b - a) / intervals as f64;
    let mut acc = f(a) + f(b);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Total mean curvature of the unit cap, via the divergence identity for
/// graphs: `int_cap H dsigma = -int_disk div(grad phi / sqrt(1+|grad phi|^2))`,
/// which for a radial profile collapses to a one-dimensional integral of
/// `(rho F)'` with `F = phi' / sqrt(1 + phi'^2)`. For this profile the flux
/// form evaluates to `pi sqrt(2)` exactly.
pub fn cap_curvature(intervals: usize) -> f64 {
    -TAU * simpson(0.0, 1.0, intervals, |rho| {
        let s = bump_slope(rho);
        let f = s / (1.0 + s * s).sqrt();
        // phi'' = -1 for this profile, so F' = phi'' (1 + phi'^2)^{-3/2}.
        let fp = -(1.0 + s * s).powf(-1.5);
        f + rho * fp
    })
}

/// Lateral area of the unit cap, `2 pi int rho sqrt(1 + phi'^2) drho`.
fn cap_area(intervals: usize) -> f64 {
    TAU * simpson(0.0, 1.0, intervals, |rho| {
        let s = bump_slope(rho);
        rho * (1.0 + s * s).sqrt()
    })
}

/// Volume under the unit cap, `2 pi int rho phi(rho) drho`.
fn cap_volume(intervals: usize) -> f64 {
    TAU * simpson(0.0, 1.0, intervals, |rho| rho * bump_profile(rho))
}

/// Metrics of the cube-with-bumps truncation.
#[derive(Debug, Clone, Serialize)]
pub struct BumpMetrics {
    pub bumps: usize,
    /// Total mean curvature of one unit cap.
    pub cap_curvature: f64,
    /// The diverging part: `cap_curvature * H_N`.
    pub total_curvature: f64,
    /// `80^3 + |cap| * sum r_i^3`.
    pub volume: f64,
    /// Cube faces minus the bump footprints plus the cap areas:
    /// `6 * 80^2 - pi sum r_i^2 + |lateral cap| * sum r_i^2`.
    pub perimeter: f64,
}

/// First `bumps` members of the family, with `r_i = 1/i`. The quadrature
/// resolution is fixed high enough that Simpson error is far below every
/// tolerance used downstream.
pub fn bump_family(bumps: usize) -> BumpMetrics {
    let intervals = 4096;
    let c = cap_curvature(intervals);
    let sum_r2: f64 = (1..=bumps).map(|i| ((i * i) as f64).recip()).sum();
    let sum_r3: f64 = (1..=bumps).map(|i| ((i * i * i) as f64).recip()).sum();
    BumpMetrics {
        bumps,
        cap_curvature: c,
        total_curvature: c * harmonic_number(bumps),
        volume: 80.0f64.powi(3) + cap_volume(intervals) * sum_r3,
        perimeter: 6.0 * 80.0f64.powi(2) + (cap_area(intervals) - PI) * sum_r2,
    }
}

/// Worst-case support margin `x . n - 10` over the bump boundary pieces.
///
/// A cap point is `x = (40 + r phi(rho), r y + x_i)` with outward normal
/// proportional to `(1, -grad phi)`; the footprint center satisfies
/// `|x_i| <= 10`, and the margin below places it adversarially against the
/// normal. A nonnegative return certifies the whole family is star-shaped
/// with respect to a fixed ball (support at least 10 in every direction the
/// bumps face).
pub fn bump_star_margin(bumps: usize, samples: usize) -> f64 {
    let mut worst = f64::INFINITY;
    for i in 1..=bumps {
        let r = 1.0 / i as f64;
        for k in 0..=samples {
            let rho = k as f64 / samples as f64;
            let s = bump_slope(rho);
            let support = (40.0 + r * bump_profile(rho) - s * rho * r - s.abs() * 10.0)
                / (1.0 + s * s).sqrt();
            worst = worst.min(support - 10.0);
        }
    }
    worst
}

// --- Cone families ----------------------------------------------------------

/// Radial profile of the hull of `B_r(0)` and the point `d e_1`: inside the
/// half-angle `phi_t = pi/2 - arcsin(r/d)` the boundary is the tangent line
/// `x . n = r` with `n` at angle `phi_t`; outside it is the ball.
fn spike_radius(d: f64, r: f64, theta: f64) -> f64 {
    let phi_t = FRAC_PI_2 - (r / d).asin();
    if theta.abs() <= phi_t {
        r / (theta.abs() - phi_t).cos()
    } else {
        r
    }
}

/// Half-width in angle of the part of the spike protruding past `B_1`.
fn spike_active_angle(d: f64, r: f64) -> f64 {
    r.asin() - (r / d).asin()
}

/// The unit ball with a thin spike of aperture `epsilon` grafted toward
/// `2 e_1`, as a radial profile.
pub fn cone_union_set(m: usize, d: f64, epsilon: f64) -> RadialSet {
    let grid = DirectionGrid::new(m);
    let radii = (0..m)
        .map(|i| {
            let mut t = grid.theta(i);
            if t > PI {
                t -= TAU;
            }
            spike_radius(d, epsilon, t).max(1.0)
        })
        .collect();
    RadialSet::new(grid, radii, 0.5, d).expect("spiked ball radii are valid")
}

/// Measurements of one spiked ball against the unit ball.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConeMetrics {
    pub epsilon: f64,
    /// Always `1`: the spike tip sits at `2 e_1` for every aperture.
    pub hausdorff: f64,
    /// `|B_1 triangle E_epsilon|`, by quadrature of the radial profile.
    pub sym_diff: f64,
    /// `d~^2(B_1, E_epsilon)`: symmetric-difference mass weighted by distance
    /// to the spiked boundary.
    pub dtilde_sq: f64,
    /// `d_H^3 / d~^2`: diverges as the spike thins, so no constant closes the
    /// comparison without the class constraint.
    pub ratio: f64,
}

/// Evaluate the spiked-ball family at one aperture `epsilon` in `(0, 1)`.
pub fn cone_family(epsilon: f64) -> ConeMetrics {
    assert!(0.0 < epsilon && epsilon < 1.0, "aperture must be in (0, 1)");
    let d = 2.0;
    let theta_star = spike_active_angle(d, epsilon);
    let sym_diff = 2.0 * simpson(0.0, theta_star, 4096, |t| {
        let rho = spike_radius(d, epsilon, t);
        0.5 * (rho * rho - 1.0)
    });
    // The weight is the distance to the spiked set's boundary, which has no
    // radial closed form; resolve the thin spike on a fine direction grid.
    let m = 1 << 18;
    let dtilde_sq = pseudo_distance_sq(&ball(m, 1.0), &cone_union_set(m, d, epsilon));
    let hausdorff = d - 1.0;
    ConeMetrics {
        epsilon,
        hausdorff,
        sym_diff,
        dtilde_sq,
        ratio: hausdorff.powi(3) / dtilde_sq,
    }
}

/// Measurements of one translated cone against the unit ball.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TranslateMetrics {
    pub k: usize,
    /// `d_H(F_k, B_1) = k`: the tip sits at `(k+1) e_1`.
    pub hausdorff: f64,
    /// `d~^2(F_k, B_1)`, weighted by distance to the unit circle.
    pub dtilde_sq: f64,
    /// `2 pi k^2`, which `dtilde_sq` never exceeds.
    pub bound: f64,
}

/// The unbounded-translate family `F_k`: the hull of `B_1(0)` and the point
/// `(k+1) e_1`. Hausdorff distance to the unit ball grows linearly while the
/// pseudo-distance stays within `2 pi k^2`, so the cubed comparison fails in
/// the other direction too.
pub fn translate_family(k: usize) -> TranslateMetrics {
    assert!(k >= 1);
    let d = (k + 1) as f64;
    let phi_t = FRAC_PI_2 - (1.0 / d).asin();
    // F_k contains B_1, and the weight to the unit circle at radius r is
    // r - 1, so each direction contributes a closed-form radial integral.
    let dtilde_sq = 2.0 * simpson(0.0, phi_t, 8192, |t| {
        let rho = spike_radius(d, 1.0, t);
        (rho.powi(3) - 1.0) / 3.0 - 0.5 * (rho * rho - 1.0)
    });
    TranslateMetrics {
        k,
        hausdorff: k as f64,
        dtilde_sq,
        bound: TAU * (k as f64).powi(2),
    }
}
