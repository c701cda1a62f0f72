use rayon::prelude::*;

use super::grid::DirectionGrid;
use super::set::{BoundaryPolyline, RadialSet};

/// Distance from `x` to the closest segment of the boundary polyline.
/// Exact for the polyline: a full scan over all segments.
pub fn distance_to_boundary(x: [f64; 2], s: &RadialSet) -> f64 {
    boundary_distance(x, &s.boundary())
}

/// Same as [`distance_to_boundary`] but against a prebuilt polyline.
pub fn boundary_distance(x: [f64; 2], b: &BoundaryPolyline) -> f64 {
    let m = b.len();
    let mut best = f64::INFINITY;
    for i in 0..m {
        let d = point_segment_distance(x, b.points[i], b.points[(i + 1) % m]);
        if d < best {
            best = d;
        }
    }
    best
}

/// Windowed boundary distance for query points whose nearest segment is
/// expected near sector `hint`. Scans an expanding angular window around the
/// hint and stops once every excluded segment is provably farther than the
/// current best, so the result always equals the full scan.
pub fn boundary_distance_hinted(x: [f64; 2], b: &BoundaryPolyline, hint: usize) -> f64 {
    let m = b.len();
    let dtheta = std::f64::consts::TAU / m as f64;
    let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
    // Angular offset between the hint and the sector actually containing x:
    // the exclusion bound below must be measured from x's own angle.
    let sector = {
        let mut t = x[1].atan2(x[0]);
        if t < 0.0 {
            t += std::f64::consts::TAU;
        }
        ((t / dtheta) as usize).min(m - 1)
    };
    let offset = {
        let raw = (sector + m - hint % m) % m;
        raw.min(m - raw)
    };
    let mut half = 8usize;
    loop {
        if 2 * half + 1 >= m {
            return boundary_distance(x, b);
        }
        let mut best = f64::INFINITY;
        for k in 0..=2 * half {
            let i = (hint + m + k - half) % m;
            let d = point_segment_distance(x, b.points[i], b.points[(i + 1) % m]);
            if d < best {
                best = d;
            }
        }
        // Every excluded segment lies at angular separation >= phi from x,
        // with radii in [min_radius, max_radius]; bound its distance below.
        if half > offset + 1 {
            let phi = (((half - offset) as f64 - 1.0) * dtheta).min(std::f64::consts::PI);
            let lower = sector_distance_lower_bound(rho, phi, b.min_radius, b.max_radius);
            if best <= lower {
                return best;
            }
        }
        half *= 2;
    }
}

/// Lower bound for the distance from a point at radius `rho` to any point at
/// angular separation at least `phi` (< pi/2) with radius in `[rmin, rmax]`.
fn sector_distance_lower_bound(rho: f64, phi: f64, rmin: f64, rmax: f64) -> f64 {
    if phi <= 0.0 {
        return 0.0;
    }
    let c = phi.cos();
    let dist = |r: f64| (rho * rho + r * r - 2.0 * rho * r * c).max(0.0).sqrt();
    let r_star = rho * c;
    if r_star >= rmin && r_star <= rmax {
        rho * phi.sin()
    } else {
        dist(rmin).min(dist(rmax))
    }
}

/// Signed distance to the boundary: positive outside the set, negative inside.
pub fn signed_distance(x: [f64; 2], s: &RadialSet) -> f64 {
    let d = distance_to_boundary(x, s);
    if s.contains(x) {
        -d
    } else {
        d
    }
}

/// Hausdorff distance between the two sets,
/// `max { sup_{x in A} d(x,B), sup_{x in B} d(x,A) }`.
///
/// For star-shaped sets with a common interior point the supremum is attained
/// on the boundary, so only boundary samples are tested; points inside the
/// other set contribute zero. Sampling error is at most the arc spacing.
pub fn hausdorff_distance(a: &RadialSet, b: &RadialSet) -> f64 {
    let ba = a.boundary();
    let bb = b.boundary();
    one_sided_set(a, &bb, b).max(one_sided_set(b, &ba, a))
}

fn one_sided_set(from: &RadialSet, to_boundary: &BoundaryPolyline, to: &RadialSet) -> f64 {
    (0..from.len())
        .into_par_iter()
        .map(|i| {
            let x = from.point(i);
            if to.contains(x) {
                0.0
            } else {
                boundary_distance_hinted(x, to_boundary, i * to_boundary.len() / from.len())
            }
        })
        .reduce(|| 0.0, f64::max)
}

/// Hausdorff distance between the boundaries (no inside test).
pub fn hausdorff_boundary_distance(a: &RadialSet, b: &RadialSet) -> f64 {
    let ba = a.boundary();
    let bb = b.boundary();
    let ab = (0..a.len())
        .into_par_iter()
        .map(|i| boundary_distance_hinted(a.point(i), &bb, i * bb.len() / a.len()))
        .reduce(|| 0.0, f64::max);
    let ba_d = (0..b.len())
        .into_par_iter()
        .map(|i| boundary_distance_hinted(b.point(i), &ba, i * ba.len() / b.len()))
        .reduce(|| 0.0, f64::max);
    ab.max(ba_d)
}

/// Gauss-Legendre nodes and weights on [-1, 1], 8 points.
const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_29),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_29),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
];

/// Squared pseudo-distance `integral over the symmetric difference F delta E
/// of d(x, boundary of E) dx`. Note the asymmetry: distances are measured to
/// the boundary of the *second* argument.
pub fn pseudo_distance_sq(f: &RadialSet, e: &RadialSet) -> f64 {
    assert_eq!(f.len(), e.len(), "pseudo_distance needs a common grid");
    let be = e.boundary();
    pseudo_distance_sq_radii(f.grid(), f.radii(), e.radii(), &be)
}

/// Radii-level form of [`pseudo_distance_sq`] against a prebuilt boundary;
/// shared with the inner solver so its objective and the recorded
/// step distances use the same quadrature.
pub fn pseudo_distance_sq_radii(
    grid: &DirectionGrid,
    radii: &[f64],
    prev_radii: &[f64],
    prev_boundary: &BoundaryPolyline,
) -> f64 {
    let dtheta = grid.dtheta();
    (0..radii.len())
        .into_par_iter()
        .map(|i| {
            pseudo_distance_sq_direction(grid, i, radii[i], prev_radii[i], prev_boundary) * dtheta
        })
        .sum()
}

/// Per-direction radial integral `int d(rho w_i, prev) rho drho` between the
/// two radii (8-node Gauss-Legendre; the `dtheta` factor is the caller's).
pub(crate) fn pseudo_distance_sq_direction(
    grid: &DirectionGrid,
    i: usize,
    r: f64,
    prev_r: f64,
    prev_boundary: &BoundaryPolyline,
) -> f64 {
    let (lo, hi) = (r.min(prev_r), r.max(prev_r));
    if hi - lo < 1e-300 {
        return 0.0;
    }
    let mid = 0.5 * (lo + hi);
    let hw = 0.5 * (hi - lo);
    let d = grid.dir(i);
    let mut acc = 0.0;
    for (node, weight) in GL8 {
        let rho = mid + hw * node;
        let x = [rho * d[0], rho * d[1]];
        acc += weight * boundary_distance_hinted(x, prev_boundary, i) * rho;
    }
    acc * hw
}

/// `(integral over F delta E of d(x, boundary of E) dx)^{1/2}`.
pub fn pseudo_distance(f: &RadialSet, e: &RadialSet) -> f64 {
    pseudo_distance_sq(f, e).sqrt()
}

/// Distance from `x` to the segment `[a, b]`.
#[inline]
fn point_segment_distance(x: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let e = [b[0] - a[0], b[1] - a[1]];
    let w = [x[0] - a[0], x[1] - a[1]];
    let ee = e[0] * e[0] + e[1] * e[1];
    let t = if ee > 0.0 {
        ((w[0] * e[0] + w[1] * e[1]) / ee).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let dx = w[0] - t * e[0];
    let dy = w[1] - t * e[1];
    (dx * dx + dy * dy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::starset::shapes::{ball, flower, random_star_set};
    use std::f64::consts::PI;

    #[test]
    fn disk_distances() {
        let b = ball(1024, 1.0);
        assert!((distance_to_boundary([0.0, 0.0], &b) - 1.0).abs() < 1e-5);
        assert!((distance_to_boundary([2.0, 0.0], &b) - 1.0).abs() < 1e-5);
        let d = distance_to_boundary([0.5, 0.5], &b);
        assert!((d - (1.0 - 0.5f64.sqrt())).abs() < 1e-5);
    }

    #[test]
    fn signed_distance_sign_convention() {
        let b = ball(1024, 1.0);
        assert!((signed_distance([2.0, 0.0], &b) - 1.0).abs() < 1e-5);
        assert!((signed_distance([0.0, 0.0], &b) + 1.0).abs() < 1e-5);
        // A point on the boundary polyline itself.
        let x = b.point(3);
        assert!(signed_distance(x, &b).abs() < 1e-12);
    }

    #[test]
    fn hinted_distance_matches_full_scan() {
        let f = flower(512, 0.8, 0.1, 5);
        let bf = f.boundary();
        // Query points near and far from the boundary, with good and with
        // deliberately wrong hints.
        let queries = [
            ([0.85, 0.02], 0usize),
            ([0.85, 0.02], 256),
            ([0.1, -0.1], 400),
            ([1.5, 1.5], 10),
            ([-0.6, 0.3], 0),
        ];
        for (x, hint) in queries {
            let full = boundary_distance(x, &bf);
            let hinted = boundary_distance_hinted(x, &bf, hint);
            assert!(
                (full - hinted).abs() < 1e-13,
                "hint mismatch at {x:?}: {full} vs {hinted}"
            );
        }
    }

    #[test]
    fn hausdorff_examples() {
        let b1 = ball(512, 1.0);
        let b2 = ball(512, 2.0);
        assert!((hausdorff_distance(&b1, &b2) - 1.0).abs() < 1e-4);
        assert!(hausdorff_distance(&b1, &b1) < 1e-12);
    }

    #[test]
    fn hausdorff_matches_brute_force_oracle() {
        // Dense-sampling brute force at 10x resolution, frozen shapes.
        let m = 256;
        let a = ball(m, 1.0);
        let f = flower(m, 0.8, 0.1, 5);
        let fast = hausdorff_distance(&a, &f);
        let dense_a = ball(10 * m, 1.0);
        let dense_f = flower(10 * m, 0.8, 0.1, 5);
        let brute = {
            let bf = dense_f.boundary();
            let ba = dense_a.boundary();
            let mut worst: f64 = 0.0;
            for i in 0..dense_a.len() {
                let x = dense_a.point(i);
                if !dense_f.contains(x) {
                    worst = worst.max(boundary_distance(x, &bf));
                }
            }
            for i in 0..dense_f.len() {
                let x = dense_f.point(i);
                if !dense_a.contains(x) {
                    worst = worst.max(boundary_distance(x, &ba));
                }
            }
            worst
        };
        assert!((fast - brute).abs() < 1e-3, "fast={fast} brute={brute}");
    }

    #[test]
    fn pseudo_distance_concentric_disks() {
        // Closed forms: between B_1 and B_2 the squared value is the annulus
        // integral of the distance to the second boundary,
        //   d~(B_1,B_2)^2 = int_1^2 (2-rho) 2 pi rho drho = 4 pi / 3,
        //   d~(B_2,B_1)^2 = int_1^2 (rho-1) 2 pi rho drho = 5 pi / 3.
        let b1 = ball(2048, 1.0);
        let b2 = ball(2048, 2.0);
        let d12 = pseudo_distance_sq(&b1, &b2);
        let d21 = pseudo_distance_sq(&b2, &b1);
        assert!((d12 - 4.0 * PI / 3.0).abs() < 1e-4, "got {d12}");
        assert!((d21 - 5.0 * PI / 3.0).abs() < 1e-4, "got {d21}");
        assert!(d12 < d21, "asymmetry direction");
        assert!(pseudo_distance(&b1, &b1) == 0.0);
    }

    #[test]
    fn pseudo_distance_zero_iff_equal_radii() {
        let f = flower(128, 0.8, 0.1, 5);
        let g = random_star_set(128, 0.5, 1.2, 7);
        assert_eq!(pseudo_distance(&f, &f), 0.0);
        assert!(pseudo_distance(&f, &g) > 0.0);
    }
}
