use crate::error::StarflowError;
use crate::Result;

use super::dist::boundary_distance;
use super::set::RadialSet;

/// Outer offset `{x : d(x, S) <= a}`, re-expressed as a radial set by
/// ray-casting: along each grid direction the new radius is the largest `t`
/// with `d(t omega, S) <= a`. The offset of a star-shaped set is again
/// star-shaped about the origin (it is the Minkowski sum with a ball), so the
/// admissible `t` form an interval and bisection applies.
pub fn dilate(s: &RadialSet, a: f64) -> Result<RadialSet> {
    if a < 0.0 {
        return Err(StarflowError::Config(format!("dilation radius {a} must be >= 0")));
    }
    if a == 0.0 {
        return Ok(s.clone());
    }
    let b = s.boundary();
    let radii = (0..s.len())
        .map(|i| {
            let d = s.grid().dir(i);
            // Outside the offset once t > max radius + a; inside at t = r_i.
            let mut lo = s.radii()[i];
            let mut hi = b.max_radius + a + 1.0;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if boundary_distance([mid * d[0], mid * d[1]], &b) <= a {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            // Bisection can land a rounding step above the declared bound.
            (0.5 * (lo + hi)).min(s.r_hi() + a)
        })
        .collect();
    RadialSet::new(s.grid().clone(), radii, s.r_lo(), s.r_hi() + a)
}

/// Inner offset `{x : B_a(x) subset S}`: along each direction the new radius
/// is the first `t` (from the boundary inward) where the ball of radius `a`
/// fits, i.e. `d(t omega, boundary) >= a` with `t omega` inside.
///
/// Errors with `eroded-empty` if the origin itself is within `a` of the
/// boundary, since the result could not contain the star center.
pub fn erode(s: &RadialSet, a: f64) -> Result<RadialSet> {
    if a < 0.0 {
        return Err(StarflowError::Config(format!("erosion radius {a} must be >= 0")));
    }
    if a == 0.0 {
        return Ok(s.clone());
    }
    let b = s.boundary();
    if boundary_distance([0.0, 0.0], &b) < a {
        return Err(StarflowError::ErodedEmpty { radius: a });
    }
    let radii = (0..s.len())
        .map(|i| {
            let d = s.grid().dir(i);
            // d(t omega, boundary) - a is >= 0 at the origin and -a at t=r_i.
            let mut lo = 0.0;
            let mut hi = s.radii()[i];
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if boundary_distance([mid * d[0], mid * d[1]], &b) >= a {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect();
    RadialSet::new(s.grid().clone(), radii, s.r_lo(), s.r_hi())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::starset::shapes::{ball, random_star_set};

    #[test]
    fn disk_offsets_are_disks() {
        let b = ball(128, 1.0);
        let grown = dilate(&b, 0.5).unwrap();
        let shrunk = erode(&b, 0.5).unwrap();
        // Distances are measured against the chord polyline, so the offsets
        // carry its sagitta (~ r (1 - cos(pi/M)) ~ 3e-4 at M=128).
        for i in 0..b.len() {
            assert!((grown.radii()[i] - 1.5).abs() < 1e-3, "dilate radius off");
            assert!((shrunk.radii()[i] - 0.5).abs() < 1e-3, "erode radius off");
        }
    }

    #[test]
    fn zero_offset_is_identity() {
        let s = random_star_set(64, 0.5, 1.2, 3);
        assert_eq!(dilate(&s, 0.0).unwrap().radii(), s.radii());
        assert_eq!(erode(&s, 0.0).unwrap().radii(), s.radii());
    }

    #[test]
    fn erosion_swallowing_set_errors() {
        let b = ball(64, 0.3);
        assert!(matches!(
            erode(&b, 0.4),
            Err(StarflowError::ErodedEmpty { .. })
        ));
    }

    #[test]
    fn dilate_monotone_in_set() {
        // A inside B (radius-wise) stays inside after dilation.
        let a = random_star_set(64, 0.4, 0.8, 11);
        let b = dilate(&a, 0.1).unwrap(); // strictly larger, radius-wise
        let da = dilate(&a, 0.3).unwrap();
        let db = dilate(&b, 0.3).unwrap();
        for i in 0..a.len() {
            assert!(da.radii()[i] <= db.radii()[i] + 1e-9);
        }
    }
}
