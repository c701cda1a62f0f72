use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::DirectionGrid;
use super::set::RadialSet;

/// Ball of radius `r` centered at the origin.
pub fn ball(m: usize, r: f64) -> RadialSet {
    let grid = DirectionGrid::new(m);
    RadialSet::new(grid, vec![r; m], 0.5 * r, r).expect("ball radii are valid")
}

/// Flower profile `r(theta) = a + b cos(k theta)`; requires `a > b >= 0`.
pub fn flower(m: usize, a: f64, b: f64, k: u32) -> RadialSet {
    assert!(a > b && b >= 0.0, "flower needs a > b >= 0");
    let grid = DirectionGrid::new(m);
    let radii = (0..m)
        .map(|i| a + b * (k as f64 * grid.theta(i)).cos())
        .collect();
    RadialSet::new(grid, radii, 0.5 * (a - b), a + b).expect("flower radii are valid")
}

/// "Ice-cream cone": the union of the ball `B_r(0)` with the cone of apex
/// `d e_1` over that ball, i.e. the interior-cone set of a boundary point at
/// distance `d` with star-ball radius `r`. In polar form the boundary is the
/// pair of tangent segments for `|theta| <= pi/2 - arcsin(r/d)` and the ball
/// arc beyond, so the radius function has the closed form used below. The
/// set is star-shaped with respect to `B_r` with exactly tight support
/// (`x . n = r` along the tangent segments).
pub fn ice_cone(m: usize, d: f64, r: f64) -> RadialSet {
    assert!(0.0 < r && r < d, "ice_cone needs 0 < r < d");
    let grid = DirectionGrid::new(m);
    let phi_t = std::f64::consts::FRAC_PI_2 - (r / d).asin();
    let radii = (0..m)
        .map(|i| {
            let mut t = grid.theta(i);
            if t > std::f64::consts::PI {
                t -= TAU;
            }
            if t.abs() <= phi_t {
                // Ray meets the tangent line {x . n = r}, n at angle phi_t.
                r / (t.abs() - phi_t).cos()
            } else {
                r
            }
        })
        .collect();
    RadialSet::new(grid, radii, 0.5 * r, d).expect("ice_cone radii are valid")
}

/// Random smooth star-shaped set with radii in `[r_lo, r_hi]`, reproducible
/// from `seed`. The profile is a short Fourier series with decaying
/// amplitudes, rescaled into the band, so low seeds already give visibly
/// different shapes while derivatives stay moderate.
pub fn random_star_set(m: usize, r_lo: f64, r_hi: f64, seed: u64) -> RadialSet {
    assert!(0.0 < r_lo && r_lo < r_hi, "need 0 < r_lo < r_hi");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes = 6;
    let coeffs: Vec<(f64, f64)> = (1..=modes)
        .map(|k| {
            let amp = 1.0 / (k as f64);
            (
                rng.random_range(-amp..amp),
                rng.random_range(0.0..TAU),
            )
        })
        .collect();
    let grid = DirectionGrid::new(m);
    let raw: Vec<f64> = (0..m)
        .map(|i| {
            let t = grid.theta(i);
            coeffs
                .iter()
                .enumerate()
                .map(|(j, &(a, phase))| a * ((j as f64 + 1.0) * t + phase).cos())
                .sum()
        })
        .collect();
    let (lo, hi) = raw
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
            (l.min(v), h.max(v))
        });
    // Map the oscillation into the middle 80% of the band so the result stays
    // strictly inside [r_lo, r_hi].
    let span = (hi - lo).max(1e-12);
    let inner_lo = r_lo + 0.1 * (r_hi - r_lo);
    let inner_hi = r_hi - 0.1 * (r_hi - r_lo);
    let radii = raw
        .into_iter()
        .map(|v| inner_lo + (v - lo) / span * (inner_hi - inner_lo))
        .collect();
    RadialSet::new(grid, radii, 0.5 * r_lo, r_hi).expect("random radii are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_sets_are_deterministic_and_in_band() {
        let a = random_star_set(128, 0.3, 2.0, 42);
        let b = random_star_set(128, 0.3, 2.0, 42);
        let c = random_star_set(128, 0.3, 2.0, 43);
        assert_eq!(a.radii(), b.radii());
        assert_ne!(a.radii(), c.radii());
        for &r in a.radii() {
            assert!(r > 0.3 && r < 2.0);
        }
    }

    #[test]
    fn ball_and_flower_profiles() {
        let b = ball(32, 1.5);
        assert!(b.radii().iter().all(|&r| r == 1.5));
        let f = flower(32, 0.8, 0.1, 5);
        assert!((f.radii()[0] - 0.9).abs() < 1e-15);
        assert!((f.max_radius() - 0.9).abs() < 1e-12);
        assert!(f.min_radius() >= 0.7 - 1e-12);
    }
}
