use std::sync::Arc;

/// Uniform grid of directions on the unit circle.
///
/// Directions are `theta_i = 2*pi*i/M` for `i = 0..M`. The ambient dimension
/// is fixed to 2 for the flow; 3-d quantities in the counterexample module
/// are computed from closed forms and never go through a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionGrid {
    m: usize,
    dtheta: f64,
    dirs: Vec<[f64; 2]>,
}

impl DirectionGrid {
    pub const MIN_DIRECTIONS: usize = 16;

    /// Panics if `m < 16`; the discrete derivative stencils need a
    /// reasonable angular resolution to mean anything.
    pub fn new(m: usize) -> Arc<Self> {
        assert!(m >= Self::MIN_DIRECTIONS, "need at least 16 directions");
        let dtheta = std::f64::consts::TAU / m as f64;
        let dirs = (0..m)
            .map(|i| {
                let t = dtheta * i as f64;
                [t.cos(), t.sin()]
            })
            .collect();
        Arc::new(Self { m, dtheta, dirs })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn dtheta(&self) -> f64 {
        self.dtheta
    }

    #[inline]
    pub fn theta(&self, i: usize) -> f64 {
        self.dtheta * i as f64
    }

    #[inline]
    pub fn dir(&self, i: usize) -> [f64; 2] {
        self.dirs[i]
    }

    #[inline]
    pub fn dirs(&self) -> &[[f64; 2]] {
        &self.dirs
    }

    /// Index of the grid sector containing the angle of `x` (in `[0, M)`).
    #[inline]
    pub fn sector_of(&self, x: [f64; 2]) -> usize {
        let mut t = x[1].atan2(x[0]);
        if t < 0.0 {
            t += std::f64::consts::TAU;
        }
        ((t / self.dtheta) as usize).min(self.m - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_are_unit_and_uniform() {
        let g = DirectionGrid::new(64);
        for i in 0..g.len() {
            let d = g.dir(i);
            let norm = (d[0] * d[0] + d[1] * d[1]).sqrt();
            assert!((norm - 1.0).abs() < 1e-14);
        }
        assert!((g.dtheta() * 64.0 - std::f64::consts::TAU).abs() < 1e-14);
    }

    #[test]
    fn sector_lookup() {
        let g = DirectionGrid::new(16);
        assert_eq!(g.sector_of([1.0, 1e-9]), 0);
        assert_eq!(g.sector_of([0.0, 1.0]), 4);
        assert_eq!(g.sector_of([1.0, -1e-9]), 15);
    }

    #[test]
    #[should_panic]
    fn too_coarse_grid_rejected() {
        DirectionGrid::new(8);
    }
}
