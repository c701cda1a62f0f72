use std::sync::Arc;

use crate::error::StarflowError;
use crate::Result;

use super::grid::DirectionGrid;

/// Star-shaped set given by positive radii over a direction grid.
///
/// The set is `{ rho*omega : 0 <= rho < r(omega) }` with `r` the piecewise
/// boundary through the samples `r_i * omega_i`. Values are immutable after
/// construction; every operation returns a new set.
#[derive(Debug, Clone)]
pub struct RadialSet {
    grid: Arc<DirectionGrid>,
    radii: Vec<f64>,
    /// Declared class bounds: the set claims membership in `S_{r_lo, r_hi}`.
    r_lo: f64,
    r_hi: f64,
}

impl RadialSet {
    pub fn new(grid: Arc<DirectionGrid>, radii: Vec<f64>, r_lo: f64, r_hi: f64) -> Result<Self> {
        if radii.len() != grid.len() {
            return Err(StarflowError::Config(format!(
                "radii length {} does not match grid size {}",
                radii.len(),
                grid.len()
            )));
        }
        if !(0.0 < r_lo && r_lo < r_hi) {
            return Err(StarflowError::Config(format!(
                "declared bounds must satisfy 0 < r_lo < r_hi, got ({r_lo}, {r_hi})"
            )));
        }
        for (i, &r) in radii.iter().enumerate() {
            if !(r > 0.0 && r <= r_hi && r.is_finite()) {
                return Err(StarflowError::Config(format!(
                    "radius {r} at direction {i} outside (0, {r_hi}]"
                )));
            }
        }
        Ok(Self { grid, radii, r_lo, r_hi })
    }

    #[inline]
    pub fn grid(&self) -> &Arc<DirectionGrid> {
        &self.grid
    }

    #[inline]
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    #[inline]
    pub fn r_lo(&self) -> f64 {
        self.r_lo
    }

    #[inline]
    pub fn r_hi(&self) -> f64 {
        self.r_hi
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min_radius(&self) -> f64 {
        self.radii.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_radius(&self) -> f64 {
        self.radii.iter().cloned().fold(0.0, f64::max)
    }

    /// Replace the radii, keeping grid and declared bounds.
    pub fn with_radii(&self, radii: Vec<f64>) -> Result<Self> {
        Self::new(self.grid.clone(), radii, self.r_lo, self.r_hi)
    }

    /// Boundary sample point `r_i * omega_i`.
    #[inline]
    pub fn point(&self, i: usize) -> [f64; 2] {
        let d = self.grid.dir(i);
        [self.radii[i] * d[0], self.radii[i] * d[1]]
    }

    /// Centered-difference derivative of the radius function at `i`
    /// (five-point stencil, fourth-order accurate).
    #[inline]
    pub fn radius_deriv(&self, i: usize) -> f64 {
        let m = self.len();
        let p1 = self.radii[(i + 1) % m];
        let m1 = self.radii[(i + m - 1) % m];
        let p2 = self.radii[(i + 2) % m];
        let m2 = self.radii[(i + m - 2) % m];
        (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * self.grid.dtheta())
    }

    /// Centered-difference second derivative of the radius function at `i`
    /// (five-point stencil, fourth-order accurate).
    #[inline]
    pub fn radius_deriv2(&self, i: usize) -> f64 {
        let m = self.len();
        let p1 = self.radii[(i + 1) % m];
        let m1 = self.radii[(i + m - 1) % m];
        let p2 = self.radii[(i + 2) % m];
        let m2 = self.radii[(i + m - 2) % m];
        let dt = self.grid.dtheta();
        (-p2 + 16.0 * p1 - 30.0 * self.radii[i] + 16.0 * m1 - m2) / (12.0 * dt * dt)
    }

    /// Polar area `(1/2) sum r_i^2 dtheta`.
    pub fn volume(&self) -> f64 {
        let dt = self.grid.dtheta();
        0.5 * dt * self.radii.iter().map(|r| r * r).sum::<f64>()
    }

    /// Arc length `sum sqrt(r^2 + r'^2) dtheta` with centered differences.
    pub fn perimeter(&self) -> f64 {
        let dt = self.grid.dtheta();
        (0..self.len())
            .map(|i| {
                let r = self.radii[i];
                let rp = self.radius_deriv(i);
                (r * r + rp * rp).sqrt() * dt
            })
            .sum()
    }

    /// Curvature `(r^2 + 2r'^2 - r r'') / (r^2 + r'^2)^{3/2}` at direction `i`.
    ///
    /// Positive where the set is convex; `1/r` on a circle of radius `r`.
    pub fn curvature_at(&self, i: usize) -> f64 {
        let r = self.radii[i];
        let rp = self.radius_deriv(i);
        let rpp = self.radius_deriv2(i);
        (r * r + 2.0 * rp * rp - r * rpp) / (r * r + rp * rp).powf(1.5)
    }

    /// `integral H dsigma` over the boundary; `2*pi` for any simple closed
    /// curve up to discretization error.
    pub fn total_mean_curvature(&self) -> f64 {
        let dt = self.grid.dtheta();
        (0..self.len())
            .map(|i| {
                let r = self.radii[i];
                let rp = self.radius_deriv(i);
                self.curvature_at(i) * (r * r + rp * rp).sqrt() * dt
            })
            .sum()
    }

    /// Mean of curvature against arc length, `(1/Per) integral H dsigma`.
    pub fn mean_curvature(&self) -> f64 {
        self.total_mean_curvature() / self.perimeter()
    }

    /// Support value `x . n` at boundary sample `i`; equals
    /// `r^2 / sqrt(r^2 + r'^2)` in polar form. The set is star-shaped with
    /// respect to `B_r` iff this stays `>= r` at every boundary point.
    pub fn radial_support(&self, i: usize) -> f64 {
        let r = self.radii[i];
        let rp = self.radius_deriv(i);
        r * r / (r * r + rp * rp).sqrt()
    }

    /// Area centroid, from the polar moment integrals.
    pub fn centroid(&self) -> [f64; 2] {
        let dt = self.grid.dtheta();
        let v = self.volume();
        let mut cx = 0.0;
        let mut cy = 0.0;
        for i in 0..self.len() {
            let r3 = self.radii[i].powi(3) / 3.0;
            let d = self.grid.dir(i);
            cx += r3 * d[0] * dt;
            cy += r3 * d[1] * dt;
        }
        [cx / v, cy / v]
    }

    /// Boundary radius along the ray at angle `theta`, taken on the chord
    /// polyline through the boundary samples. This is the radius used by all
    /// inside tests, so point membership and polyline distances agree.
    pub fn radius_at_angle(&self, theta: f64) -> f64 {
        let mut t = theta % std::f64::consts::TAU;
        if t < 0.0 {
            t += std::f64::consts::TAU;
        }
        let m = self.len();
        let i = ((t / self.grid.dtheta()) as usize).min(m - 1);
        let a = self.point(i);
        let b = self.point((i + 1) % m);
        let omega = [t.cos(), t.sin()];
        let e = [b[0] - a[0], b[1] - a[1]];
        let denom = omega[0] * e[1] - omega[1] * e[0];
        if denom.abs() < 1e-300 {
            return self.radii[i];
        }
        (a[0] * b[1] - a[1] * b[0]) / denom
    }

    /// Membership test against the chord polyline boundary.
    pub fn contains(&self, x: [f64; 2]) -> bool {
        let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
        if rho == 0.0 {
            return true;
        }
        rho < self.radius_at_angle(x[1].atan2(x[0]))
    }

    /// Signed radial margin of `x`: positive inside, negative outside,
    /// measured along the ray through `x`.
    pub fn radial_margin(&self, x: [f64; 2]) -> f64 {
        let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
        self.radius_at_angle(x[1].atan2(x[0])) - rho
    }

    /// Dilation about the origin: radii multiplied by `a > 0`.
    pub fn scale(&self, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(StarflowError::Config(format!("scale factor {a} must be positive")));
        }
        Self::new(
            self.grid.clone(),
            self.radii.iter().map(|r| r * a).collect(),
            self.r_lo * a.min(1.0),
            self.r_hi * a.max(1.0),
        )
    }

    /// Rescale so the polar area equals `target` exactly.
    pub fn rescaled_to_volume(&self, target: f64) -> Result<Self> {
        self.scale((target / self.volume()).sqrt())
    }

    /// The inner perturbation `G_s`: each boundary radius `rho` is replaced
    /// by the root `y` of `(1 + s(y^2 - r0^2)) y = rho` in `(0, rho]`.
    /// Fixes the circle `|x| = r0` and shrinks the boundary outside it.
    pub fn apply_shrink_map(&self, s: f64, r0: f64) -> Result<Self> {
        let s_max = 1.0 / (2.0 * (self.r_hi * self.r_hi - r0 * r0));
        if !(0.0..s_max).contains(&s) {
            return Err(StarflowError::ShrinkRange { s, s_max });
        }
        let radii = self
            .radii
            .iter()
            .map(|&rho| shrink_radius(rho, s, r0))
            .collect();
        Self::new(self.grid.clone(), radii, self.r_lo, self.r_hi)
    }

    /// Boundary polyline with outward normals and arc weights.
    pub fn boundary(&self) -> BoundaryPolyline {
        let m = self.len();
        let dt = self.grid.dtheta();
        let mut points = Vec::with_capacity(m);
        let mut normals = Vec::with_capacity(m);
        let mut arc_weights = Vec::with_capacity(m);
        for i in 0..m {
            let r = self.radii[i];
            let rp = self.radius_deriv(i);
            let d = self.grid.dir(i);
            let tau = [-d[1], d[0]];
            let speed = (r * r + rp * rp).sqrt();
            points.push([r * d[0], r * d[1]]);
            normals.push([
                (r * d[0] - rp * tau[0]) / speed,
                (r * d[1] - rp * tau[1]) / speed,
            ]);
            arc_weights.push(speed * dt);
        }
        BoundaryPolyline {
            points,
            normals,
            arc_weights,
            min_radius: self.min_radius(),
            max_radius: self.max_radius(),
        }
    }
}

/// Solve `(1 + s(y^2 - r0^2)) y = rho` for `y` in `(0, rho]` by bisection.
/// The left side is strictly increasing in `y` on the admissible `s` range.
fn shrink_radius(rho: f64, s: f64, r0: f64) -> f64 {
    if s == 0.0 {
        return rho;
    }
    let f = |y: f64| (1.0 + s * (y * y - r0 * r0)) * y - rho;
    let mut lo = 0.0;
    let mut hi = rho.max(r0);
    if f(hi) < 0.0 {
        hi = rho / (1.0 - s * r0 * r0);
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sampled boundary of a [`RadialSet`]: points `x_i`, outward unit normals,
/// and arc-length quadrature weights.
#[derive(Debug, Clone)]
pub struct BoundaryPolyline {
    pub points: Vec<[f64; 2]>,
    pub normals: Vec<[f64; 2]>,
    pub arc_weights: Vec<f64>,
    pub min_radius: f64,
    pub max_radius: f64,
}

impl BoundaryPolyline {
    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total arc length.
    pub fn length(&self) -> f64 {
        self.arc_weights.iter().sum()
    }
}

/// Sampled time forcing `lambda(t)` on a uniform grid, with its running
/// integral `Lambda(t)` accumulated by the trapezoid rule.
#[derive(Debug, Clone)]
pub struct TimeForcing {
    pub dt: f64,
    pub lambda: Vec<f64>,
    pub integral: Vec<f64>,
}

impl TimeForcing {
    pub fn from_samples(dt: f64, lambda: Vec<f64>) -> Self {
        let mut integral = Vec::with_capacity(lambda.len());
        let mut acc = 0.0;
        integral.push(0.0);
        for w in lambda.windows(2) {
            acc += 0.5 * dt * (w[0] + w[1]);
            integral.push(acc);
        }
        Self { dt, lambda, integral }
    }

    pub fn constant(value: f64, dt: f64, steps: usize) -> Self {
        Self::from_samples(dt, vec![value; steps + 1])
    }

    /// `Lambda(t)`, linearly interpolated between grid points.
    pub fn integral_at(&self, t: f64) -> f64 {
        let k = (t / self.dt).floor();
        let i = (k as usize).min(self.integral.len() - 1);
        if i + 1 >= self.integral.len() {
            return self.integral[i];
        }
        let frac = t / self.dt - k;
        self.integral[i] + frac * (self.integral[i + 1] - self.integral[i])
    }

    /// `lambda(t)` with piecewise-constant left interpolation.
    pub fn value_at(&self, t: f64) -> f64 {
        let i = ((t / self.dt) as usize).min(self.lambda.len() - 1);
        self.lambda[i]
    }
}
