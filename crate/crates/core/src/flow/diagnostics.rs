use crate::starset::hausdorff_distance;

use super::driver::FlowTrace;

/// Stationary area of the penalized flow: the larger root of
/// `(1 - V)/delta = sqrt(pi/V)` in `(0, 1)` (forcing balances curvature on a
/// ball; the smaller root is the unstable one).
pub fn equilibrium_volume(delta: f64) -> f64 {
    let f = |v: f64| (1.0 - v) / delta - (std::f64::consts::PI / v).sqrt();
    // Walk down from 1 to bracket the stable root: f(1) < 0 and f > 0 once
    // the forcing overtakes the curvature.
    let mut lo = 1.0;
    for k in 1..10_000 {
        let v = 1.0 - k as f64 * 1e-4;
        if v <= 0.0 {
            break;
        }
        if f(v) > 0.0 {
            lo = v;
            break;
        }
    }
    assert!(lo < 1.0, "no equilibrium bracket for delta={delta}");
    let mut hi = 1.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `||lambda||^2_{L^2}` over `[t0, t0 + T]`, with the piecewise-constant
/// multiplier convention: `h * sum lambda_k^2` over steps in the window.
pub fn lambda_l2(trace: &FlowTrace, t0: f64, t: f64) -> f64 {
    let h = trace.params.h;
    trace
        .steps
        .iter()
        .filter(|s| s.t >= t0 && s.t < t0 + t)
        .map(|s| h * s.lambda * s.lambda)
        .sum()
}

/// Per-step dissipation margins `h (J_{k-1} - J_k) - d~^2(E_k, E_{k-1})`;
/// the one-step minimality inequality makes every entry nonnegative up to
/// the inner tolerance.
pub fn dissipation_report(trace: &FlowTrace) -> Vec<f64> {
    trace
        .steps
        .windows(2)
        .map(|w| {
            trace.params.h * (w[0].energy - w[1].energy) - w[1].dtilde_step * w[1].dtilde_step
        })
        .collect()
}

/// Result of the time-regularity fit.
#[derive(Debug, Clone, Copy)]
pub struct HolderFit {
    /// Log-log slope of `max_k d_H(E_k, E_{k+lag})` against `lag * h`.
    pub exponent: f64,
    /// Smallest constant with `d_H <= K (lag h)^{1/3} Per(E_0)^{1/3}` over
    /// the sampled lags.
    pub constant: f64,
}

/// Fit the 1/3-Holder-in-time bound on dyadic lags. `stride` subsamples the
/// base index k to keep the Hausdorff evaluations affordable.
pub fn holder_fit(trace: &FlowTrace) -> HolderFit {
    let k_max = trace.sets.len() - 1;
    assert!(k_max >= 64, "need at least 64 steps for a meaningful fit");
    let per0 = trace.steps[0].perimeter;
    let h = trace.params.h;
    let stride = (k_max / 128).max(1);
    let mut pts = Vec::new();
    let mut constant = 0.0f64;
    let mut lag = 1usize;
    while lag <= k_max / 2 {
        let mut worst = 0.0f64;
        let mut k = 0;
        while k + lag <= k_max {
            worst = worst.max(hausdorff_distance(&trace.sets[k], &trace.sets[k + lag]));
            k += stride;
        }
        if worst > 0.0 {
            let dt = lag as f64 * h;
            pts.push((dt.ln(), worst.ln()));
            constant = constant.max(worst / (dt.powf(1.0 / 3.0) * per0.powf(1.0 / 3.0)));
        }
        lag *= 2;
    }
    let exponent = if pts.len() >= 2 {
        // Least-squares slope.
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    } else {
        // Stationary trace: all displacements zero.
        f64::INFINITY
    };
    HolderFit { exponent, constant }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilibrium_root() {
        // First-order expansion: V ~= 1 - delta sqrt(pi).
        let v = equilibrium_volume(0.05);
        assert!((v - (1.0 - 0.05 * std::f64::consts::PI.sqrt())).abs() < 0.01);
        // Exact root property.
        assert!(((1.0 - v) / 0.05 - (std::f64::consts::PI / v).sqrt()).abs() < 1e-10);
        // delta -> 0 limit.
        assert!(equilibrium_volume(1e-4) > 0.999);
        // Monotone in delta.
        assert!(equilibrium_volume(0.1) < equilibrium_volume(0.05));
    }
}
