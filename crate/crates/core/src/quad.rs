//! Composite Gauss–Legendre quadrature for integrals
//! `∫₀^R ρ^{2σ} f(ρ) dρ` with an integrable singular weight at 0.
//!
//! Panels are laid out in ρ:
//!
//! - geometric panels `ℓ·2^{-j}`, `j = 0..GRADED_LEVELS`, with `ℓ = min(1, 1/√s)`;
//! - uniform panels of width `ℓ/4` from `ℓ` to `R`;
//! - every integer in `(0, R]` is also a breakpoint;
//! - `R = max(10, 9/√s)`.
//!
//! Each panel uses the `GL_POINTS`-point Gauss–Legendre rule in ρ, except the
//! innermost one, where the substitution `t = ρ^{2σ+1}` maps `ρ^{2σ} dρ` to
//! `dt/(2σ+1)` and the rule is applied in t.

use crate::error::{Error, Result};
use std::sync::OnceLock;

pub const GL_POINTS: usize = 20;
pub const GRADED_LEVELS: usize = 48;

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_POINTS))
}

/// Truncation radius used for a given s.
pub fn radius(s: f64) -> f64 {
    10f64.max(9.0 / s.sqrt())
}

/// Panel breakpoints in ρ, starting at 0 and ending at R.
pub fn breakpoints(s: f64) -> Vec<f64> {
    let r = radius(s);
    let ell = 1f64.min(1.0 / s.sqrt());
    let mut pts = vec![0.0, r];
    for j in 0..=GRADED_LEVELS {
        pts.push(ell * 0.5f64.powi(j as i32));
    }
    let w = ell / 4.0;
    let mut x = ell + w;
    while x < r {
        pts.push(x);
        x += w;
    }
    let mut i = 1.0;
    while i < r {
        pts.push(i);
        i += 1.0;
    }
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * b.abs().max(1e-300));
    pts
}

/// `∫₀^R ρ^{2σ} f(ρ) dρ` with R from [`radius`].
pub fn weighted_integral<F: Fn(f64) -> f64>(sigma: f64, s: f64, f: F) -> Result<f64> {
    if !(sigma > -0.5) {
        return Err(Error::QuadratureFailure(format!(
            "weight exponent 2σ = {} is not integrable at 0",
            2.0 * sigma
        )));
    }
    let q = 2.0 * sigma + 1.0;
    let (xs, ws) = gl20();
    let pts = breakpoints(s);
    let mut sum = 0.0;
    let mut comp = 0.0;
    for pair in pts.windows(2) {
        let term = if pair[0] == 0.0 {
            // t = ρ^q absorbs the weight on the innermost panel
            let (ta, tb) = (0.0, pair[1].powf(q));
            let (half, mid) = (0.5 * (tb - ta), 0.5 * (tb + ta));
            let mut panel = 0.0;
            for (x, w) in xs.iter().zip(ws) {
                let rho = (mid + half * x).powf(1.0 / q).max(1e-150);
                panel += w * f(rho);
            }
            panel * half / q
        } else {
            let (half, mid) = (0.5 * (pair[1] - pair[0]), 0.5 * (pair[1] + pair[0]));
            let mut panel = 0.0;
            for (x, w) in xs.iter().zip(ws) {
                let rho = mid + half * x;
                panel += w * rho.powf(2.0 * sigma) * f(rho);
            }
            panel * half
        };
        // Neumaier summation
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    let total = sum + comp;
    if !total.is_finite() {
        return Err(Error::QuadratureFailure(
            "integrand is not integrable against the weight".into(),
        ));
    }
    Ok(total)
}
