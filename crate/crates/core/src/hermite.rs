//! Generalized Hermite polynomials and the model operator
//! `P = H − 2c₁ρ⁻¹ d/dρ + c₂ρ⁻²`, `H = −d²/dρ² + s²ρ²`, on `L²(ℝ₊, ρ^{2c₁}dρ)`.
//!
//! The polynomials are orthonormal for the weight `|x|^{2σ} e^{−sx²}` on ℝ.
//! Eigenfunctions are `χ_k = √2 ρ^a p_{2k}(ρ) e^{−sρ²/2}` with eigenvalue
//! `(4k+1+2σ)s`.

use crate::error::{Error, Result};
use crate::quad;
use statrs::function::gamma::ln_gamma;

/// Maximum recurrence depth.
pub const MAX_DEPTH: usize = 64;

/// Distance from −1/2 below which σ is rejected.
pub const SIGMA_MARGIN: f64 = 1e-9;

fn residue(c1: f64, c2: f64, a: f64) -> f64 {
    a * a + (2.0 * c1 - 1.0) * a - c2
}

fn residue_tol(c1: f64, c2: f64, a: f64) -> f64 {
    1e-12 * (1.0 + c2.abs() + a * a + ((2.0 * c1 - 1.0) * a).abs())
}

/// Parameters `(s, c₁, c₂, a, σ)` of P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PParams {
    pub s: f64,
    pub c1: f64,
    pub c2: f64,
    pub a: f64,
    pub sigma: f64,
}

impl PParams {
    pub fn new(s: f64, c1: f64, c2: f64, a: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidParams(format!("s must be positive, got {s}")));
        }
        if residue(c1, c2, a).abs() > residue_tol(c1, c2, a) {
            return Err(Error::InvalidParams(format!(
                "a = {a} is not a root of a² + (2c₁−1)a − c₂ for c₁ = {c1}, c₂ = {c2}"
            )));
        }
        let sigma = a + c1;
        if !(sigma > -0.5 + SIGMA_MARGIN) {
            return Err(Error::InvalidParams(format!("σ = {sigma} must exceed −1/2")));
        }
        Ok(PParams { s, c1, c2, a, sigma })
    }

    /// All admissible parameter sets for `(c₁, c₂)`, σ descending.
    pub fn all(s: f64, c1: f64, c2: f64) -> Result<Vec<PParams>> {
        admissible_as(c1, c2)
            .into_iter()
            .map(|(a, _)| PParams::new(s, c1, c2, a))
            .collect()
    }
}

/// Roots `a` of `a² + (2c₁−1)a − c₂ = 0` with `σ = a + c₁ > −1/2`, σ descending.
pub fn admissible_as(c1: f64, c2: f64) -> Vec<(f64, f64)> {
    let b = 2.0 * c1 - 1.0;
    let disc = b * b + 4.0 * c2;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
    let mut roots = vec![q];
    if q != 0.0 {
        roots.push(-c2 / q);
    } else {
        roots.push(-b - q);
    }
    if sq == 0.0 {
        roots.truncate(1);
    }
    let mut out: Vec<(f64, f64)> = roots
        .into_iter()
        .map(|a| (a, a + c1))
        .filter(|&(_, sigma)| sigma > -0.5 + SIGMA_MARGIN)
        .collect();
    out.sort_by(|x, y| y.1.total_cmp(&x.1));
    out.dedup_by(|x, y| (x.0 - y.0).abs() <= 1e-14 * x.0.abs().max(1.0));
    out
}

/// `(4k+1+2σ)s`.
pub fn p_eigenvalue(k: usize, params: &PParams) -> f64 {
    (4.0 * k as f64 + 1.0 + 2.0 * params.sigma) * params.s
}

/// Orthonormal polynomials for the weight `|x|^{2σ} e^{−sx²}` on ℝ.
///
/// `recurrence[k] = (α_k, β_k)` for the monic family
/// `π_{k+1} = (x − α_k)π_k − β_k π_{k−1}`, with `β_0 = ∫ w`.
/// `norms[k] = ‖π_k‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteBasis {
    pub sigma: f64,
    pub s: f64,
    pub recurrence: Vec<(f64, f64)>,
    pub norms: Vec<f64>,
}

impl HermiteBasis {
    /// Basis with polynomials of degree `0..=depth`.
    pub fn new(sigma: f64, s: f64, depth: usize) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::BasisDepthExceeded {
                needed: depth,
                built: MAX_DEPTH,
            });
        }
        if !(sigma > -0.5 + SIGMA_MARGIN) {
            return Err(Error::InvalidParams(format!("σ = {sigma} must exceed −1/2")));
        }
        if !(s > 0.0) {
            return Err(Error::InvalidParams(format!("s must be positive, got {s}")));
        }
        let ln_mu0 = ln_gamma(sigma + 0.5) - (sigma + 0.5) * s.ln();
        let mut recurrence = Vec::with_capacity(depth + 1);
        let mut norms = Vec::with_capacity(depth + 1);
        let mut ln_norm2 = ln_mu0;
        for k in 0..=depth {
            let beta = if k == 0 {
                ln_mu0.exp()
            } else {
                let odd = if k % 2 == 1 { 2.0 * sigma } else { 0.0 };
                (k as f64 + odd) / (2.0 * s)
            };
            if k > 0 {
                ln_norm2 += beta.ln();
            }
            recurrence.push((0.0, beta));
            norms.push((0.5 * ln_norm2).exp());
        }
        Ok(HermiteBasis {
            sigma,
            s,
            recurrence,
            norms,
        })
    }

    pub fn depth(&self) -> usize {
        self.recurrence.len() - 1
    }

    /// `(p_k, p_k', p_k'')` of the orthonormal polynomial at `x`.
    pub fn eval(&self, k: usize, x: f64) -> Result<(f64, f64, f64)> {
        if k > self.depth() {
            return Err(Error::BasisDepthExceeded {
                needed: k,
                built: self.depth(),
            });
        }
        let b0 = self.recurrence[0].1;
        let (mut p, mut dp, mut ddp) = (1.0 / b0.sqrt(), 0.0, 0.0);
        let (mut pm, mut dpm, mut ddpm) = (0.0, 0.0, 0.0);
        for j in 0..k {
            let (alpha, _) = self.recurrence[j];
            let bj = if j == 0 { 0.0 } else { self.recurrence[j].1.sqrt() };
            let bn = self.recurrence[j + 1].1.sqrt();
            let pn = ((x - alpha) * p - bj * pm) / bn;
            let dpn = (p + (x - alpha) * dp - bj * dpm) / bn;
            let ddpn = (2.0 * dp + (x - alpha) * ddp - bj * ddpm) / bn;
            pm = p;
            dpm = dp;
            ddpm = ddp;
            p = pn;
            dp = dpn;
            ddp = ddpn;
        }
        Ok((p, dp, ddp))
    }

    /// `φ_k = p_k e^{−sx²/2}`.
    pub fn phi(&self, k: usize, x: f64) -> Result<f64> {
        Ok(self.eval(k, x)?.0 * (-0.5 * self.s * x * x).exp())
    }
}

/// Monic recurrence `(α_k, β_k)` by the Stieltjes procedure on exact moments
/// `∫ x^j |x|^{2σ} e^{−sx²} dx` (Gamma closed forms), with polynomials kept in
/// the monomial basis. Loses accuracy quickly with depth; kept as an
/// independent check on [`HermiteBasis`] for low degrees.
pub fn stieltjes_from_moments(sigma: f64, s: f64, depth: usize) -> Vec<(f64, f64)> {
    let nmom = 2 * depth + 3;
    // moments normalised by m_0
    let mut m = vec![0.0; nmom];
    m[0] = 1.0;
    for j in (2..nmom).step_by(2) {
        m[j] = m[j - 2] * (sigma + 0.5 + (j / 2 - 1) as f64) / s;
    }
    let inner = |p: &[f64], q: &[f64], shift: usize| -> f64 {
        let mut sum = 0.0;
        let mut c = 0.0;
        for (i, pi) in p.iter().enumerate() {
            if *pi == 0.0 {
                continue;
            }
            for (j, qj) in q.iter().enumerate() {
                let term = pi * qj * m[i + j + shift];
                let t = sum + term;
                if f64::abs(sum) >= term.abs() {
                    c += (sum - t) + term;
                } else {
                    c += (term - t) + sum;
                }
                sum = t;
            }
        }
        sum + c
    };
    let mu0 = (ln_gamma(sigma + 0.5) - (sigma + 0.5) * s.ln()).exp();
    let mut out = Vec::with_capacity(depth + 1);
    let mut prev: Vec<f64> = Vec::new();
    let mut cur: Vec<f64> = vec![1.0];
    let mut prev_norm = 0.0;
    for k in 0..=depth {
        let norm = inner(&cur, &cur, 0);
        let alpha = inner(&cur, &cur, 1) / norm;
        let beta = if k == 0 { mu0 } else { norm / prev_norm };
        out.push((alpha, beta));
        let mut next = vec![0.0; cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= alpha * c;
        }
        if k > 0 {
            for (i, c) in prev.iter().enumerate() {
                next[i] -= beta * c;
            }
        }
        prev = cur;
        cur = next;
        prev_norm = norm;
    }
    out
}

/// `χ_k(ρ) = √2 ρ^a p_{2k}(ρ) e^{−sρ²/2}`.
pub fn chi_eval(k: usize, rho: f64, params: &PParams) -> Result<f64> {
    let basis = HermiteBasis::new(params.sigma, params.s, 2 * k)?;
    chi_with(&basis, k, rho, params)
}

fn chi_with(basis: &HermiteBasis, k: usize, rho: f64, params: &PParams) -> Result<f64> {
    Ok(std::f64::consts::SQRT_2 * rho.powf(params.a) * basis.phi(2 * k, rho)?)
}

/// `∫₀^∞ χ_j χ_k ρ^{2c₁} dρ` by quadrature.
pub fn chi_inner(j: usize, k: usize, params: &PParams) -> Result<f64> {
    let basis = HermiteBasis::new(params.sigma, params.s, 2 * j.max(k))?;
    quad::weighted_integral(params.sigma, params.s, |r| {
        2.0 * basis.phi(2 * j, r).unwrap() * basis.phi(2 * k, r).unwrap()
    })
}

/// `‖Pχ_k − λ_kχ_k‖ / ‖χ_k‖`, with `Pχ_k` formed by differentiating
/// `ρ^a · p_{2k}(ρ) · e^{−sρ²/2}` analytically.
pub fn eigen_residual(k: usize, params: &PParams) -> Result<f64> {
    let PParams { s, c1, c2, a, sigma } = *params;
    let gamma = c2 - a * (a - 1.0) - 2.0 * c1 * a;
    if gamma.abs() > residue_tol(c1, c2, a) {
        return Err(Error::InvalidParams(format!("indicial residue {gamma}")));
    }
    let basis = HermiteBasis::new(sigma, s, 2 * k)?;
    let lambda = p_eigenvalue(k, params);
    // χ = ρ^a v, v = p e^{−sρ²/2}. After dividing by ρ^a, the ρ^{a−2}
    // terms carry the coefficient `gamma`, which is zero.
    let bracket = |r: f64| -> (f64, f64) {
        let (p, dp, ddp) = basis.eval(2 * k, r).unwrap();
        let e = (-0.5 * s * r * r).exp();
        let v = p * e;
        let v1 = (dp - s * r * p) * e;
        let v2 = (ddp - 2.0 * s * r * dp - s * p + s * s * r * r * p) * e;
        let pv = -v2 - 2.0 * a * v1 / r - 2.0 * c1 * v1 / r + s * s * r * r * v;
        (pv - lambda * v, v)
    };
    let num = quad::weighted_integral(sigma, s, |r| {
        let (b, _) = bracket(r);
        2.0 * b * b
    })?;
    let den = quad::weighted_integral(sigma, s, |r| {
        let (_, v) = bracket(r);
        2.0 * v * v
    })?;
    Ok((num / den).sqrt())
}

/// `⟨hχ₀, χ₀⟩_{c₁}` for each s in `s_list`.
pub fn concentration<H: Fn(f64) -> f64>(h: H, params: &PParams, s_list: &[f64]) -> Result<Vec<f64>> {
    s_list
        .iter()
        .map(|&s| {
            let p = PParams::new(s, params.c1, params.c2, params.a)?;
            let basis = HermiteBasis::new(p.sigma, s, 0)?;
            let p0sq = 1.0 / basis.recurrence[0].1;
            quad::weighted_integral(p.sigma, s, |r| 2.0 * h(r) * p0sq * (-s * r * r).exp())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_examples() {
        assert_eq!(admissible_as(0.0, 0.0), vec![(1.0, 1.0), (0.0, 0.0)]);
        let k = 2.0;
        let r = admissible_as(0.0, k * (k - 1.0));
        assert_eq!(r.len(), 1);
        assert!((r[0].0 - 2.0).abs() < 1e-14);
        let r = admissible_as(1.5, 1.0);
        assert_eq!(r.len(), 1);
        assert!((r[0].0 - (2f64.sqrt() - 1.0)).abs() < 1e-14);
        assert!(admissible_as(0.0, -1.0).is_empty());
    }

    #[test]
    fn cone_type3_quadratic() {
        // c₁ = (n−2r+1)/2, c₂ = μ² with n = 2, r = 1, μ = 1
        let roots: Vec<f64> = {
            let b: f64 = 2.0 * 0.5 - 1.0;
            let d = (b * b + 4.0_f64).sqrt();
            vec![(-b + d) / 2.0, (-b - d) / 2.0]
        };
        assert_eq!(roots, vec![1.0, -1.0]);
        let adm = admissible_as(0.5, 1.0);
        assert_eq!(adm, vec![(1.0, 1.5)]);
    }

    #[test]
    fn eigenvalue_examples() {
        let p = |s, sigma: f64| PParams::new(s, 0.0, sigma * (sigma - 1.0), sigma).unwrap();
        assert_eq!(p_eigenvalue(0, &p(1.0, 0.0)), 1.0);
        assert!((p_eigenvalue(2, &p(3.0, 0.5)) - 30.0).abs() < 1e-12);
        assert!((p_eigenvalue(0, &p(1.0, -0.25)) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_sigma_at_minus_half() {
        assert!(PParams::new(1.0, 0.0, 0.75, -0.5).is_err());
        assert!(HermiteBasis::new(-0.5 + 1e-10, 1.0, 4).is_err());
    }

    #[test]
    fn chi0_closed_form() {
        let p = PParams::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let c = (4.0 / std::f64::consts::PI).powf(0.25);
        for &r in &[0.1, 0.7, 2.0] {
            let got = chi_eval(0, r, &p).unwrap();
            assert!((got - c * (-0.5 * r * r).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn depth_cap() {
        let p = PParams::new(1.0, 0.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            chi_eval(33, 1.0, &p),
            Err(Error::BasisDepthExceeded { .. })
        ));
        assert!(chi_eval(32, 1.0, &p).is_ok());
    }

    #[test]
    fn recurrence_matches_moment_stieltjes() {
        for &(sigma, s) in &[(0.0, 1.0), (0.5, 2.0), (-0.25, 0.7), (1.914, 1.0)] {
            let b = HermiteBasis::new(sigma, s, 12).unwrap();
            let st = stieltjes_from_moments(sigma, s, 12);
            for k in 0..=12 {
                let (a1, b1) = b.recurrence[k];
                let (a2, b2) = st[k];
                assert!((a1 - a2).abs() < 1e-8, "α mismatch k={k}");
                assert!((b1 - b2).abs() < 1e-8 * b1.abs(), "β mismatch σ={sigma} k={k}");
            }
        }
    }
}
