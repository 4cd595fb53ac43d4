//! Morse numbers ν of rel-critical points, Morse inequalities, and Weyl
//! counting-function fits.

use crate::error::{Error, Result};
use crate::space::{CriticalPointModel, LocalFactor};
use crate::spectrum::{Ibc, SpectrumTable};
use serde::{Deserialize, Serialize};

pub type NuVector = Vec<u64>;

/// `r₊` admitted on the attracting side.
fn plus_admits(r: usize, n: usize, ibc: Ibc) -> bool {
    let (r, n) = (r as i64, n as i64);
    if n % 2 == 0 {
        r < n / 2
    } else {
        match ibc {
            Ibc::Min => 2 * r <= n - 3,
            Ibc::Max => 2 * r < n,
        }
    }
}

/// `r₋` admitted on the repelling side.
fn minus_admits(r: usize, n: usize, ibc: Ibc) -> bool {
    let (r, n) = (r as i64, n as i64);
    if n % 2 == 0 {
        r >= n / 2
    } else {
        match ibc {
            Ibc::Min => 2 * r >= n - 1,
            Ibc::Max => 2 * r > n,
        }
    }
}

/// ν of one critical point, degrees `0..=dim`.
pub fn nu_point(cp: &CriticalPointModel, ibc: Ibc) -> Result<NuVector> {
    cp.validate()?;
    let mut nu = vec![0u64; cp.dim() + 1];
    let m = cp.m_minus;
    match (&cp.plus, &cp.minus) {
        (LocalFactor::Vertex(_), LocalFactor::Vertex(_)) => nu[m] = 1,
        (LocalFactor::Vertex(_), LocalFactor::Cone(mi)) => {
            for (rm, b) in mi.betti(ibc).iter().enumerate() {
                if minus_admits(rm, mi.n, ibc) {
                    nu[m + rm + 1] += b;
                }
            }
        }
        (LocalFactor::Cone(pl), LocalFactor::Vertex(_)) => {
            for (rp, b) in pl.betti(ibc).iter().enumerate() {
                if plus_admits(rp, pl.n, ibc) {
                    nu[m + rp] += b;
                }
            }
        }
        (LocalFactor::Cone(pl), LocalFactor::Cone(mi)) => {
            for (rp, bp) in pl.betti(ibc).iter().enumerate() {
                if !plus_admits(rp, pl.n, ibc) {
                    continue;
                }
                for (rm, bm) in mi.betti(ibc).iter().enumerate() {
                    if minus_admits(rm, mi.n, ibc) {
                        nu[m + rp + rm + 1] += bp * bm;
                    }
                }
            }
        }
    }
    Ok(nu)
}

/// Sum of ν over critical points, zero-padded.
pub fn nu_total(points: &[CriticalPointModel], ibc: Ibc) -> Result<NuVector> {
    let mut total: NuVector = Vec::new();
    for cp in points {
        let nu = nu_point(cp, ibc)?;
        if nu.len() > total.len() {
            total.resize(nu.len(), 0);
        }
        for (t, v) in total.iter_mut().zip(nu) {
            *t += v;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialSum {
    pub degree: usize,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseReport {
    pub partial_sums: Vec<PartialSum>,
    pub euler_lhs: i64,
    pub euler_rhs: i64,
    pub euler_holds: bool,
}

impl MorseReport {
    pub fn all_hold(&self) -> bool {
        self.euler_holds && self.partial_sums.iter().all(|p| p.holds)
    }
}

/// Strong Morse inequalities and the Euler characteristic equality.
pub fn morse_check(beta: &[u64], nu: &[u64]) -> MorseReport {
    let len = beta.len().max(nu.len());
    let get = |v: &[u64], j: usize| v.get(j).copied().unwrap_or(0) as i64;
    let mut partial_sums = Vec::with_capacity(len);
    let (mut lhs, mut rhs) = (0i64, 0i64);
    for r in 0..len {
        lhs = get(beta, r) - lhs;
        rhs = get(nu, r) - rhs;
        partial_sums.push(PartialSum {
            degree: r,
            lhs,
            rhs,
            holds: lhs <= rhs,
        });
    }
    let euler = |v: &[u64]| -> i64 {
        (0..len)
            .map(|r| if r % 2 == 0 { get(v, r) } else { -get(v, r) })
            .sum()
    };
    let (euler_lhs, euler_rhs) = (euler(beta), euler(nu));
    MorseReport {
        partial_sums,
        euler_lhs,
        euler_rhs,
        euler_holds: euler_lhs == euler_rhs,
    }
}

/// Number of eigenvalues `< lambda`, all degrees, with multiplicity.
pub fn counting_function(spectrum: &SpectrumTable, lambda: f64) -> u64 {
    spectrum
        .per_degree
        .iter()
        .flatten()
        .filter(|l| l.value < lambda)
        .map(|l| l.mult)
        .sum()
}

/// Minimum number of eigenvalues for [`weyl_fit`].
pub const MIN_FIT_EIGENVALUES: usize = 16;

/// `(θ̂, ĉ)`: θ̂ is the reciprocal least-squares slope of `log 𝔑` against
/// `log λ` at the jump points in the upper half of the window, and
/// `ĉ = min_k λ_k k^{−θ̂}` over the same window.
pub fn weyl_fit(spectrum: &SpectrumTable) -> Result<(f64, f64)> {
    let eig = spectrum.all_expanded();
    if eig.len() < MIN_FIT_EIGENVALUES {
        return Err(Error::InsufficientData(format!(
            "{} eigenvalues, need at least {MIN_FIT_EIGENVALUES}",
            eig.len()
        )));
    }
    let top = if spectrum.cutoff.is_finite() {
        spectrum.cutoff * spectrum.s
    } else {
        *eig.last().unwrap()
    };
    let lo = 0.5 * top;
    // (λ, count ≤ λ) at each distinct eigenvalue in [lo, top)
    let mut pts: Vec<(f64, usize)> = Vec::new();
    for (i, &v) in eig.iter().enumerate() {
        if v < lo || v <= 0.0 {
            continue;
        }
        let last = i + 1 == eig.len() || eig[i + 1] > v * (1.0 + 1e-12);
        if last {
            pts.push((v, i + 1));
        }
    }
    if pts.len() < 2 {
        return Err(Error::InsufficientData(
            "fewer than two jump points in the fit window".into(),
        ));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| (p.1 as f64).ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let theta = 1.0 / slope;
    let c_hat = eig
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= lo && v > 0.0)
        .map(|(i, &v)| v * ((i + 1) as f64).powf(-theta))
        .fold(f64::INFINITY, f64::min);
    Ok((theta, c_hat))
}
