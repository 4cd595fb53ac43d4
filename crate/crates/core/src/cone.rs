//! Spectrum of the Witten Laplacian `Δ^±_s` on a cone stratum `N × ℝ₊` of
//! dimension n, assembled from the spectral data of the link N.
//!
//! Every ladder comes from a scalar block of the form
//! `H − 2c₁ρ⁻¹ d/dρ + c₂ρ⁻² + shift·s` on the core `ρ^a`, whose eigenvalues
//! are `(4k + 1 + 2(a + c₁) + shift)s`.

use crate::error::{Error, Result};
use crate::hermite::{p_eigenvalue, PParams};
use crate::spectrum::{ladder_symbol, Branch, EigLadder, Ibc, Sign, SpectrumTable};
use serde::{Deserialize, Serialize};

/// Spectral data of a compact link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSpectrum {
    #[serde(rename = "dim")]
    pub n_link: usize,
    pub harmonic_min: Vec<u64>,
    pub harmonic_max: Vec<u64>,
    #[serde(default)]
    pub pairs: Vec<Pair>,
    /// Data are complete for cutoffs up to this value (units of s).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete_below: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

/// `d̃β = μα`, `δ̃α = μβ` with α of degree r, repeated `mult` times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pair {
    pub mu: f64,
    pub r: usize,
    pub mult: u64,
}

impl LinkSpectrum {
    pub fn validate(&self) -> Result<()> {
        let len = self.n_link + 1;
        if self.harmonic_min.len() != len || self.harmonic_max.len() != len {
            return Err(Error::InvalidParams(format!(
                "harmonic vectors must have length dim+1 = {len}"
            )));
        }
        for (i, p) in self.pairs.iter().enumerate() {
            if p.r < 1 || p.r > self.n_link {
                return Err(Error::InvalidParams(format!(
                    "pairs[{i}].r = {} outside 1..={}",
                    p.r, self.n_link
                )));
            }
            if !(p.mu > 0.0) || !p.mu.is_finite() {
                return Err(Error::InvalidParams(format!("pairs[{i}].mu must be positive")));
            }
            if p.mult == 0 {
                return Err(Error::InvalidParams(format!("pairs[{i}].mult must be at least 1")));
            }
        }
        Ok(())
    }

    pub fn harmonic(&self, ibc: Ibc) -> &[u64] {
        match ibc {
            Ibc::Min => &self.harmonic_min,
            Ibc::Max => &self.harmonic_max,
        }
    }

    /// Cone dimension n = dim N + 1.
    pub fn cone_dim(&self) -> usize {
        self.n_link + 1
    }
}

/// A scalar block of the cone Laplacian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarBlock {
    pub degree: usize,
    pub c1: f64,
    pub c2: f64,
    pub a: f64,
    pub shift: f64,
    pub branch: Branch,
}

impl ScalarBlock {
    /// `1 + 2(a + c₁) + shift`.
    pub fn base(&self) -> f64 {
        1.0 + 2.0 * (self.a + self.c1) + self.shift
    }

    pub fn params(&self, s: f64) -> Result<PParams> {
        PParams::new(s, self.c1, self.c2, self.a)
    }

    /// Lowest eigenvalue divided by s, through [`p_eigenvalue`].
    pub fn base_via_p(&self) -> Result<f64> {
        Ok(p_eigenvalue(0, &self.params(1.0)?) + self.shift)
    }
}

/// Whether the harmonic class at degree r uses the `a = 0` / `a = 1` core.
fn first_core(r: i64, n: i64, ibc: Ibc) -> bool {
    let twice = 2 * r;
    if twice < n - 1 {
        true
    } else if twice > n - 1 {
        false
    } else {
        ibc == Ibc::Max
    }
}

/// Blocks for one harmonic class of degree r.
pub fn type12_blocks(r: i64, n: i64, sign: Sign, ibc: Ibc) -> Result<[ScalarBlock; 2]> {
    if r < 0 || r > n - 1 {
        return Err(Error::DegreeOutOfRange { r, n });
    }
    let pm = sign.pm();
    let d = (n - 2 * r) as f64;
    let c1 = (d - 1.0) / 2.0;
    let (a0, a1, b0, b1) = if first_core(r, n, ibc) {
        (0.0, 1.0, Branch::T12a0, Branch::T12a1)
    } else {
        (2.0 - d, 1.0 - d, Branch::T12aTop, Branch::T12aSide)
    };
    Ok([
        ScalarBlock {
            degree: r as usize,
            c1,
            c2: 0.0,
            a: a0,
            shift: -pm * d,
            branch: b0,
        },
        ScalarBlock {
            degree: r as usize + 1,
            c1,
            c2: d - 1.0,
            a: a1,
            shift: -pm * (d - 2.0),
            branch: b1,
        },
    ])
}

/// Ladders contributed by `gamma_count` harmonic classes of degree r.
pub fn type12_ladders(
    r: i64,
    gamma_count: u64,
    n: i64,
    sign: Sign,
    ibc: Ibc,
) -> Result<Vec<EigLadder>> {
    let blocks = type12_blocks(r, n, sign, ibc)?;
    if gamma_count == 0 {
        return Ok(Vec::new());
    }
    Ok(blocks
        .iter()
        .map(|b| {
            let base = b.base();
            EigLadder::new(base, b.degree, gamma_count, b.branch, ladder_symbol(base, None))
        })
        .collect())
}

/// `(c₊, a, b)` for the Θ-conjugation of the fifth-type block.
pub fn theta_constants(n: i64, r: i64, mu: f64) -> (f64, f64, f64) {
    let d = (n - 2 * r) as f64;
    let root = d.hypot(2.0 * mu);
    let c = if d > 0.0 {
        2.0 * mu / (d + root)
    } else {
        (root - d) / (2.0 * mu)
    };
    let a = c * mu;
    (c, a, a + 2.0)
}

/// Blocks for one μ-pair: degree r−1 (T3), r+1 (T4), and r twice (X, Y).
pub fn type345_blocks(mu: f64, r: i64, n: i64, sign: Sign) -> Result<[ScalarBlock; 4]> {
    if r < 1 || r > n - 1 {
        return Err(Error::DegreeOutOfRange { r, n });
    }
    let pm = sign.pm();
    let d = (n - 2 * r) as f64;
    let (c, a, b) = theta_constants(n, r, mu);
    let mu2 = mu * mu;
    let r = r as usize;
    Ok([
        ScalarBlock {
            degree: r - 1,
            c1: (d + 1.0) / 2.0,
            c2: mu2,
            a,
            shift: -pm * (d + 2.0),
            branch: Branch::T3,
        },
        ScalarBlock {
            degree: r + 1,
            c1: (d - 1.0) / 2.0,
            c2: mu2 + d - 1.0,
            a: a + 1.0,
            shift: -pm * (d - 2.0),
            branch: Branch::T4,
        },
        ScalarBlock {
            degree: r,
            c1: (d - 1.0) / 2.0,
            c2: mu2 - 2.0 * mu * c,
            a,
            shift: -pm * d,
            branch: Branch::T5X,
        },
        ScalarBlock {
            degree: r,
            c1: (d - 1.0) / 2.0,
            c2: mu2 + 2.0 * mu / c,
            a: b,
            shift: -pm * d,
            branch: Branch::T5Y,
        },
    ])
}

/// The four ladders of a μ-pair, each with multiplicity `mult`.
pub fn type345_ladders(mu: f64, r: i64, mult: u64, n: i64, sign: Sign) -> Result<Vec<EigLadder>> {
    let pm = sign.pm();
    let d = (n - 2 * r) as f64;
    let rad = d * d + 4.0 * mu * mu;
    let root = d.hypot(2.0 * mu);
    let blocks = type345_blocks(mu, r, n, sign)?;
    let q = [2.0 - pm * (d + 2.0), 2.0 - pm * (d - 2.0), -pm * d, 4.0 - pm * d];
    Ok(blocks
        .iter()
        .zip(q)
        .map(|(b, q)| EigLadder::new(q + root, b.degree, mult, b.branch, ladder_symbol(q, Some(rad))))
        .collect())
}

/// All ladders of the cone over `link`.
pub fn cone_ladders(link: &LinkSpectrum, sign: Sign, ibc: Ibc) -> Result<Vec<EigLadder>> {
    link.validate()?;
    let n = link.cone_dim() as i64;
    let mut out = Vec::new();
    for (r, &g) in link.harmonic(ibc).iter().enumerate() {
        out.extend(type12_ladders(r as i64, g, n, sign, ibc)?);
    }
    for p in &link.pairs {
        out.extend(type345_ladders(p.mu, p.r as i64, p.mult, n, sign)?);
    }
    Ok(out)
}

pub fn assemble_cone_spectrum(
    link: &LinkSpectrum,
    sign: Sign,
    ibc: Ibc,
    s: f64,
    cutoff: f64,
) -> Result<SpectrumTable> {
    if !(s > 0.0) {
        return Err(Error::InvalidParams(format!("s must be positive, got {s}")));
    }
    if let Some(limit) = link.complete_below {
        if cutoff > limit {
            return Err(Error::InsufficientData(format!(
                "link data complete only below cutoff {limit}, requested {cutoff}"
            )));
        }
    }
    let ladders = cone_ladders(link, sign, ibc)?;
    Ok(SpectrumTable::from_ladders(ladders, link.cone_dim() + 1, s, cutoff))
}

/// Kernel dimensions of the cone in degrees `0..=n` from link Betti numbers.
pub fn cone_kernel_dims(link_betti: &[u64], n: usize, sign: Sign, ibc: Ibc) -> Vec<u64> {
    let n = n as i64;
    let mut out = vec![0u64; n as usize + 1];
    for r in 0..n {
        let b = link_betti.get(r as usize).copied().unwrap_or(0);
        let twice = 2 * r;
        match sign {
            Sign::Plus => {
                let keep = if n % 2 == 0 {
                    twice <= n - 2
                } else {
                    match ibc {
                        Ibc::Min => twice <= n - 3,
                        Ibc::Max => twice < n,
                    }
                };
                if keep {
                    out[r as usize] = b;
                }
            }
            Sign::Minus => {
                let keep = if n % 2 == 0 {
                    twice >= n
                } else {
                    match ibc {
                        Ibc::Min => twice >= n - 1,
                        Ibc::Max => twice > n,
                    }
                };
                if keep {
                    out[r as usize + 1] = b;
                }
            }
        }
    }
    out
}
