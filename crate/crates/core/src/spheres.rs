//! Hodge spectral data of round spheres S⁰, S¹, S², and the bundled data files.
//!
//! Files live in `data/spheres/s{k}.json` and are compiled in. Setting
//! `STRATWITTEN_DATA` to a directory makes [`sphere_link`] read `s{k}.json`
//! from there instead.

use crate::cone::{type345_ladders, LinkSpectrum, Pair};
use crate::error::{Error, Result};
use crate::spectrum::Sign;
use std::path::PathBuf;

pub const DATA_ENV: &str = "STRATWITTEN_DATA";
pub const DATA_VERSION: &str = "v1";

const BUNDLED: [&str; 3] = [
    include_str!("../data/spheres/s0.json"),
    include_str!("../data/spheres/s1.json"),
    include_str!("../data/spheres/s2.json"),
];

/// Number of eigenvalue indices in the bundled files for S¹ and S².
pub const BUNDLED_DEPTH: [usize; 3] = [0, 400, 200];

/// Pairs of S^k for eigen-index `j` (S¹: μ = j; S²: μ = √(j(j+1))).
fn pairs_at(k: usize, j: usize) -> Vec<Pair> {
    match k {
        1 => vec![Pair {
            mu: j as f64,
            r: 1,
            mult: 2,
        }],
        2 => {
            let mu = ((j * (j + 1)) as f64).sqrt();
            let mult = 2 * j as u64 + 1;
            vec![Pair { mu, r: 1, mult }, Pair { mu, r: 2, mult }]
        }
        _ => Vec::new(),
    }
}

/// Closed-form spectral data of S^k with eigen-indices `1..=depth`.
///
/// S¹: the functions `cos jθ, sin jθ` have eigenvalue j², so μ = j with
/// multiplicity 2 at r = 1. S²: spherical harmonics of degree ℓ give
/// μ² = ℓ(ℓ+1) with multiplicity 2ℓ+1, once for exact 1-forms (r = 1) and once,
/// by Hodge duality, for exact 2-forms (r = 2).
pub fn generate_sphere(k: usize, depth: usize) -> Result<LinkSpectrum> {
    let (harmonic, depth) = match k {
        0 => (vec![2], 0),
        1 => (vec![1, 1], depth),
        2 => (vec![1, 0, 1], depth),
        _ => return Err(Error::MissingSphereData(k)),
    };
    let pairs: Vec<Pair> = (1..=depth).flat_map(|j| pairs_at(k, j)).collect();
    let complete_below = if k == 0 {
        None
    } else {
        let n = k as i64 + 1;
        let mut lowest = f64::INFINITY;
        for p in pairs_at(k, depth + 1) {
            for sign in [Sign::Plus, Sign::Minus] {
                for l in type345_ladders(p.mu, p.r as i64, p.mult, n, sign)? {
                    lowest = lowest.min(l.base);
                }
            }
        }
        Some(lowest)
    };
    Ok(LinkSpectrum {
        n_link: k,
        harmonic_min: harmonic.clone(),
        harmonic_max: harmonic,
        pairs,
        complete_below,
        source: Some(format!(
            "{DATA_VERSION}: closed-form Hodge spectrum of the round S^{k}, eigen-index <= {depth}"
        )),
    })
}

/// Parse a bundled sphere file.
pub fn bundled_sphere(k: usize) -> Result<LinkSpectrum> {
    let text = BUNDLED.get(k).ok_or(Error::MissingSphereData(k))?;
    serde_json::from_str(text).map_err(|e| Error::InvalidParams(format!("bundled s{k}.json: {e}")))
}

/// Sphere data for S^k, from `STRATWITTEN_DATA` if set, else bundled.
pub fn sphere_link(k: usize) -> Result<LinkSpectrum> {
    match std::env::var_os(DATA_ENV) {
        Some(dir) => {
            let path = PathBuf::from(dir).join(format!("s{k}.json"));
            let text = std::fs::read_to_string(&path).map_err(|_| Error::MissingSphereData(k))?;
            let link: LinkSpectrum = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidParams(format!("{}: {e}", path.display())))?;
            link.validate()?;
            Ok(link)
        }
        None => bundled_sphere(k),
    }
}
