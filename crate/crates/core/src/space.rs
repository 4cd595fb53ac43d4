//! Descriptor trees for small stratified spaces, kernel dimensions of the
//! Witten complex on them, Künneth products of spectra, and the local models
//! `ℝ^{m₊} × ℝ^{m₋} × M₊ × M₋` of rel-critical points.

use crate::cone::{assemble_cone_spectrum, cone_kernel_dims, cone_ladders, LinkSpectrum};
use crate::error::{Error, Result};
use crate::spectrum::{close, merge_levels, Ibc, Level, Sign, SpectrumTable};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StratumDesc {
    Closed {
        dim: usize,
        #[serde(default)]
        betti_min: Vec<u64>,
        #[serde(default)]
        betti_max: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        spectrum: Option<LinkSpectrum>,
    },
    Cone {
        link: Box<StratumDesc>,
    },
    Vertex {
        link_dim: usize,
    },
    Euclidean {
        m: usize,
    },
    Product {
        factors: Vec<StratumDesc>,
    },
}

impl StratumDesc {
    pub fn dim(&self) -> usize {
        match self {
            StratumDesc::Closed { dim, .. } => *dim,
            StratumDesc::Cone { link } => link.dim() + 1,
            StratumDesc::Vertex { .. } => 0,
            StratumDesc::Euclidean { m } => *m,
            StratumDesc::Product { factors } => factors.iter().map(StratumDesc::dim).sum(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StratumDesc::Closed {
                dim,
                betti_min,
                betti_max,
                spectrum,
            } => {
                if betti_min.is_empty() || betti_max.is_empty() {
                    return Err(Error::MissingBetti(format!("closed leaf of dim {dim}")));
                }
                if betti_min.len() != dim + 1 || betti_max.len() != dim + 1 {
                    return Err(Error::InvalidParams(format!(
                        "betti vectors of a closed leaf must have length dim+1 = {}",
                        dim + 1
                    )));
                }
                if betti_min != betti_max {
                    return Err(Error::InvalidParams(
                        "closed leaf must have betti_min = betti_max".into(),
                    ));
                }
                if let Some(sp) = spectrum {
                    sp.validate()?;
                    if sp.n_link != *dim {
                        return Err(Error::InvalidParams(
                            "closed leaf spectrum has the wrong dimension".into(),
                        ));
                    }
                }
                Ok(())
            }
            StratumDesc::Cone { link } => link.validate(),
            StratumDesc::Vertex { .. } => Ok(()),
            StratumDesc::Euclidean { m } => {
                if *m == 0 {
                    Err(Error::InvalidParams("euclidean factor needs m >= 1".into()))
                } else {
                    Ok(())
                }
            }
            StratumDesc::Product { factors } => {
                if factors.len() < 2 {
                    return Err(Error::InvalidParams("product needs at least 2 factors".into()));
                }
                factors.iter().try_for_each(StratumDesc::validate)
            }
        }
    }
}

/// Degree-wise convolution of two graded dimension vectors.
pub fn convolve(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `δ_{r,k}` on degrees `0..=len-1`.
fn delta(k: usize, len: usize) -> Vec<u64> {
    let mut v = vec![0; len];
    v[k] = 1;
    v
}

/// Kernel dimensions of the Witten complex on the stratum.
pub fn betti(desc: &StratumDesc, ibc: Ibc, sign: Sign) -> Result<Vec<u64>> {
    desc.validate()?;
    betti_rec(desc, ibc, sign)
}

fn betti_rec(desc: &StratumDesc, ibc: Ibc, sign: Sign) -> Result<Vec<u64>> {
    match desc {
        StratumDesc::Closed {
            betti_min,
            betti_max,
            ..
        } => Ok(match ibc {
            Ibc::Min => betti_min.clone(),
            Ibc::Max => betti_max.clone(),
        }),
        StratumDesc::Cone { link } => {
            let lb = betti_rec(link, ibc, sign)?;
            Ok(cone_kernel_dims(&lb, link.dim() + 1, sign, ibc))
        }
        StratumDesc::Vertex { .. } => Ok(vec![1]),
        StratumDesc::Euclidean { m } => Ok(match sign {
            Sign::Plus => delta(0, m + 1),
            Sign::Minus => delta(*m, m + 1),
        }),
        StratumDesc::Product { factors } => {
            let mut acc = vec![1u64];
            for f in factors {
                acc = convolve(&acc, &betti_rec(f, ibc, sign)?);
            }
            Ok(acc)
        }
    }
}

/// Table with the single eigenvalue 0 in degree 0.
pub fn unit_table(s: f64) -> SpectrumTable {
    SpectrumTable::from_levels(vec![vec![Level { value: 0.0, mult: 1 }]], s, f64::INFINITY)
}

/// Künneth product of spectra, truncated below `cutoff·s`.
pub fn tensor_spectrum(tables: &[SpectrumTable], cutoff: f64) -> Result<SpectrumTable> {
    let first = tables
        .first()
        .ok_or_else(|| Error::InvalidParams("tensor_spectrum needs at least one table".into()))?;
    let s = first.s;
    for t in tables {
        if !close(t.s, s, 0.0) {
            return Err(Error::MismatchedS(s, t.s));
        }
    }
    let limit = tables.iter().map(|t| t.cutoff).fold(cutoff, f64::min);
    let mut acc = unit_table(s);
    for t in tables {
        acc = tensor_pair(&acc, t, limit);
    }
    acc.cutoff = limit;
    Ok(acc)
}

fn tensor_pair(x: &SpectrumTable, y: &SpectrumTable, cutoff: f64) -> SpectrumTable {
    let s = x.s;
    let lim = cutoff * s;
    let degrees = x.degrees() + y.degrees() - 1;
    let mut raw: Vec<Vec<(f64, u64)>> = vec![Vec::new(); degrees];
    for (i, lx) in x.per_degree.iter().enumerate() {
        for (j, ly) in y.per_degree.iter().enumerate() {
            for a in lx {
                if a.value >= lim {
                    break;
                }
                for b in ly {
                    let v = a.value + b.value;
                    if v >= lim {
                        break;
                    }
                    raw[i + j].push((v, a.mult * b.mult));
                }
            }
        }
    }
    SpectrumTable::from_levels(raw.into_iter().map(|r| merge_levels(r, s)).collect(), s, cutoff)
}

/// Tag for the vertex case in critical-point JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexTag {
    #[serde(rename = "vertex")]
    Vertex,
}

/// `M = N × ℝ₊` with `dim M = n` and the Betti numbers of N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeFactor {
    pub n: usize,
    pub betti_min: Vec<u64>,
    pub betti_max: Vec<u64>,
}

impl ConeFactor {
    pub fn betti(&self, ibc: Ibc) -> &[u64] {
        match ibc {
            Ibc::Min => &self.betti_min,
            Ibc::Max => &self.betti_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LocalFactor {
    Vertex(VertexTag),
    Cone(ConeFactor),
}

impl LocalFactor {
    pub fn dim(&self) -> usize {
        match self {
            LocalFactor::Vertex(_) => 0,
            LocalFactor::Cone(c) => c.n,
        }
    }
}

/// Local data at a rel-critical point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalPointModel {
    pub m_plus: usize,
    pub m_minus: usize,
    pub plus: LocalFactor,
    pub minus: LocalFactor,
}

impl CriticalPointModel {
    pub fn validate(&self) -> Result<()> {
        for (name, f) in [("plus", &self.plus), ("minus", &self.minus)] {
            if let LocalFactor::Cone(c) = f {
                if c.n == 0 {
                    return Err(Error::InvalidParams(format!("{name}.n must be at least 1")));
                }
                if c.betti_min.len() != c.n || c.betti_max.len() != c.n {
                    return Err(Error::InvalidParams(format!(
                        "{name} betti vectors must have length n = {}",
                        c.n
                    )));
                }
            }
        }
        Ok(())
    }

    /// Total dimension `m₊ + m₋ + n₊ + n₋`.
    pub fn dim(&self) -> usize {
        self.m_plus + self.m_minus + self.plus.dim() + self.minus.dim()
    }
}

fn factor_desc(f: &LocalFactor, ibc: Ibc) -> StratumDesc {
    match f {
        LocalFactor::Vertex(_) => StratumDesc::Vertex { link_dim: 0 },
        LocalFactor::Cone(c) => {
            let b = c.betti(ibc).to_vec();
            StratumDesc::Cone {
                link: Box::new(StratumDesc::Closed {
                    dim: c.n - 1,
                    betti_min: b.clone(),
                    betti_max: b,
                    spectrum: None,
                }),
            }
        }
    }
}

fn role_desc(m: usize, f: &LocalFactor, ibc: Ibc) -> StratumDesc {
    let inner = factor_desc(f, ibc);
    if m == 0 {
        inner
    } else {
        StratumDesc::Product {
            factors: vec![StratumDesc::Euclidean { m }, inner],
        }
    }
}

/// Kernel dimensions of the local model, as the Künneth product of the
/// `f = ρ₊²/2` part on `ℝ^{m₊} × M₊` and the `f = −ρ₋²/2` part on `ℝ^{m₋} × M₋`.
pub fn local_model_kernel(cp: &CriticalPointModel, ibc: Ibc) -> Result<Vec<u64>> {
    cp.validate()?;
    let plus = betti(&role_desc(cp.m_plus, &cp.plus, ibc), ibc, Sign::Plus)?;
    let minus = betti(&role_desc(cp.m_minus, &cp.minus, ibc), ibc, Sign::Minus)?;
    let mut out = convolve(&plus, &minus);
    out.resize(cp.dim() + 1, 0);
    Ok(out)
}

/// Witten spectrum of ℝ^m with `f = ±|x|²/2`.
///
/// For m ≥ 2 this is the Max cone spectrum over S^{m−1}. For m = 1 it is the
/// even part (cone over a point, Max) plus the odd part (cone over a point, Min).
pub fn euclidean_spectrum(
    m: usize,
    sign: Sign,
    s: f64,
    cutoff: f64,
    sphere_data: Option<&LinkSpectrum>,
) -> Result<SpectrumTable> {
    match m {
        0 => Err(Error::InvalidParams("euclidean_spectrum needs m >= 1".into())),
        1 => {
            let point = LinkSpectrum {
                n_link: 0,
                harmonic_min: vec![1],
                harmonic_max: vec![1],
                pairs: Vec::new(),
                complete_below: None,
                source: None,
            };
            let mut ladders = cone_ladders(&point, sign, Ibc::Max)?;
            ladders.extend(cone_ladders(&point, sign, Ibc::Min)?);
            if !(s > 0.0) {
                return Err(Error::InvalidParams(format!("s must be positive, got {s}")));
            }
            Ok(SpectrumTable::from_ladders(ladders, 2, s, cutoff))
        }
        _ => {
            let link = sphere_data.ok_or(Error::MissingSphereData(m - 1))?;
            if link.n_link != m - 1 {
                return Err(Error::MissingSphereData(m - 1));
            }
            assemble_cone_spectrum(link, sign, Ibc::Max, s, cutoff)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed(b: Vec<u64>) -> StratumDesc {
        StratumDesc::Closed {
            dim: b.len() - 1,
            betti_min: b.clone(),
            betti_max: b,
            spectrum: None,
        }
    }

    #[test]
    fn betti_examples() {
        let cone = StratumDesc::Cone {
            link: Box::new(closed(vec![1, 1])),
        };
        assert_eq!(betti(&cone, Ibc::Max, Sign::Plus).unwrap(), vec![1, 0, 0]);
        let e3 = StratumDesc::Euclidean { m: 3 };
        assert_eq!(betti(&e3, Ibc::Max, Sign::Minus).unwrap(), vec![0, 0, 0, 1]);
        let t2 = StratumDesc::Product {
            factors: vec![closed(vec![1, 1]), closed(vec![1, 1])],
        };
        assert_eq!(betti(&t2, Ibc::Min, Sign::Plus).unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn missing_betti() {
        let leaf = StratumDesc::Closed {
            dim: 1,
            betti_min: vec![],
            betti_max: vec![],
            spectrum: None,
        };
        assert!(matches!(
            betti(&leaf, Ibc::Min, Sign::Plus),
            Err(Error::MissingBetti(_))
        ));
    }

    #[test]
    fn euclidean_line() {
        let t = euclidean_spectrum(1, Sign::Plus, 1.0, 9.0, None).unwrap();
        assert_eq!(t.expanded(0), vec![0.0, 2.0, 4.0, 6.0, 8.0]);
        assert_eq!(t.expanded(1), vec![2.0, 4.0, 6.0, 8.0]);
        assert_eq!(t.kernel_dims, vec![1, 0]);
        let t = euclidean_spectrum(1, Sign::Minus, 1.0, 9.0, None).unwrap();
        assert_eq!(t.kernel_dims, vec![0, 1]);
        assert!(matches!(
            euclidean_spectrum(2, Sign::Plus, 1.0, 9.0, None),
            Err(Error::MissingSphereData(1))
        ));
    }

    #[test]
    fn local_model_examples() {
        let v = LocalFactor::Vertex(VertexTag::Vertex);
        let cp = CriticalPointModel {
            m_plus: 0,
            m_minus: 2,
            plus: v.clone(),
            minus: v.clone(),
        };
        assert_eq!(local_model_kernel(&cp, Ibc::Min).unwrap(), vec![0, 0, 1]);
        let cp = CriticalPointModel {
            m_plus: 0,
            m_minus: 0,
            plus: LocalFactor::Cone(ConeFactor {
                n: 2,
                betti_min: vec![1, 1],
                betti_max: vec![1, 1],
            }),
            minus: v,
        };
        assert_eq!(local_model_kernel(&cp, Ibc::Min).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn critical_point_json() {
        let text = r#"{"m_plus":1,"m_minus":0,"plus":"vertex","minus":{"n":2,"betti_min":[1,1],"betti_max":[1,1]}}"#;
        let cp: CriticalPointModel = serde_json::from_str(text).unwrap();
        assert_eq!(cp.dim(), 3);
        assert_eq!(serde_json::to_string(&cp).unwrap(), text);
    }
}
