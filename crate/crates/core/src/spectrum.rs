use serde::{Deserialize, Serialize};
use std::fmt;

/// Sign of the model function ±ρ²/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// +1 for `Plus`, -1 for `Minus`.
    pub fn pm(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Minimum or maximum ideal boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ibc {
    Min,
    Max,
}

/// Origin of a ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    T12a0,
    T12a1,
    T12aTop,
    T12aSide,
    T3,
    T4,
    T5X,
    T5Y,
    /// Length-one complex, degree 0 and 1.
    L1Deg0,
    L1Deg1,
    /// Length-two complex blocks.
    L2Deg0,
    L2Deg11,
    L2Deg12,
    L2Deg2,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::T12a0 => "T12a0",
            Branch::T12a1 => "T12a1",
            Branch::T12aTop => "T12aTop",
            Branch::T12aSide => "T12aSide",
            Branch::T3 => "T3",
            Branch::T4 => "T4",
            Branch::T5X => "T5X",
            Branch::T5Y => "T5Y",
            Branch::L1Deg0 => "L1Deg0",
            Branch::L1Deg1 => "L1Deg1",
            Branch::L2Deg0 => "L2Deg0",
            Branch::L2Deg11 => "L2Deg11",
            Branch::L2Deg12 => "L2Deg12",
            Branch::L2Deg2 => "L2Deg2",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Eigenvalues `(base + 4k)·s`, `k ≥ 0`, in one degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigLadder {
    pub base: f64,
    pub degree: usize,
    pub mult: u64,
    pub provenance: Branch,
    /// Symbolic form of the ladder, e.g. `4k+2+sqrt(8)`.
    pub symbol: String,
}

impl EigLadder {
    pub fn new(base: f64, degree: usize, mult: u64, provenance: Branch, symbol: String) -> Self {
        EigLadder {
            base,
            degree,
            mult,
            provenance,
            symbol,
        }
    }

    /// Number of rungs strictly below `cutoff` (in units of s).
    pub fn rungs_below(&self, cutoff: f64) -> usize {
        if !(self.base < cutoff) {
            return 0;
        }
        let mut k = ((cutoff - self.base) / 4.0).floor() as i64;
        while k >= 0 && self.base + 4.0 * k as f64 >= cutoff {
            k -= 1;
        }
        (k + 1).max(0) as usize
    }

    /// Rungs divided by s, strictly below `cutoff`.
    pub fn values_below(&self, cutoff: f64) -> Vec<f64> {
        (0..self.rungs_below(cutoff))
            .map(|k| self.base + 4.0 * k as f64)
            .collect()
    }
}

/// One eigenvalue with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub value: f64,
    pub mult: u64,
}

/// Per-degree eigenvalues below `cutoff·s`, merged and sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub s: f64,
    pub cutoff: f64,
    pub per_degree: Vec<Vec<Level>>,
    pub kernel_dims: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ladders: Vec<EigLadder>,
}

/// Relative tolerance for merging eigenvalues.
pub const MERGE_TOL: f64 = 1e-9;

pub(crate) fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= MERGE_TOL * scale.max(a.abs()).max(b.abs())
}

/// Sort and merge (value, mult) pairs.
pub fn merge_levels(mut raw: Vec<(f64, u64)>, scale: f64) -> Vec<Level> {
    raw.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<Level> = Vec::new();
    for (v, m) in raw {
        if m == 0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if close(last.value, v, scale) => last.mult += m,
            _ => out.push(Level { value: v, mult: m }),
        }
    }
    out
}

impl SpectrumTable {
    /// Table with `degrees` empty degree slots.
    pub fn empty(degrees: usize, s: f64, cutoff: f64) -> Self {
        SpectrumTable {
            s,
            cutoff,
            per_degree: vec![Vec::new(); degrees],
            kernel_dims: vec![0; degrees],
            ladders: Vec::new(),
        }
    }

    /// Truncate and merge ladders into a table over `degrees` degrees.
    pub fn from_ladders(ladders: Vec<EigLadder>, degrees: usize, s: f64, cutoff: f64) -> Self {
        let mut raw: Vec<Vec<(f64, u64)>> = vec![Vec::new(); degrees];
        for l in &ladders {
            for v in l.values_below(cutoff) {
                raw[l.degree].push((v * s, l.mult));
            }
        }
        let per_degree: Vec<Vec<Level>> = raw.into_iter().map(|r| merge_levels(r, s)).collect();
        let mut t = SpectrumTable {
            s,
            cutoff,
            per_degree,
            kernel_dims: Vec::new(),
            ladders,
        };
        t.refresh_kernel();
        t
    }

    /// Table from already computed per-degree levels.
    pub fn from_levels(per_degree: Vec<Vec<Level>>, s: f64, cutoff: f64) -> Self {
        let mut t = SpectrumTable {
            s,
            cutoff,
            per_degree,
            kernel_dims: Vec::new(),
            ladders: Vec::new(),
        };
        t.refresh_kernel();
        t
    }

    pub(crate) fn refresh_kernel(&mut self) {
        let s = self.s;
        self.kernel_dims = self
            .per_degree
            .iter()
            .map(|lv| {
                lv.iter()
                    .filter(|l| l.value.abs() <= MERGE_TOL * s)
                    .map(|l| l.mult)
                    .sum()
            })
            .collect();
    }

    pub fn degrees(&self) -> usize {
        self.per_degree.len()
    }

    /// Multiset of eigenvalues in degree `r`, expanded by multiplicity.
    pub fn expanded(&self, r: usize) -> Vec<f64> {
        let mut v = Vec::new();
        if let Some(lv) = self.per_degree.get(r) {
            for l in lv {
                for _ in 0..l.mult {
                    v.push(l.value);
                }
            }
        }
        v
    }

    /// All eigenvalues over all degrees, sorted, expanded by multiplicity.
    pub fn all_expanded(&self) -> Vec<f64> {
        let mut v: Vec<f64> = (0..self.degrees()).flat_map(|r| self.expanded(r)).collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    /// Total count of eigenvalues (with multiplicity).
    pub fn total_count(&self) -> u64 {
        self.per_degree.iter().flatten().map(|l| l.mult).sum()
    }

    /// Restrict to eigenvalues strictly below `cutoff·s`.
    pub fn truncated(&self, cutoff: f64) -> SpectrumTable {
        let lim = cutoff * self.s;
        let per_degree = self
            .per_degree
            .iter()
            .map(|lv| lv.iter().copied().filter(|l| l.value < lim).collect())
            .collect();
        SpectrumTable::from_levels(per_degree, self.s, cutoff.min(self.cutoff))
    }

    /// Degree-wise multiset equality up to the merge tolerance.
    pub fn same_levels(&self, other: &SpectrumTable) -> bool {
        let d = self.degrees().max(other.degrees());
        (0..d).all(|r| {
            let a = self.per_degree.get(r).map(Vec::as_slice).unwrap_or(&[]);
            let b = other.per_degree.get(r).map(Vec::as_slice).unwrap_or(&[]);
            a.len() == b.len()
                && a.iter()
                    .zip(b)
                    .all(|(x, y)| x.mult == y.mult && close(x.value, y.value, self.s))
        })
    }
}

/// Compact decimal: integers without fraction, else up to 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    if (x - x.round()).abs() <= 1e-9 * x.abs().max(1.0) {
        return format!("{}", x.round() as i64);
    }
    let s = format!("{:.11e}", x);
    let v: f64 = s.parse().unwrap_or(x);
    format!("{}", v)
}

/// `4k+q` or `4k+q+sqrt(rad)` with perfect squares folded.
pub fn ladder_symbol(q: f64, radicand: Option<f64>) -> String {
    let mut q = q;
    let mut root = None;
    if let Some(rad) = radicand {
        let r = rad.sqrt();
        if (r - r.round()).abs() <= 1e-9 * r.max(1.0) {
            q += r.round();
        } else {
            root = Some(rad);
        }
    }
    let mut out = String::from("4k");
    if q.abs() > 1e-12 || root.is_none() {
        if q < 0.0 {
            out.push_str(&format!("-{}", fmt_num(-q)));
        } else {
            out.push_str(&format!("+{}", fmt_num(q)));
        }
    }
    if let Some(rad) = root {
        out.push_str(&format!("+sqrt({})", fmt_num(rad)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder(base: f64) -> EigLadder {
        EigLadder::new(base, 0, 1, Branch::T12a0, ladder_symbol(base, None))
    }

    #[test]
    fn ties_at_cutoff_are_excluded() {
        assert_eq!(ladder(2.0).values_below(10.0), vec![2.0, 6.0]);
        assert_eq!(ladder(0.0).values_below(8.0), vec![0.0, 4.0]);
        assert_eq!(ladder(0.0).values_below(8.5), vec![0.0, 4.0, 8.0]);
        assert!(ladder(3.0).values_below(3.0).is_empty());
        assert!(ladder(0.0).values_below(0.0).is_empty());
    }

    #[test]
    fn merge_and_kernel() {
        let t = SpectrumTable::from_ladders(vec![ladder(0.0), ladder(0.0), ladder(4.0)], 1, 1.0, 10.0);
        assert_eq!(t.kernel_dims, vec![2]);
        let got: Vec<(f64, u64)> = t.per_degree[0].iter().map(|l| (l.value, l.mult)).collect();
        assert_eq!(got, vec![(0.0, 2), (4.0, 3), (8.0, 3)]);
    }

    #[test]
    fn symbols() {
        assert_eq!(ladder_symbol(2.0, Some(8.0)), "4k+2+sqrt(8)");
        assert_eq!(ladder_symbol(2.0, Some(4.0)), "4k+4");
        assert_eq!(ladder_symbol(0.0, None), "4k+0");
        assert_eq!(ladder_symbol(-2.0, Some(17.0)), "4k-2+sqrt(17)");
        assert_eq!(ladder_symbol(0.0, Some(17.0)), "4k+sqrt(17)");
    }
}
