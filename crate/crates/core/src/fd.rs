//! Finite-volume discretization of the radial blocks, used as an independent
//! check on the closed-form ladders.
//!
//! Each problem is reduced to `−v'' − (2σ/ρ)v' + V(ρ)v` on `(0, R)` after
//! factoring the core exponent `ρ^a`, with V a symmetric matrix of powers of ρ.
//! The reduced operator is symmetric in `L²(ρ^{2σ}dρ)`. Unknowns sit at cell
//! midpoints `(j−½)h`; cell masses are exact integrals of `ρ^{2σ}`, fluxes use
//! harmonic averages of `ρ^{−2σ}`, with zero flux at 0 and Dirichlet at R.

use crate::complexes::{length_one_blocks, length_two_blocks, ScalarBlock as ComplexBlock};
use crate::cone::{theta_constants, type345_blocks};
use crate::error::{Error, Result};
use crate::hermite::{p_eigenvalue, PParams};
use crate::opalg::{ConeSector, Op, OpMatrix};
use crate::spectrum::{Ibc, Sign};
use serde::{Deserialize, Serialize};

pub const MAX_COUNT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    /// Truncation radius.
    #[serde(rename = "R")]
    pub r: f64,
    /// Mesh width.
    pub h: f64,
    /// Number of cells, `n·h = R`.
    pub n: usize,
}

impl Grid {
    pub fn new(r: f64, h: f64) -> Result<Grid> {
        if !(r > 0.0 && h > 0.0 && r.is_finite()) {
            return Err(Error::InvalidGrid(format!("R = {r}, h = {h}")));
        }
        if h > r / 100.0 * (1.0 + 1e-12) {
            return Err(Error::InvalidGrid(format!("h = {h} exceeds R/100 = {}", r / 100.0)));
        }
        let n = (r / h).round() as usize;
        Ok(Grid { r, h: r / n as f64, n })
    }

    /// `R = 10/√s` with `n` cells.
    pub fn for_s(s: f64, n: usize) -> Result<Grid> {
        let r = 10.0 / s.sqrt();
        Grid::new(r, r / n as f64)
    }

    /// Nodes `j·h`, `j = 1..n−1`.
    pub fn interior_nodes(&self) -> Vec<f64> {
        (1..self.n).map(|j| j as f64 * self.h).collect()
    }

    fn centers(&self) -> Vec<f64> {
        (1..=self.n).map(|j| (j as f64 - 0.5) * self.h).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FdProblem {
    /// `H − 2c₁ρ⁻¹d/dρ + c₂ρ⁻²` on the `ρ^a` core.
    P {
        c1: f64,
        c2: f64,
        s: f64,
        a: Option<f64>,
    },
    /// Degree-`degree` block of the length-one complex on the `ρ^a` core.
    LengthOneBlock {
        kappa: f64,
        s: f64,
        sign: Sign,
        degree: usize,
        a: Option<f64>,
    },
    /// Block `index` (0: Δ₀, 1: Δ₁,₁, 2: Δ₁,₂, 3: Δ₂) of the length-two complex.
    LengthTwoBlock {
        kappa: f64,
        c: f64,
        s: f64,
        sign: Sign,
        index: usize,
        a: Option<f64>,
    },
    /// The coupled degree-r block on `(fα, g dρ∧β)` for a μ-pair.
    ConeBlock {
        n: i64,
        r: i64,
        mu: f64,
        s: f64,
        sign: Sign,
    },
}

/// `−v'' − (2σ/ρ)v' + Σ_p V_p ρ^p v` with `k × k` symmetric `V_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSystem {
    pub k: usize,
    pub sigma: f64,
    pub potential: Vec<(i32, Vec<f64>)>,
}

impl RadialSystem {
    fn potential_at(&self, rho: f64) -> Vec<f64> {
        let mut v = vec![0.0; self.k * self.k];
        for (p, m) in &self.potential {
            let w = rho.powi(*p);
            for (x, y) in v.iter_mut().zip(m) {
                *x += w * y;
            }
        }
        v
    }
}

/// Reads off σ and V from an operator matrix already in radial normal form.
pub fn normal_form(m: &OpMatrix) -> Result<RadialSystem> {
    let k = m.n;
    let scale = m
        .entries
        .iter()
        .flat_map(|e| e.terms().map(|t| t.2.abs()))
        .fold(1.0, f64::max);
    let tol = 1e-9 * scale;
    let bad = |what: String| Error::InvalidParams(format!("operator not in radial normal form: {what}"));
    let mut sigma = None;
    let mut pots: std::collections::BTreeMap<i32, Vec<f64>> = Default::default();
    for i in 0..k {
        for j in 0..k {
            for (p, q, c) in m.get(i, j).terms() {
                match (i == j, p, q) {
                    (_, _, 0) => pots.entry(p).or_insert_with(|| vec![0.0; k * k])[i * k + j] += c,
                    (true, 0, 2) if (c + 1.0).abs() <= tol => {}
                    (true, -1, 1) => {
                        let sg = -c / 2.0;
                        match sigma {
                            None => sigma = Some(sg),
                            Some(s0) if (s0 - sg).abs() <= tol => {}
                            Some(s0) => return Err(bad(format!("σ = {s0} vs {sg}"))),
                        }
                    }
                    _ if c.abs() <= tol => {}
                    _ => return Err(bad(format!("entry ({i},{j}) term {c}·ρ^{p}∂^{q}"))),
                }
            }
        }
    }
    let potential: Vec<(i32, Vec<f64>)> = pots.into_iter().collect();
    for (_, v) in &potential {
        for i in 0..k {
            for j in 0..i {
                if (v[i * k + j] - v[j * k + i]).abs() > tol {
                    return Err(bad("potential not symmetric".into()));
                }
            }
        }
    }
    Ok(RadialSystem {
        k,
        sigma: sigma.unwrap_or(0.0),
        potential,
    })
}

fn scalar_op(c1: f64, c2: f64, shift: f64, s: f64) -> Op {
    let mut op = &Op::term(-1.0, 0, 2) + &Op::term(-2.0 * c1, -1, 1);
    op = &op + &Op::rho(c2, -2);
    op = &op + &Op::rho(s * s, 2);
    &op + &Op::scalar(shift * s)
}

fn scalar_system(c1: f64, c2: f64, shift: f64, s: f64, a: f64) -> Result<RadialSystem> {
    PParams::new(s, c1, c2, a)?;
    let mut m = OpMatrix::zeros(1);
    m.set(0, 0, scalar_op(c1, c2, shift, s).conjugate_power(a));
    normal_form(&m)
}

/// Degree-r block of `(D + sR)²` on `(fα, g dρ∧β)`, in the frame `(f, ρg)`.
pub fn cone_block_operator(n: i64, r: i64, mu: f64, s: f64, sign: Sign) -> OpMatrix {
    let sector = ConeSector::new(n as i32, r as i32, mu);
    sector
        .laplacian(s, sign.pm())
        .sub(&[1, 2])
        .conjugate_diag(&[0, -1])
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("s must be positive, got {s}")))
    }
}

impl FdProblem {
    pub fn s(&self) -> f64 {
        match *self {
            FdProblem::P { s, .. }
            | FdProblem::LengthOneBlock { s, .. }
            | FdProblem::LengthTwoBlock { s, .. }
            | FdProblem::ConeBlock { s, .. } => s,
        }
    }

    /// The reduced system with the core exponent factored out.
    pub fn reduce(&self) -> Result<RadialSystem> {
        match *self {
            FdProblem::P { c1, c2, s, a } => {
                check_s(s)?;
                let a = a.ok_or_else(|| Error::BoundaryExponentMissing("P".into()))?;
                scalar_system(c1, c2, 0.0, s, a)
            }
            FdProblem::LengthOneBlock {
                kappa,
                s,
                sign,
                degree,
                a,
            } => {
                check_s(s)?;
                if degree > 1 {
                    return Err(Error::DegreeOutOfRange { r: degree as i64, n: 1 });
                }
                let a = a.ok_or_else(|| Error::BoundaryExponentMissing("length-one block".into()))?;
                let b = length_one_blocks(kappa, sign, Ibc::Max)[degree];
                scalar_system(0.0, b.c2, b.shift, s, a)
                    .map_err(|e| Error::InadmissibleDomain(e.to_string()))
            }
            FdProblem::LengthTwoBlock {
                kappa,
                c,
                s,
                sign,
                index,
                a,
            } => {
                check_s(s)?;
                let blocks = length_two_blocks(kappa, c, sign)?;
                let b = blocks
                    .get(index)
                    .ok_or_else(|| Error::InvalidParams(format!("block index {index} not in 0..4")))?;
                scalar_system(0.0, b.c2, b.shift, s, a.unwrap_or(b.a))
                    .map_err(|e| Error::InadmissibleDomain(e.to_string()))
            }
            FdProblem::ConeBlock { n, r, mu, s, sign } => {
                check_s(s)?;
                if r < 1 || r > n - 1 {
                    return Err(Error::DegreeOutOfRange { r, n });
                }
                if !(mu > 0.0) {
                    return Err(Error::InvalidParams(format!("mu must be positive, got {mu}")));
                }
                let (_, a, _) = theta_constants(n, r, mu);
                normal_form(&cone_block_operator(n, r, mu, s, sign).conjugate_power(a))
            }
        }
    }
}

/// Lowest `count` eigenvalues from the closed-form ladders, for comparison.
pub fn closed_form_eigenvalues(problem: &FdProblem, count: usize) -> Result<Vec<f64>> {
    let ladder = |base: f64, s: f64| -> Vec<f64> {
        (0..count).map(|k| (base + 4.0 * k as f64) * s).collect()
    };
    match *problem {
        FdProblem::P { c1, c2, s, a } => {
            let a = a.ok_or_else(|| Error::BoundaryExponentMissing("P".into()))?;
            let p = PParams::new(s, c1, c2, a)?;
            Ok((0..count).map(|k| p_eigenvalue(k, &p)).collect())
        }
        FdProblem::LengthOneBlock {
            kappa,
            s,
            sign,
            degree,
            a,
        } => {
            let a = a.ok_or_else(|| Error::BoundaryExponentMissing("length-one block".into()))?;
            let blocks = length_one_blocks(kappa, sign, Ibc::Max);
            let b = blocks
                .get(degree)
                .ok_or(Error::DegreeOutOfRange { r: degree as i64, n: 1 })?;
            let b = ComplexBlock { a, ..*b };
            Ok(ladder(b.base(s)?, s))
        }
        FdProblem::LengthTwoBlock {
            kappa,
            c,
            s,
            sign,
            index,
            a,
        } => {
            let blocks = length_two_blocks(kappa, c, sign)?;
            let b = blocks
                .get(index)
                .ok_or_else(|| Error::InvalidParams(format!("block index {index} not in 0..4")))?;
            let b = ComplexBlock { a: a.unwrap_or(b.a), ..*b };
            Ok(ladder(b.base(s)?, s))
        }
        FdProblem::ConeBlock { n, r, mu, s, sign } => {
            let [_, _, x, y] = type345_blocks(mu, r, n, sign)?;
            let mut all = ladder(x.base(), s);
            all.extend(ladder(y.base(), s));
            all.sort_by(f64::total_cmp);
            all.truncate(count);
            Ok(all)
        }
    }
}

/// Symmetrized block-tridiagonal matrix: diagonal `k×k` blocks and scalar
/// multiples of the identity off the diagonal.
struct Discrete {
    k: usize,
    diag: Vec<Vec<f64>>,
    off: Vec<f64>,
}

fn int_pow(lo: f64, hi: f64, e: f64) -> f64 {
    if e.abs() < 1e-14 {
        (hi / lo).ln()
    } else {
        (hi.powf(e) - lo.powf(e)) / e
    }
}

fn discretize(sys: &RadialSystem, grid: &Grid) -> Result<Discrete> {
    let (n, h, k) = (grid.n, grid.h, sys.k);
    let q = 2.0 * sys.sigma + 1.0;
    if !(q > 0.0) {
        return Err(Error::InadmissibleDomain(format!("sigma = {}", sys.sigma)));
    }
    let centers = grid.centers();
    let mass: Vec<f64> = (0..n)
        .map(|j| ((j + 1) as f64 * h).powf(q) / q - (j as f64 * h).powf(q) / q)
        .collect();
    // transmissibility between consecutive centers, the last one to R
    let trans: Vec<f64> = (0..n)
        .map(|j| {
            let hi = if j + 1 < n { centers[j + 1] } else { grid.r };
            1.0 / int_pow(centers[j], hi, 1.0 - 2.0 * sys.sigma)
        })
        .collect();
    let mut diag = Vec::with_capacity(n);
    for j in 0..n {
        let left = if j > 0 { trans[j - 1] } else { 0.0 };
        let stiff = (left + trans[j]) / mass[j];
        let mut block = sys.potential_at(centers[j]);
        for i in 0..k {
            block[i * k + i] += stiff;
        }
        diag.push(block);
    }
    let off: Vec<f64> = (0..n - 1)
        .map(|j| -trans[j] / (mass[j].sqrt() * mass[j + 1].sqrt()))
        .collect();
    if diag.iter().flatten().chain(&off).any(|x| !x.is_finite()) {
        return Err(Error::Eigensolver("non-finite matrix entry".into()));
    }
    Ok(Discrete { k, diag, off })
}

fn inertia_2x2(p: f64, q: f64, r: f64) -> usize {
    let det = p * r - q * q;
    if det < 0.0 {
        1
    } else if p + r < 0.0 {
        2
    } else {
        0
    }
}

impl Discrete {
    /// Number of eigenvalues below `lam` by block LDLᵀ.
    fn count_below(&self, lam: f64) -> usize {
        let tiny = 1e-300;
        let mut count = 0;
        if self.k == 1 {
            let mut d = self.diag[0][0] - lam;
            for j in 0.. {
                if d == 0.0 {
                    d = -tiny;
                }
                if d < 0.0 {
                    count += 1;
                }
                if j + 1 == self.diag.len() {
                    break;
                }
                let b = self.off[j];
                d = self.diag[j + 1][0] - lam - b * b / d;
            }
            return count;
        }
        let mut prev: Option<[f64; 3]> = None;
        for (j, blk) in self.diag.iter().enumerate() {
            let (mut p, mut q, mut r) = (blk[0] - lam, 0.5 * (blk[1] + blk[2]), blk[3] - lam);
            if let Some([pp, pq, pr]) = prev {
                let b2 = self.off[j - 1] * self.off[j - 1];
                let det = pp * pr - pq * pq;
                p -= b2 * pr / det;
                q += b2 * pq / det;
                r -= b2 * pp / det;
            }
            if p * r - q * q == 0.0 {
                p -= tiny.max(p.abs() * 1e-15);
            }
            count += inertia_2x2(p, q, r);
            prev = Some([p, q, r]);
        }
        count
    }

    fn bounds(&self) -> (f64, f64) {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let k = self.k;
        for (j, blk) in self.diag.iter().enumerate() {
            let b = self.off.get(j).map_or(0.0, |x| x.abs())
                + if j > 0 { self.off[j - 1].abs() } else { 0.0 };
            for i in 0..k {
                let rest: f64 = (0..k).filter(|&c| c != i).map(|c| blk[i * k + c].abs()).sum();
                lo = lo.min(blk[i * k + i] - rest - b);
                hi = hi.max(blk[i * k + i] + rest + b);
            }
        }
        (lo, hi)
    }

    fn lowest(&self, count: usize) -> Result<Vec<f64>> {
        if count > self.diag.len() * self.k {
            return Err(Error::Eigensolver("more eigenvalues requested than unknowns".into()));
        }
        let (lo0, hi0) = self.bounds();
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let (mut lo, mut hi) = (lo0, hi0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if self.count_below(mid) > i {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-13 * hi.abs().max(lo.abs()).max(1.0) {
                    break;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        if out.iter().any(|x| !x.is_finite()) {
            return Err(Error::Eigensolver("bisection did not converge".into()));
        }
        Ok(out)
    }
}

/// Lowest `count` eigenvalues of the discretized problem.
pub fn discretize_and_solve(problem: &FdProblem, grid: &Grid, count: usize) -> Result<Vec<f64>> {
    if count == 0 || count > MAX_COUNT {
        return Err(Error::InvalidParams(format!("count must be in 1..={MAX_COUNT}, got {count}")));
    }
    let sys = problem.reduce()?;
    discretize(&sys, grid)?.lowest(count)
}

/// Relative size of the off-diagonal part of `Θ⁻¹AΘ`, where A is the
/// discretized cone block and `Θ = [[1, −c₊], [c₊, 1]]`, worst row over both
/// signs.
pub fn verify_theta_diagonalization(n: i64, r: i64, mu: f64, grid: &Grid) -> Result<f64> {
    let (c, _, _) = theta_constants(n, r, mu);
    let t = [1.0, -c, c, 1.0];
    let det = 1.0 + c * c;
    let ti = [1.0 / det, c / det, -c / det, 1.0 / det];
    let mul = |x: &[f64], y: &[f64]| {
        [
            x[0] * y[0] + x[1] * y[2],
            x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3],
        ]
    };
    let mut worst: f64 = 0.0;
    for sign in [Sign::Plus, Sign::Minus] {
        let sys = FdProblem::ConeBlock { n, r, mu, s: 1.0, sign }.reduce()?;
        let disc = discretize(&sys, grid)?;
        for (j, blk) in disc.diag.iter().enumerate() {
            let m = mul(&mul(&ti, blk), &t);
            let mut off = m[1].abs().max(m[2].abs());
            let mut dia = m[0].abs().max(m[3].abs());
            for b in [j.checked_sub(1).map(|i| disc.off[i]), disc.off.get(j).copied()]
                .into_iter()
                .flatten()
            {
                let mb = mul(&mul(&ti, &[b, 0.0, 0.0, b]), &t);
                off += mb[1].abs().max(mb[2].abs());
                dia += mb[0].abs().max(mb[3].abs());
            }
            worst = worst.max(off / dia.max(f64::MIN_POSITIVE));
        }
    }
    Ok(worst)
}

/// Residuals of `RD + DR ∓ (2k−n)` and `R² − ρ²` on the interior nodes, for
/// the sector through degree r (μ > 0) or the harmonic sector of degree
/// `min(r, n−1)` (μ = 0), maximized over both signs.
pub fn verify_clifford_identities(n: i64, r: i64, mu: f64, grid: &Grid) -> (f64, f64) {
    let deg = if mu == 0.0 { r.min(n - 1) } else { r };
    let sector = ConeSector::new(n as i32, deg as i32, mu);
    let nodes = grid.interior_nodes();
    let (mut ac, mut rs) = (0.0f64, 0.0f64);
    for pm in [1.0, -1.0] {
        ac = ac.max(sector.anticommutator_defect(pm).0.magnitude_on(&nodes));
        rs = rs.max(sector.r_squared_defect(pm).0.magnitude_on(&nodes));
    }
    (ac, rs)
}
