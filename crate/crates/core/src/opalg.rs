//! Exact algebra of ordinary differential operators `Σ c·ρ^p·(d/dρ)^q` with
//! integer p, composed by the Leibniz rule, and 2×2 / 4×4 matrices of them.
//!
//! Used to build the radial pieces of d, δ, R on the sectors of a cone, and to
//! check identities between them symbolically.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// `Σ c·ρ^p·∂^q`, keyed by `(p, q)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Op {
    terms: BTreeMap<(i32, u32), f64>,
}

fn falling(p: i32, j: u32) -> f64 {
    (0..j as i32).map(|i| (p - i) as f64).product()
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl Op {
    pub fn zero() -> Op {
        Op::default()
    }

    pub fn term(c: f64, p: i32, q: u32) -> Op {
        let mut o = Op::zero();
        o.push(c, p, q);
        o
    }

    /// Multiplication by `c`.
    pub fn scalar(c: f64) -> Op {
        Op::term(c, 0, 0)
    }

    /// Multiplication by `c·ρ^p`.
    pub fn rho(c: f64, p: i32) -> Op {
        Op::term(c, p, 0)
    }

    /// `d/dρ`.
    pub fn d() -> Op {
        Op::term(1.0, 0, 1)
    }

    fn push(&mut self, c: f64, p: i32, q: u32) {
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry((p, q)).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&(p, q));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, u32, f64)> + '_ {
        self.terms.iter().map(|(&(p, q), &c)| (p, q, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: f64) -> Op {
        let mut o = Op::zero();
        for (p, q, c) in self.terms() {
            o.push(k * c, p, q);
        }
        o
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Op) -> Op {
        let mut o = Op::zero();
        for (p, q, c) in self.terms() {
            for (p2, q2, c2) in other.terms() {
                for j in 0..=q {
                    let k = c * c2 * binom(q, j) * falling(p2, j);
                    o.push(k, p + p2 - j as i32, q - j + q2);
                }
            }
        }
        o
    }

    /// `ρ^{−a} ∘ self ∘ ρ^{a}` for real a.
    pub fn conjugate_power(&self, a: f64) -> Op {
        let mut o = Op::zero();
        for (p, q, c) in self.terms() {
            for j in 0..=q {
                let f: f64 = (0..j).map(|i| a - i as f64).product();
                o.push(c * binom(q, j) * f, p - j as i32, q - j);
            }
        }
        o
    }

    /// Formal transpose in `L²(dρ)`: `(cρ^p∂^q)ᵗ = (−∂)^q ∘ cρ^p`.
    pub fn transpose(&self) -> Op {
        let mut o = Op::zero();
        for (p, q, c) in self.terms() {
            let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
            let dq = Op::term(sign, 0, q);
            o = &o + &dq.compose(&Op::rho(c, p));
        }
        o
    }

    /// `max_j Σ |c| ρ_j^p` over `nodes`.
    pub fn magnitude_on(&self, nodes: &[f64]) -> f64 {
        nodes
            .iter()
            .map(|&r| self.terms().fold(0.0, |acc, (p, _, c)| acc + c.abs() * r.powi(p)))
            .fold(0.0, f64::max)
    }
}

impl Add for &Op {
    type Output = Op;
    fn add(self, rhs: &Op) -> Op {
        let mut o = self.clone();
        for (p, q, c) in rhs.terms() {
            o.push(c, p, q);
        }
        o
    }
}

impl Sub for &Op {
    type Output = Op;
    fn sub(self, rhs: &Op) -> Op {
        self + &rhs.scale(-1.0)
    }
}

impl Neg for &Op {
    type Output = Op;
    fn neg(self) -> Op {
        self.scale(-1.0)
    }
}

impl Mul for &Op {
    type Output = Op;
    fn mul(self, rhs: &Op) -> Op {
        self.compose(rhs)
    }
}

/// Square matrix of operators.
#[derive(Debug, Clone, PartialEq)]
pub struct OpMatrix {
    pub n: usize,
    pub entries: Vec<Op>,
}

impl OpMatrix {
    pub fn zeros(n: usize) -> OpMatrix {
        OpMatrix {
            n,
            entries: vec![Op::zero(); n * n],
        }
    }

    /// `diag(values)` as multiplication operators.
    pub fn diag(values: &[f64]) -> OpMatrix {
        let mut m = OpMatrix::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Op::scalar(v));
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Op {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, op: Op) {
        self.entries[i * self.n + j] = op;
    }

    pub fn add_at(&mut self, i: usize, j: usize, op: &Op) {
        let k = i * self.n + j;
        self.entries[k] = &self.entries[k] + op;
    }

    pub fn scale(&self, k: f64) -> OpMatrix {
        OpMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e.scale(k)).collect(),
        }
    }

    /// Adjoint for the weights `ρ^{w_i}` on component i:
    /// `(A*)_{ij} = ρ^{−w_i} (A_{ji})ᵗ ρ^{w_j}`.
    pub fn adjoint(&self, weights: &[i32]) -> OpMatrix {
        let mut m = OpMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let t = self.get(j, i).transpose();
                let op = Op::rho(1.0, -weights[i])
                    .compose(&t)
                    .compose(&Op::rho(1.0, weights[j]));
                m.set(i, j, op);
            }
        }
        m
    }

    /// Principal submatrix on `idx`.
    pub fn sub(&self, idx: &[usize]) -> OpMatrix {
        let mut m = OpMatrix::zeros(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// `diag(ρ^{−e_i}) · self · diag(ρ^{e_j})` for integer exponents.
    pub fn conjugate_diag(&self, e: &[i32]) -> OpMatrix {
        let mut m = OpMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let op = Op::rho(1.0, -e[i])
                    .compose(self.get(i, j))
                    .compose(&Op::rho(1.0, e[j]));
                m.set(i, j, op);
            }
        }
        m
    }

    pub fn conjugate_power(&self, a: f64) -> OpMatrix {
        OpMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e.conjugate_power(a)).collect(),
        }
    }

    /// Largest entry magnitude on `nodes`.
    pub fn magnitude_on(&self, nodes: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|e| e.magnitude_on(nodes))
            .fold(0.0, f64::max)
    }
}

impl Add for &OpMatrix {
    type Output = OpMatrix;
    fn add(self, rhs: &OpMatrix) -> OpMatrix {
        OpMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &OpMatrix {
    type Output = OpMatrix;
    fn sub(self, rhs: &OpMatrix) -> OpMatrix {
        self + &rhs.scale(-1.0)
    }
}

impl Mul for &OpMatrix {
    type Output = OpMatrix;
    fn mul(self, rhs: &OpMatrix) -> OpMatrix {
        let n = self.n;
        let mut m = OpMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Op::zero();
                for k in 0..n {
                    acc = &acc + &(self.get(i, k) * rhs.get(k, j));
                }
                m.set(i, j, acc);
            }
        }
        m
    }
}

/// Radial operators on one sector of forms on the cone `N × ℝ₊`, dim n.
///
/// With μ > 0 the components are `f β`, `f α`, `f dρ∧β`, `f dρ∧α` where
/// `d̃β = μα`, `δ̃α = μβ`, deg α = r. With μ = 0 the components are `f γ`,
/// `f dρ∧γ` for a harmonic γ of degree r.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSector {
    pub n: i32,
    pub r: i32,
    pub mu: f64,
    /// Form degree of each component.
    pub degrees: Vec<i32>,
    /// Exponent of the radial L² weight of each component.
    pub weights: Vec<i32>,
    pub d: OpMatrix,
    pub delta: OpMatrix,
    /// `R` for the sign `+`; the `−` sign is its negative.
    pub r_plus: OpMatrix,
}

impl ConeSector {
    pub fn new(n: i32, r: i32, mu: f64) -> ConeSector {
        let dr = Op::d();
        let rho = Op::rho(1.0, 1);
        if mu == 0.0 {
            // components: γ (deg r), dρ∧γ (deg r+1)
            let mut d = OpMatrix::zeros(2);
            d.set(1, 0, dr.clone());
            let mut delta = OpMatrix::zeros(2);
            delta.set(0, 1, &(-&dr) - &Op::rho((n - 2 * r - 1) as f64, -1));
            let mut rp = OpMatrix::zeros(2);
            rp.set(0, 1, rho.clone());
            rp.set(1, 0, rho);
            return ConeSector {
                n,
                r,
                mu,
                degrees: vec![r, r + 1],
                weights: vec![n - 2 * r - 1, n - 2 * r - 1],
                d,
                delta,
                r_plus: rp,
            };
        }
        // components: β (r−1), α (r), dρ∧β (r), dρ∧α (r+1)
        let mut d = OpMatrix::zeros(4);
        d.set(1, 0, Op::scalar(mu));
        d.set(2, 0, dr.clone());
        d.set(3, 1, dr.clone());
        d.set(3, 2, Op::scalar(-mu));
        let mut delta = OpMatrix::zeros(4);
        delta.set(0, 1, Op::rho(mu, -2));
        delta.set(0, 2, &(-&dr) - &Op::rho((n - 2 * r + 1) as f64, -1));
        delta.set(1, 3, &(-&dr) - &Op::rho((n - 2 * r - 1) as f64, -1));
        delta.set(2, 3, Op::rho(-mu, -2));
        let mut rp = OpMatrix::zeros(4);
        rp.set(2, 0, rho.clone());
        rp.set(0, 2, rho.clone());
        rp.set(3, 1, rho.clone());
        rp.set(1, 3, rho);
        ConeSector {
            n,
            r,
            mu,
            degrees: vec![r - 1, r, r, r + 1],
            weights: vec![n - 2 * r + 1, n - 2 * r - 1, n - 2 * r + 1, n - 2 * r - 1],
            d,
            delta,
            r_plus: rp,
        }
    }

    pub fn r_op(&self, pm: f64) -> OpMatrix {
        self.r_plus.scale(pm)
    }

    /// `D = d + δ`.
    pub fn dirac(&self) -> OpMatrix {
        &self.d + &self.delta
    }

    /// `Δ_s = (D + sR)²`.
    pub fn laplacian(&self, s: f64, pm: f64) -> OpMatrix {
        let ds = &self.dirac() + &self.r_op(pm).scale(s);
        &ds * &ds
    }

    /// `RD + DR ∓ (2k − n)` with k the degree of each component.
    pub fn anticommutator_defect(&self, pm: f64) -> (OpMatrix, OpMatrix) {
        let r = self.r_op(pm);
        let dd = self.dirac();
        let ac = &(&r * &dd) + &(&dd * &r);
        let expect: Vec<f64> = self
            .degrees
            .iter()
            .map(|&k| pm * (2 * k - self.n) as f64)
            .collect();
        (&ac - &OpMatrix::diag(&expect), ac)
    }

    /// `R² − ρ²`.
    pub fn r_squared_defect(&self, pm: f64) -> (OpMatrix, OpMatrix) {
        let r = self.r_op(pm);
        let r2 = &r * &r;
        let mut rho2 = OpMatrix::zeros(r.n);
        for i in 0..r.n {
            rho2.set(i, i, Op::rho(1.0, 2));
        }
        (&r2 - &rho2, r2)
    }
}

/// `H = −∂² + s²ρ²`.
pub fn harmonic_oscillator(s: f64) -> Op {
    &Op::term(-1.0, 0, 2) + &Op::rho(s * s, 2)
}
