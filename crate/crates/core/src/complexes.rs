//! The two model elliptic complexes on ℝ₊.
//!
//! Length one: `d = d/dρ − κρ⁻¹ ± sρ` with
//! `Δ₀ = H + κ(κ−1)ρ⁻² ∓ s(1+2κ)` and `Δ₁ = H + κ(κ+1)ρ⁻² ± s(1−2κ)`.
//!
//! Length two, with `t = (1−c²)/(1+c²)`:
//! `Δ₀ = H + κ(κ+1)ρ⁻² ∓ s(2 + t(1+2κ))`,
//! `Δ₁,₁ = H + κ(κ−1)ρ⁻² ∓ s·t(1+2κ)`,
//! `Δ₁,₂ = H + (κ+1)(κ+2)ρ⁻² ∓ s·t(1+2κ)`,
//! `Δ₂ = H + κ(κ+1)ρ⁻² ± s(2 − t(1+2κ))`.

use crate::error::{Error, Result};
use crate::hermite::{p_eigenvalue, PParams};
use crate::spectrum::{fmt_num, Branch, EigLadder, Ibc, Sign, SpectrumTable};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoreTag {
    E1,
    E2,
    F1,
    F2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainKind {
    UniqueIbc,
    MinMaxDistinct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainClass {
    pub kind: DomainKind,
    pub core_min: CoreTag,
    pub core_max: CoreTag,
}

impl DomainClass {
    pub fn core(&self, ibc: Ibc) -> CoreTag {
        match ibc {
            Ibc::Min => self.core_min,
            Ibc::Max => self.core_max,
        }
    }
}

pub fn classify_length_one(kappa: f64) -> DomainClass {
    if kappa >= 0.5 {
        DomainClass {
            kind: DomainKind::UniqueIbc,
            core_min: CoreTag::E1,
            core_max: CoreTag::E1,
        }
    } else if kappa <= -0.5 {
        DomainClass {
            kind: DomainKind::UniqueIbc,
            core_min: CoreTag::E2,
            core_max: CoreTag::E2,
        }
    } else {
        DomainClass {
            kind: DomainKind::MinMaxDistinct,
            core_min: CoreTag::E2,
            core_max: CoreTag::E1,
        }
    }
}

/// One scalar block `H + c₂ρ⁻² + shift·s` on the `ρ^a` core.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarBlock {
    pub degree: usize,
    pub c2: f64,
    pub a: f64,
    pub shift: f64,
    pub branch: Branch,
}

impl ScalarBlock {
    /// Lowest eigenvalue divided by s.
    pub fn base(&self, s: f64) -> Result<f64> {
        let p = PParams::new(s, 0.0, self.c2, self.a)
            .map_err(|e| Error::InadmissibleDomain(e.to_string()))?;
        Ok(p_eigenvalue(0, &p) / s + self.shift)
    }

    fn ladder(&self, s: f64) -> Result<EigLadder> {
        let base = self.base(s)?;
        Ok(EigLadder::new(
            base,
            self.degree,
            1,
            self.branch,
            format!("4k+{}", fmt_num(base)),
        ))
    }
}

/// Scalar blocks of the length-one complex for the requested boundary condition.
pub fn length_one_blocks(kappa: f64, sign: Sign, ibc: Ibc) -> [ScalarBlock; 2] {
    let pm = sign.pm();
    let (a0, a1) = match classify_length_one(kappa).core(ibc) {
        CoreTag::E1 => (kappa, 1.0 + kappa),
        _ => (1.0 - kappa, -kappa),
    };
    [
        ScalarBlock {
            degree: 0,
            c2: kappa * (kappa - 1.0),
            a: a0,
            shift: -pm * (1.0 + 2.0 * kappa),
            branch: Branch::L1Deg0,
        },
        ScalarBlock {
            degree: 1,
            c2: kappa * (kappa + 1.0),
            a: a1,
            shift: pm * (1.0 - 2.0 * kappa),
            branch: Branch::L1Deg1,
        },
    ]
}

pub fn spectrum_length_one(
    kappa: f64,
    s: f64,
    sign: Sign,
    ibc: Ibc,
    cutoff: f64,
) -> Result<SpectrumTable> {
    let ladders = length_one_blocks(kappa, sign, ibc)
        .iter()
        .map(|b| b.ladder(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumTable::from_ladders(ladders, 2, s, cutoff))
}

/// Scalar blocks `Δ₀, Δ₁,₁, Δ₁,₂, Δ₂` of the length-two complex.
pub fn length_two_blocks(kappa: f64, c: f64, sign: Sign) -> Result<[ScalarBlock; 4]> {
    if (kappa + 0.5).abs() < 1e-12 {
        return Err(Error::KappaMinusHalf);
    }
    if !(c > 0.0) {
        return Err(Error::InvalidParams(format!("c must be positive, got {c}")));
    }
    let pm = sign.pm();
    let t = (1.0 - c * c) / (1.0 + c * c);
    let e = t * (1.0 + 2.0 * kappa);
    let f1 = kappa > -0.5;
    let pick = |x: f64, y: f64| if f1 { x } else { y };
    Ok([
        ScalarBlock {
            degree: 0,
            c2: kappa * (kappa + 1.0),
            a: pick(1.0 + kappa, -kappa),
            shift: -pm * (2.0 + e),
            branch: Branch::L2Deg0,
        },
        ScalarBlock {
            degree: 1,
            c2: kappa * (kappa - 1.0),
            a: pick(kappa, 1.0 - kappa),
            shift: -pm * e,
            branch: Branch::L2Deg11,
        },
        ScalarBlock {
            degree: 1,
            c2: (kappa + 1.0) * (kappa + 2.0),
            a: pick(2.0 + kappa, -1.0 - kappa),
            shift: -pm * e,
            branch: Branch::L2Deg12,
        },
        ScalarBlock {
            degree: 2,
            c2: kappa * (kappa + 1.0),
            a: pick(1.0 + kappa, -kappa),
            shift: pm * (2.0 - e),
            branch: Branch::L2Deg2,
        },
    ])
}

pub fn spectrum_length_two(
    kappa: f64,
    c: f64,
    s: f64,
    sign: Sign,
    cutoff: f64,
) -> Result<SpectrumTable> {
    let ladders = length_two_blocks(kappa, c, sign)?
        .iter()
        .map(|b| b.ladder(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumTable::from_ladders(ladders, 3, s, cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg(t: &SpectrumTable, r: usize) -> Vec<f64> {
        t.expanded(r)
    }

    #[test]
    fn classification() {
        assert_eq!(classify_length_one(0.0).kind, DomainKind::MinMaxDistinct);
        assert_eq!(classify_length_one(0.0).core_min, CoreTag::E2);
        assert_eq!(classify_length_one(0.0).core_max, CoreTag::E1);
        assert_eq!(classify_length_one(2.0).core_min, CoreTag::E1);
        assert_eq!(classify_length_one(-0.5).kind, DomainKind::UniqueIbc);
        assert_eq!(classify_length_one(-0.5).core_max, CoreTag::E2);
        assert_eq!(classify_length_one(0.5).core_max, CoreTag::E1);
    }

    #[test]
    fn length_one_examples() {
        let t = spectrum_length_one(0.0, 1.0, Sign::Plus, Ibc::Max, 12.0).unwrap();
        assert_eq!(deg(&t, 0), vec![0.0, 4.0, 8.0]);
        assert_eq!(deg(&t, 1), vec![4.0, 8.0]);
        let t = spectrum_length_one(0.0, 1.0, Sign::Plus, Ibc::Min, 12.0).unwrap();
        assert_eq!(deg(&t, 0), vec![2.0, 6.0, 10.0]);
        assert_eq!(deg(&t, 1), vec![2.0, 6.0, 10.0]);
    }

    #[test]
    fn length_two_kappa_zero() {
        let t = spectrum_length_two(0.0, 1.0, 1.0, Sign::Plus, 12.0).unwrap();
        assert_eq!(deg(&t, 0), vec![1.0, 5.0, 9.0]);
        assert_eq!(deg(&t, 2), vec![5.0, 9.0]);
        assert_eq!(deg(&t, 1), vec![1.0, 5.0, 5.0, 9.0, 9.0]);
        assert_eq!(t.kernel_dims, vec![0, 0, 0]);
    }

    #[test]
    fn kappa_minus_half_rejected() {
        assert_eq!(
            spectrum_length_two(-0.5, 1.0, 1.0, Sign::Plus, 10.0),
            Err(Error::KappaMinusHalf)
        );
    }
}
