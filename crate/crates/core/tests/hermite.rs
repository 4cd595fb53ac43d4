use proptest::prelude::*;
use stratwitten::hermite::{
    admissible_as, chi_eval, chi_inner, concentration, eigen_residual, p_eigenvalue,
    stieltjes_from_moments, HermiteBasis, PParams,
};

/// Normalized Hermite function `H_n(x) e^{−x²/2} / √(2ⁿ n! √π)`.
fn hermite_function(n: usize, x: f64) -> f64 {
    let (mut h0, mut h1) = (std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp(), 0.0);
    if n == 0 {
        return h0;
    }
    h1 += std::f64::consts::SQRT_2 * x * h0;
    for k in 1..n {
        let k = k as f64;
        let h2 = (2.0 / (k + 1.0)).sqrt() * x * h1 - (k / (k + 1.0)).sqrt() * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

#[test]
fn chi_matches_even_hermite_functions() {
    let p = PParams::new(1.0, 0.0, 0.0, 0.0).unwrap();
    for k in 0..6 {
        for &x in &[0.0, 0.3, 1.1, 2.5, 4.0] {
            let got = chi_eval(k, x, &p).unwrap();
            let want = std::f64::consts::SQRT_2 * hermite_function(2 * k, x);
            assert!((got.abs() - want.abs()).abs() < 1e-12, "k={k} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn gaussian_concentration_is_erf() {
    let p = PParams::new(1.0, 0.0, 0.0, 0.0).unwrap();
    let s_list = [0.5, 1.0, 4.0, 25.0];
    let got = concentration(|r| if r < 1.0 { 1.0 } else { 0.0 }, &p, &s_list).unwrap();
    for (g, s) in got.iter().zip(s_list) {
        let want = statrs::function::erf::erf(s.sqrt());
        assert!((g - want).abs() < 1e-10, "s={s}: {g} vs {want}");
    }
}

#[test]
fn concentration_increases_with_s() {
    let p = PParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
    let s_list = [1.0, 4.0, 16.0, 64.0];
    let got = concentration(|r| if r < 0.5 { 1.0 } else { 0.0 }, &p, &s_list).unwrap();
    assert!(got.windows(2).all(|w| w[1] > w[0]));
    assert!(got[3] > 0.999);
}

#[test]
fn recurrence_agrees_with_moment_stieltjes() {
    for &sigma in &[-0.3, 0.0, 0.7, 2.0] {
        for &s in &[0.5, 1.0, 3.0] {
            let b = HermiteBasis::new(sigma, s, 12).unwrap();
            let st = stieltjes_from_moments(sigma, s, 12);
            for (k, ((a1, b1), (a2, b2))) in b.recurrence.iter().zip(&st).enumerate() {
                assert!(a2.abs() < 1e-8 && *a1 == 0.0, "α_{k}");
                assert!((b1 - b2).abs() < 1e-8 * b1.abs(), "β_{k}: {b1} vs {b2}");
            }
        }
    }
}

fn params() -> impl Strategy<Value = PParams> {
    (-1.0f64..3.0, -0.2f64..6.0, 0.2f64..8.0).prop_filter_map("no admissible root", |(c1, c2, s)| {
        PParams::all(s, c1, c2).ok()?.into_iter().next()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn admissible_roots_solve_indicial(c1 in -3.0f64..3.0, c2 in -2.0f64..10.0) {
        for (a, sigma) in admissible_as(c1, c2) {
            let res = a * a + (2.0 * c1 - 1.0) * a - c2;
            prop_assert!(res.abs() < 1e-10 * (1.0 + c2.abs() + a * a));
            prop_assert!((sigma - (a + c1)).abs() < 1e-12);
            prop_assert!(sigma > -0.5);
        }
    }

    #[test]
    fn eigenvalues_linear_in_s(p in params(), k in 0usize..20, t in 0.1f64..10.0) {
        let q = PParams::new(p.s * t, p.c1, p.c2, p.a).unwrap();
        let (l1, l2) = (p_eigenvalue(k, &p), p_eigenvalue(k, &q));
        prop_assert!((l2 - t * l1).abs() <= 1e-12 * l2.abs().max(1.0));
        prop_assert!((l1 - (4.0 * k as f64 + 1.0 + 2.0 * p.sigma) * p.s).abs() < 1e-12 * l1.abs().max(1.0));
    }

    #[test]
    fn chi_orthonormal(p in params()) {
        for j in 0..=8 {
            for k in j..=8 {
                let v = chi_inner(j, k, &p).unwrap();
                let want = if j == k { 1.0 } else { 0.0 };
                prop_assert!((v - want).abs() < 1e-9, "⟨χ{j},χ{k}⟩ = {v} for {p:?}");
            }
        }
    }

    #[test]
    fn chi_are_eigenfunctions(p in params()) {
        for k in 0..=4 {
            let r = eigen_residual(k, &p).unwrap();
            prop_assert!(r < 1e-6, "k={k} residual {r} for {p:?}");
        }
    }
}
