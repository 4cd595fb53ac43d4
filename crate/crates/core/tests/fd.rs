use stratwitten::complexes::{length_one_blocks, length_two_blocks};
use stratwitten::cone::{type12_blocks, type345_blocks, ScalarBlock};
use stratwitten::fd::{
    discretize_and_solve, verify_clifford_identities, verify_theta_diagonalization, FdProblem,
    Grid,
};
use stratwitten::hermite::{p_eigenvalue, PParams};
use stratwitten::{Error, Ibc, Sign};

fn grid() -> Grid {
    Grid::new(10.0, 5e-3).unwrap()
}

fn assert_rel(got: &[f64], want: &[f64], tol: f64, what: &str) {
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol * w.abs().max(1.0), "{what}: {got:?} vs {want:?}");
    }
}

#[test]
fn p_benchmarks() {
    for (c1, c2) in [(0.0, 0.0), (1.0, 0.0), (1.5, 1.0), (0.5, 2.0)] {
        for p in PParams::all(1.0, c1, c2).unwrap() {
            let fd = discretize_and_solve(
                &FdProblem::P { c1, c2, s: 1.0, a: Some(p.a) },
                &grid(),
                5,
            )
            .unwrap();
            let want: Vec<f64> = (0..5).map(|k| p_eigenvalue(k, &p)).collect();
            assert_rel(&fd, &want, 1e-2, &format!("c1={c1} c2={c2} a={}", p.a));
        }
    }
}

#[test]
fn second_order_convergence() {
    let problem = FdProblem::P { c1: 0.0, c2: 0.0, s: 1.0, a: Some(0.0) };
    let err = |h: f64| {
        let ev = discretize_and_solve(&problem, &Grid::new(10.0, h).unwrap(), 3).unwrap();
        (ev[2] - 9.0).abs()
    };
    let (e1, e2) = (err(0.04), err(0.02));
    let ratio = e1 / e2;
    assert!((3.0..=5.0).contains(&ratio), "ratio {ratio} ({e1}, {e2})");
}

fn check_scalar(c1: f64, b: &ScalarBlock, what: &str) {
    let fd = discretize_and_solve(
        &FdProblem::P { c1, c2: b.c2, s: 1.0, a: Some(b.a) },
        &grid(),
        3,
    )
    .unwrap();
    let want: Vec<f64> = (0..3).map(|k| b.base() + 4.0 * k as f64 - b.shift).collect();
    assert_rel(&fd, &want, 2e-2, what);
}

#[test]
fn cone_ladders_agree_with_fd() {
    for n in 2..=5i64 {
        for r in 1..n {
            for mu in [0.5, 1.0, 2.5] {
                for sign in [Sign::Plus, Sign::Minus] {
                    let [t3, t4, x, y] = type345_blocks(mu, r, n, sign).unwrap();
                    check_scalar(t3.c1, &t3, "type 3");
                    check_scalar(t4.c1, &t4, "type 4");
                    let fd = discretize_and_solve(
                        &FdProblem::ConeBlock { n, r, mu, s: 1.0, sign },
                        &grid(),
                        4,
                    )
                    .unwrap();
                    let mut want: Vec<f64> = (0..4)
                        .flat_map(|k| [x.base() + 4.0 * k as f64, y.base() + 4.0 * k as f64])
                        .collect();
                    want.sort_by(f64::total_cmp);
                    want.truncate(4);
                    assert_rel(&fd, &want, 2e-2, &format!("X ⊕ Y n={n} r={r} μ={mu} {sign:?}"));
                }
            }
        }
    }
}

#[test]
fn harmonic_ladders_agree_with_fd() {
    for n in 1..=5i64 {
        for r in 0..n {
            for ibc in [Ibc::Min, Ibc::Max] {
                for b in type12_blocks(r, n, Sign::Plus, ibc).unwrap() {
                    check_scalar(b.c1, &b, &format!("type 1/2 n={n} r={r} {ibc:?}"));
                }
            }
        }
    }
}

#[test]
fn complex_blocks_agree_with_fd() {
    for kappa in [-1.2, -0.3, 0.0, 0.25, 0.9] {
        for sign in [Sign::Plus, Sign::Minus] {
            for ibc in [Ibc::Min, Ibc::Max] {
                for b in length_one_blocks(kappa, sign, ibc) {
                    let fd = discretize_and_solve(
                        &FdProblem::LengthOneBlock {
                            kappa,
                            s: 1.0,
                            sign,
                            degree: b.degree,
                            a: Some(b.a),
                        },
                        &grid(),
                        3,
                    )
                    .unwrap();
                    let base = b.base(1.0).unwrap();
                    let want: Vec<f64> = (0..3).map(|k| base + 4.0 * k as f64).collect();
                    assert_rel(&fd, &want, 2e-2, &format!("length one κ={kappa}"));
                }
            }
            for c in [0.5, 1.0, 2.0] {
                for (index, b) in length_two_blocks(kappa, c, sign).unwrap().iter().enumerate() {
                    let fd = discretize_and_solve(
                        &FdProblem::LengthTwoBlock { kappa, c, s: 1.0, sign, index, a: None },
                        &grid(),
                        3,
                    )
                    .unwrap();
                    let base = b.base(1.0).unwrap();
                    let want: Vec<f64> = (0..3).map(|k| base + 4.0 * k as f64).collect();
                    assert_rel(&fd, &want, 2e-2, &format!("length two κ={kappa} c={c} #{index}"));
                }
            }
        }
    }
}

#[test]
fn length_one_min_core_example() {
    let fd = discretize_and_solve(
        &FdProblem::LengthOneBlock { kappa: 0.0, s: 1.0, sign: Sign::Plus, degree: 0, a: Some(1.0) },
        &grid(),
        3,
    )
    .unwrap();
    assert_rel(&fd, &[2.0, 6.0, 10.0], 1e-2, "Δ₀ min core");
}

#[test]
fn scales_with_s() {
    let s = 4.0;
    let fd = discretize_and_solve(
        &FdProblem::ConeBlock { n: 2, r: 1, mu: 1.0, s, sign: Sign::Plus },
        &Grid::for_s(s, 2000).unwrap(),
        4,
    )
    .unwrap();
    assert_rel(&fd, &[2.0 * s, 6.0 * s, 6.0 * s, 10.0 * s], 2e-2, "s = 4");
}

#[test]
fn invalid_inputs() {
    assert!(matches!(Grid::new(10.0, 0.5), Err(Error::InvalidGrid(_))));
    let p = FdProblem::LengthOneBlock { kappa: 0.0, s: 1.0, sign: Sign::Plus, degree: 0, a: None };
    assert!(matches!(
        discretize_and_solve(&p, &grid(), 2),
        Err(Error::BoundaryExponentMissing(_))
    ));
    let p = FdProblem::P { c1: 0.0, c2: 0.0, s: 1.0, a: Some(0.0) };
    assert!(discretize_and_solve(&p, &grid(), 11).is_err());
    let p = FdProblem::ConeBlock { n: 2, r: 2, mu: 1.0, s: 1.0, sign: Sign::Plus };
    assert!(matches!(
        discretize_and_solve(&p, &grid(), 2),
        Err(Error::DegreeOutOfRange { .. })
    ));
}

#[test]
fn theta_and_clifford() {
    let g = grid();
    assert!(verify_theta_diagonalization(2, 1, 1.0, &g).unwrap() < 1e-8);
    assert!(verify_theta_diagonalization(3, 1, 50.0, &g).unwrap() < 1e-6);
    for (n, r, mu) in [(3, 1, 2.0), (4, 2, 0.3), (6, 5, 4.0), (3, 3, 0.0), (2, 0, 0.0)] {
        let (a, b) = verify_clifford_identities(n, r, mu, &g);
        assert!(a < 1e-10 && b < 1e-10, "n={n} r={r} μ={mu}: {a} {b}");
    }
}
