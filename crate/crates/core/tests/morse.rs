use proptest::prelude::*;
use stratwitten::cone::assemble_cone_spectrum;
use stratwitten::morse::{counting_function, morse_check, nu_point, nu_total, weyl_fit};
use stratwitten::space::{local_model_kernel, ConeFactor, CriticalPointModel, LocalFactor, VertexTag};
use stratwitten::spheres::bundled_sphere;
use stratwitten::{Ibc, Sign};

fn vertex() -> LocalFactor {
    LocalFactor::Vertex(VertexTag::Vertex)
}

fn factor() -> impl Strategy<Value = LocalFactor> {
    prop_oneof![
        Just(vertex()),
        (1usize..=5)
            .prop_flat_map(|n| {
                (
                    Just(n),
                    proptest::collection::vec(0u64..3, n),
                    proptest::collection::vec(0u64..3, n),
                )
            })
            .prop_map(|(n, betti_min, betti_max)| LocalFactor::Cone(ConeFactor {
                n,
                betti_min,
                betti_max,
            })),
    ]
}

fn model() -> impl Strategy<Value = CriticalPointModel> {
    (0usize..3, 0usize..3, factor(), factor()).prop_map(|(m_plus, m_minus, plus, minus)| {
        CriticalPointModel {
            m_plus,
            m_minus,
            plus,
            minus,
        }
    })
}

fn ibcs() -> impl Strategy<Value = Ibc> {
    prop_oneof![Just(Ibc::Min), Just(Ibc::Max)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn nu_equals_model_kernel(cp in model(), ibc in ibcs()) {
        prop_assert_eq!(nu_point(&cp, ibc).unwrap(), local_model_kernel(&cp, ibc).unwrap());
    }

    #[test]
    fn nu_is_concentrated_in_dimension(cp in model(), ibc in ibcs()) {
        let nu = nu_point(&cp, ibc).unwrap();
        prop_assert_eq!(nu.len(), cp.dim() + 1);
        prop_assert!(nu[..cp.m_minus].iter().all(|&x| x == 0));
    }
}

#[test]
fn two_vertex_sphere() {
    let point = |m_minus| CriticalPointModel {
        m_plus: 2 - m_minus,
        m_minus,
        plus: vertex(),
        minus: vertex(),
    };
    for ibc in [Ibc::Min, Ibc::Max] {
        let nu = nu_total(&[point(0), point(2)], ibc).unwrap();
        assert_eq!(nu, vec![1, 0, 1]);
        let rep = morse_check(&[1, 0, 1], &nu);
        assert!(rep.all_hold());
        assert_eq!((rep.euler_lhs, rep.euler_rhs), (2, 2));
    }
}

#[test]
fn suspension_of_a_circle() {
    // cones at the poles: the vertex of c(S¹) attracting at one pole, repelling at the other
    let s1 = || {
        LocalFactor::Cone(ConeFactor {
            n: 2,
            betti_min: vec![1, 1],
            betti_max: vec![1, 1],
        })
    };
    let south = CriticalPointModel { m_plus: 0, m_minus: 0, plus: s1(), minus: vertex() };
    let north = CriticalPointModel { m_plus: 0, m_minus: 0, plus: vertex(), minus: s1() };
    let nu = nu_total(&[south, north], Ibc::Max).unwrap();
    assert_eq!(nu, vec![1, 0, 1]);
    assert!(morse_check(&[1, 0, 1], &nu).all_hold());
}

#[test]
fn weyl_exponent_of_the_plane() {
    let s1 = bundled_sphere(1).unwrap();
    let t = assemble_cone_spectrum(&s1, Sign::Plus, Ibc::Max, 1.0, 200.0).unwrap();
    let (theta, c) = weyl_fit(&t).unwrap();
    assert!((0.4..=0.6).contains(&theta), "θ̂ = {theta}");
    assert!(c > 0.0);
    // below 2.5: {0, 2, 2} in degree 0, {2, 2} in degree 1
    assert_eq!(counting_function(&t, 0.5), 1);
    assert_eq!(counting_function(&t, 2.5), 5);
}
