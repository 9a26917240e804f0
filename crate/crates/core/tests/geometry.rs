mod common;

use common::*;
use localsum_core::edge::{check_edge_lemma, d_tau_from_factors, edge_invariants, factor_all_edges, EdgeRole};
use localsum_core::newton::{Face, NewtonPolygon};
use localsum_core::poly::{polynomial_roots_in_y, squarefree_decompose_in_y};
use localsum_core::scalar::rat_int;
use localsum_core::{parse_poly, QPoly, QUniPoly, Rational};
use proptest::prelude::*;

fn arb_poly() -> impl Strategy<Value = QPoly> {
    prop::collection::vec(((0u32..6, 0u32..6), -5i64..=5), 0..7).prop_map(|terms| {
        let mut f = QPoly::zero();
        for ((j, k), c) in terms {
            f.add_term(j, k, rat_int(c));
        }
        f
    })
}

fn arb_small_poly() -> impl Strategy<Value = QPoly> {
    prop::collection::vec(((0u32..4, 0u32..4), -5i64..=5), 0..5).prop_map(|terms| {
        let mut f = QPoly::zero();
        for ((j, k), c) in terms {
            f.add_term(j, k, rat_int(c));
        }
        f
    })
}

fn arb_shear() -> impl Strategy<Value = QUniPoly> {
    prop::collection::vec(-3i64..=3, 0..4).prop_map(|cs| QUniPoly::from_coeffs(cs.into_iter().map(rat_int)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_round_trip(f in arb_poly()) {
        let printed = f.to_string();
        let g = parse_poly(&printed).unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(parse_poly(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn shears_compose_and_invert(f in arb_poly(), a in arb_shear(), b in arb_shear()) {
        let ab = f.shear_y(&a).unwrap().shear_y(&b).unwrap();
        prop_assert_eq!(&ab, &f.shear_y(&(&a + &b)).unwrap());
        prop_assert_eq!(f.shear_y(&a).unwrap().shear_y(&-&a).unwrap(), f.clone());
        prop_assert_eq!(f.shear_x(&a).unwrap().shear_x(&-&a).unwrap(), f);
    }

    #[test]
    fn squarefree_reconstructs(f in arb_small_poly(), g in arb_small_poly()) {
        let h = &(&f * &f) * &g;
        prop_assume!(!h.is_zero());
        let dec = squarefree_decompose_in_y(&h);
        prop_assert_eq!(dec.reconstruct(), h);
        for (p, _) in &dec.factors {
            let again = squarefree_decompose_in_y(p);
            prop_assert!(again.factors.iter().all(|(_, m)| *m == 1));
        }
    }
}

#[test]
fn polynomial_roots_substitute_to_zero() {
    let mut r = rng(11);
    for _ in 0..60 {
        let a = random_shear(&mut r, 3);
        let b = random_shear(&mut r, 2);
        let lin = |psi: &QUniPoly| &QPoly::y() - &QPoly::from_x_poly(psi);
        let f = &(&lin(&a) * &lin(&b)) * &(&QPoly::y() + &random_critical(&mut r, 4, 2));
        let roots = polynomial_roots_in_y(&f, 6);
        assert!(roots.contains(&a) && roots.contains(&b), "{f}");
        for root in roots {
            assert!(f.subs_y(&root).is_zero());
        }
    }
}

fn on_bisectrix(face: &Face) -> bool {
    match face {
        Face::Edge { left, right, .. } => left.0 == left.1 || right.0 == right.1,
        _ => false,
    }
}

#[test]
fn hull_and_principal_face_invariants() {
    let mut r = rng(5);
    for i in 0..200 {
        let f = if i % 2 == 0 { random_critical(&mut r, 8, 5) } else { random_branchy(&mut r) };
        let np = NewtonPolygon::new(&f).unwrap();
        let support = f.support();
        let v = np.vertices();
        assert!(v.iter().all(|p| support.contains(p)));
        assert!(v.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 > w[1].1));
        let d = np.newton_distance().clone();
        assert!(d > Rational::from_integer(0.into()));
        // every support point lies on or above every edge line
        for e in np.compact_edges() {
            if let Face::Edge { q, m, n, .. } = e {
                assert!(support.iter().all(|&(a, b)| q * a + m * b >= *n));
            }
        }
        match np.principal_face() {
            Face::Edge { q, m, n, .. } => assert_eq!(&d * Rational::from_integer((q + m).into()), rat_int(*n as i64)),
            Face::Vertex { point } => assert_eq!((rat_int(point.0 as i64), rat_int(point.1 as i64)), (d.clone(), d)),
            Face::Vertical { vertex } => assert_eq!(rat_int(vertex.0 as i64), d),
            Face::Horizontal { vertex } => assert_eq!(rat_int(vertex.1 as i64), d),
        }
    }
}

#[test]
fn edge_factorizations_reconstruct_and_obey_lemma() {
    let mut r = rng(7);
    for i in 0..200 {
        let f = if i % 2 == 0 { random_critical(&mut r, 8, 5) } else { random_branchy(&mut r) };
        let np = NewtonPolygon::new(&f).unwrap();
        let principal = np.principal_face().clone();
        let d = np.newton_distance().clone();
        for (face, fac) in factor_all_edges(&f, &np).unwrap() {
            let part = np.face_polynomial(&f, &face).unwrap();
            assert_eq!(fac.expand(), part);
            let inv = edge_invariants(&fac);
            assert_eq!(Some(d_tau_from_factors(&fac)), face.homogeneous_distance());
            assert_eq!(inv.d_tau, d_tau_from_factors(&fac));
            if face == principal {
                check_edge_lemma(&fac, EdgeRole::Principal).unwrap();
                for (mult, rational) in fac.root_multiplicities() {
                    if rat_int(mult as i64) > d {
                        assert!(rational);
                    }
                }
            } else {
                check_edge_lemma(&fac, EdgeRole::NonPrincipal).unwrap();
                assert!(inv.d_tau <= d);
                let big_m = rat_int(fac.big_m as i64);
                if on_bisectrix(&face) {
                    assert!(big_m <= inv.d_tau);
                } else {
                    assert!(big_m < inv.d_tau, "{f}: {face:?}");
                }
            }
        }
    }
}
