mod common;

use common::*;
use localsum_core::adapt::{adapt, is_adapted, varchenko_nu, AdaptError, Termination};
use localsum_core::corpus::default_corpus;
use localsum_core::newton::NewtonPolygon;
use localsum_core::scalar::rat_int;
use localsum_core::{parse_poly, QPoly};

fn height(f: &QPoly) -> Option<localsum_core::Rational> {
    match adapt(f) {
        Ok(r) => Some(r.height),
        Err(AdaptError::StepCap { .. } | AdaptError::ConditionViolation(_) | AdaptError::LinearTerm) => None,
        Err(e) => panic!("{f}: {e}"),
    }
}

#[test]
fn height_is_invariant_under_shears() {
    let mut r = rng(21);
    let mut compared = 0;
    for i in 0..100 {
        let f = if i % 2 == 0 { random_critical(&mut r, 5, 3) } else { random_branchy(&mut r) };
        let psi = random_shear(&mut r, 2);
        let g = f.shear_y(&psi).unwrap();
        let g = if i % 3 == 0 { g.swap_xy() } else { g };
        if let (Some(a), Some(b)) = (height(&f), height(&g)) {
            assert_eq!(a, b, "{f} vs {g}");
            compared += 1;
        }
    }
    assert!(compared >= 60, "only {compared} comparable pairs");
}

#[test]
fn distance_increases_along_traces_and_bounds_height() {
    let mut r = rng(22);
    for i in 0..100 {
        let f = if i % 2 == 0 { random_branchy(&mut r) } else { random_critical(&mut r, 6, 4) };
        let Ok(res) = adapt(&f) else { continue };
        let d0 = NewtonPolygon::new(&f).unwrap().newton_distance().clone();
        assert!(d0 <= res.height, "{f}");
        for s in &res.steps {
            assert!(s.d_after > s.d_before, "{f}");
        }
        for w in res.steps.windows(2) {
            assert!(w[1].exponent > w[0].exponent, "{f}");
            assert_eq!(w[0].d_after, w[1].d_before);
        }
        if res.terminated == Termination::Adapted {
            assert!(is_adapted(&res.final_poly).unwrap().adapted, "{f}");
            let d = NewtonPolygon::new(&res.final_poly).unwrap().newton_distance().clone();
            assert_eq!(d, res.height);
        }
    }
}

#[test]
fn corpus_heights_are_bracketed() {
    for e in default_corpus() {
        let f = &e.poly;
        let res = match adapt(f) {
            Ok(r) => r,
            Err(AdaptError::LinearTerm) => continue,
            Err(err) => panic!("{}: {err}", e.name),
        };
        let d = NewtonPolygon::new(f).unwrap().newton_distance().clone();
        let deg = f.deg_x().unwrap().max(f.deg_y().unwrap());
        assert!(d <= res.height && res.height <= rat_int(deg as i64), "{}", e.name);
        assert!(varchenko_nu(&res) <= 1);
    }
}

#[test]
fn adapted_inputs_take_no_steps() {
    for s in ["x^2 + y^2", "y^2 - x^3", "x*y", "(x^2+y^2)^3", "y^3 - x^5 + x^4*y"] {
        let f = parse_poly(s).unwrap();
        assert!(is_adapted(&f).unwrap().adapted, "{s}");
        let r = adapt(&f).unwrap();
        assert!(r.steps.is_empty(), "{s}");
        assert_eq!(&r.height, NewtonPolygon::new(&f).unwrap().newton_distance());
    }
}

#[test]
fn lines_need_one_step_and_become_powers() {
    for (s, h) in [("(y - x^2)^2", 2), ("(y + 3*x^3)^4", 4), ("(x - 2*y^2)^3", 3)] {
        let f = parse_poly(s).unwrap();
        let r = adapt(&f).unwrap();
        assert_eq!(r.steps.len(), 1, "{s}");
        assert_eq!(r.height, rat_int(h), "{s}");
    }
}
