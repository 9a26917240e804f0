use std::collections::BTreeSet;


use super::factor::rational_roots;
use crate::{QPoly, QUniPoly, Rational};

/// All `r ∈ Q[x]` with `deg r ≤ degree_bound` and `f(x, r(x)) = 0`.
///
/// Coefficients are fixed one at a time: after substituting
/// `y = r_{<k} + x^k·y` and removing the largest power of `x`, the next
/// coefficient must be a rational root of the `x = 0` slice.
pub fn polynomial_roots_in_y(f: &QPoly, degree_bound: u32) -> Vec<QUniPoly> {
    assert!(!f.is_zero(), "roots of the zero polynomial");
    let mut found: BTreeSet<Vec<Rational>> = BTreeSet::new();
    search(f.clone(), QUniPoly::zero(), 0, degree_bound, &mut found);
    found
        .into_iter()
        .map(QUniPoly::from_coeffs)
        .filter(|r| f.subs_y(r).is_zero())
        .collect()
}

fn search(g: QPoly, prefix: QUniPoly, k: u32, bound: u32, found: &mut BTreeSet<Vec<Rational>>) {
    if g.terms().all(|((_, e), _)| e > 0) {
        found.insert(prefix.to_dense());
    }
    if k > bound {
        return;
    }
    let shift = g.terms().map(|((j, _), _)| j).min().unwrap_or(0);
    let h = g.map_exponents(|j, e| (j - shift, e));
    let slice = QUniPoly::from_terms(h.terms().filter(|((j, _), _)| *j == 0).map(|((_, e), c)| (e, c.clone())));
    for (c, _) in rational_roots(&slice) {
        let next = h
            .shear_y_capped(&QUniPoly::constant(c.clone()), u32::MAX)
            .expect("constant shear keeps degrees")
            .map_exponents(|j, e| (j + e, e));
        let mut p = prefix.clone();
        p.add_term(k, c);
        search(next, p, k + 1, bound, found);
    }
}
