//! Squarefree decomposition in `y` over `Q(x)`, computed inside `Q[x][y]`
//! with primitive remainder sequences so every division is exact.


use crate::{QPoly, QUniPoly};

/// Polynomial in `y` with `Q[x]` coefficients, lowest power first, trimmed.
pub(crate) type YPoly = Vec<QUniPoly>;

/// `f = content(x) · ∏ factor^mult` with pairwise coprime squarefree factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub content: QUniPoly,
    pub factors: Vec<(QPoly, u32)>,
}

impl SquarefreeDecomposition {
    pub fn reconstruct(&self) -> QPoly {
        self.factors.iter().fold(QPoly::from_x_poly(&self.content), |acc, (g, m)| {
            let mut out = acc;
            for _ in 0..*m {
                out = &out * g;
            }
            out
        })
    }

    /// Factor of multiplicity exactly `m`, if any.
    pub fn factor_with_multiplicity(&self, m: u32) -> Option<&QPoly> {
        self.factors.iter().find(|(_, k)| *k == m).map(|(g, _)| g)
    }
}

pub fn squarefree_decompose_in_y(f: &QPoly) -> SquarefreeDecomposition {
    assert!(!f.is_zero(), "squarefree decomposition of the zero polynomial");
    let a = trim(f.y_coeffs());
    if a.len() <= 1 {
        return SquarefreeDecomposition { content: a[0].clone(), factors: Vec::new() };
    }
    let a = primitive_part(&a);
    let b = derivative(&a);
    let c = yp_gcd(&a, &b);
    let mut w = exact_div(&a, &c).expect("gcd divides its argument");
    let mut yv = exact_div(&b, &c).expect("gcd divides the derivative");
    let mut factors = Vec::new();
    let mut i = 1u32;
    while w.len() > 1 {
        let z = sub(&yv, &derivative(&w));
        let g = yp_gcd(&w, &z);
        if g.len() > 1 {
            factors.push((QPoly::from_y_coeffs(&g), i));
        }
        w = exact_div(&w, &g).expect("exact Yun step");
        yv = exact_div(&z, &g).expect("exact Yun step");
        i += 1;
    }
    let prod = factors.iter().fold(vec![QUniPoly::one()], |acc, (g, m)| {
        let gy = trim(g.y_coeffs());
        (0..*m).fold(acc, |p, _| mul(&p, &gy))
    });
    let rest = exact_div(&trim(f.y_coeffs()), &prod).expect("factors divide the input");
    assert_eq!(rest.len(), 1, "content must be free of y");
    SquarefreeDecomposition { content: rest[0].clone(), factors }
}

pub(crate) fn trim(mut v: YPoly) -> YPoly {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    if v.is_empty() {
        v.push(QUniPoly::zero());
    }
    v
}

fn is_zero(v: &YPoly) -> bool {
    v.iter().all(|c| c.is_zero())
}

fn sub(a: &YPoly, b: &YPoly) -> YPoly {
    let n = a.len().max(b.len());
    let z = QUniPoly::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn mul(a: &YPoly, b: &YPoly) -> YPoly {
    let mut out = vec![QUniPoly::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(ai * bj);
        }
    }
    trim(out)
}

fn derivative(a: &YPoly) -> YPoly {
    if a.len() <= 1 {
        return vec![QUniPoly::zero()];
    }
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&crate::scalar::rat_int(k as i64)))
            .collect(),
    )
}

fn content(a: &YPoly) -> QUniPoly {
    a.iter().fold(QUniPoly::zero(), |g, c| g.gcd(c))
}

/// Divides out the `Q[x]` content and normalizes the leading coefficient.
fn primitive_part(a: &YPoly) -> YPoly {
    if is_zero(a) {
        return a.clone();
    }
    let c = content(a);
    let mut out: YPoly = a.iter().map(|ai| ai.div_rem(&c).0).collect();
    let lc = out.last().expect("nonempty").leading_coeff();
    for ai in out.iter_mut() {
        *ai = ai.scale(&(num_traits::one::<crate::Rational>() / lc.clone()));
    }
    trim(out)
}

/// `lc(b)^(deg a - deg b + 1) · a mod b`.
fn prem(a: &YPoly, b: &YPoly) -> YPoly {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a.clone();
    if r.len() <= db {
        return r;
    }
    let mut pending = (r.len() - db) as u32;
    while r.len() > db && !is_zero(&r) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: YPoly = r.iter().map(|c| c * &lb).collect();
        for (i, bi) in b.iter().enumerate() {
            next[i + shift] = &next[i + shift] - &(bi * &lr);
        }
        next.pop();
        r = trim(next);
        pending -= 1;
    }
    if pending > 0 {
        let f = lb.pow(pending);
        r = r.iter().map(|c| c * &f).collect();
    }
    r
}

fn div_scalar(a: &YPoly, c: &QUniPoly) -> YPoly {
    a.iter()
        .map(|ai| {
            let (q, r) = ai.div_rem(c);
            debug_assert!(r.is_zero(), "subresultant division is exact");
            q
        })
        .collect()
}

/// Normalized primitive gcd in `y`; returns `[1]` when coprime over `Q(x)`.
///
/// Subresultant remainder sequence: every scalar division is exact, so no
/// content has to be taken until the end.
pub(crate) fn yp_gcd(a: &YPoly, b: &YPoly) -> YPoly {
    let (mut u, mut v) = (primitive_part(&trim(a.clone())), primitive_part(&trim(b.clone())));
    if is_zero(&u) {
        return v;
    }
    if is_zero(&v) {
        return u;
    }
    if u.len() < v.len() {
        std::mem::swap(&mut u, &mut v);
    }
    let (mut g, mut h) = (QUniPoly::one(), QUniPoly::one());
    loop {
        if v.len() == 1 {
            return vec![QUniPoly::one()];
        }
        let delta = (u.len() - v.len()) as u32;
        let r = prem(&u, &v);
        if is_zero(&r) {
            return primitive_part(&v);
        }
        u = v;
        v = div_scalar(&r, &(&g * &h.pow(delta)));
        g = u.last().expect("nonempty").clone();
        h = if delta == 0 {
            h
        } else {
            let (q, rem) = g.pow(delta).div_rem(&h.pow(delta - 1));
            debug_assert!(rem.is_zero());
            q
        };
    }
}

/// Exact quotient in `Q[x][y]`, `None` if `b` does not divide `a` there.
fn exact_div(a: &YPoly, b: &YPoly) -> Option<YPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = trim(a.clone());
    if r.len() <= db {
        return if is_zero(&r) { Some(vec![QUniPoly::zero()]) } else { None };
    }
    let mut q = vec![QUniPoly::zero(); r.len() - db];
    while !is_zero(&r) {
        if r.len() <= db {
            return None;
        }
        let dr = r.len() - 1;
        let (t, rem) = r[dr].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        let shift = dr - db;
        for (i, bi) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(bi * &t);
        }
        q[shift] = t;
        debug_assert!(r[dr].is_zero());
        r = trim(r);
        if r.len() - 1 == dr && !r[dr].is_zero() {
            return None;
        }
    }
    Some(trim(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Axis};

    fn check(s: &str) -> SquarefreeDecomposition {
        let f = parse_poly(s).unwrap();
        let d = squarefree_decompose_in_y(&f);
        assert_eq!(d.reconstruct(), f, "{s}");
        for (g, _) in &d.factors {
            let gy = trim(g.y_coeffs());
            let dg = trim(g.partial_derivative(Axis::Y, 1).y_coeffs());
            assert_eq!(yp_gcd(&gy, &dg).len(), 1, "{g} not squarefree");
        }
        d
    }

    #[test]
    fn spec_examples() {
        let d = check("(y-x^2)^3*(y+x^2)");
        assert_eq!(
            d.factors,
            vec![(parse_poly("y+x^2").unwrap(), 1), (parse_poly("y-x^2").unwrap(), 3)]
        );
        let d = check("y^2 + x^2");
        assert_eq!(d.factors, vec![(parse_poly("y^2+x^2").unwrap(), 1)]);
        let d = check("(y^2-x^2-x^3)^2");
        assert_eq!(d.factors, vec![(parse_poly("y^2-x^2-x^3").unwrap(), 2)]);
    }

    #[test]
    fn contents_and_x_only() {
        let d = check("x^3*(x+1)*(y-x)^2*(2*y+x^2)");
        assert_eq!(d.factors.len(), 2);
        assert_eq!(d.content.degree(), Some(4));
        let d = check("x^2 + 1");
        assert!(d.factors.is_empty());
        check("y^6 - 3*x^2*y^4 + 3*x^4*y^2 - x^6");
        check("(x*y + 1)^3*(y^2 - x)^2*(y - 5/2)");
    }
}
