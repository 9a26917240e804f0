//! Univariate factorization over `Q`: squarefree split, rational roots, and
//! Kronecker's method for the remaining nonlinear factors.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::factor_bigint;
use crate::scalar::denominator_lcm;
use crate::{QUniPoly, Rational};

/// Interpolation candidates tried per factor degree before giving up.
pub const KRONECKER_BUDGET: u64 = 2_000_000;

/// `p = leading · ∏ factor^mult` with monic factors. Factors of degree ≥ 4
/// that Kronecker's method could not settle within budget are kept whole and
/// flag `certified = false`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivarFactorization {
    pub leading: Rational,
    pub factors: Vec<(QUniPoly, u32)>,
    pub certified: bool,
}

impl UnivarFactorization {
    pub fn reconstruct(&self) -> QUniPoly {
        self.factors.iter().fold(QUniPoly::constant(self.leading.clone()), |acc, (g, m)| &acc * &g.pow(*m))
    }
}

/// Integer coefficients with unit content, together with the rational
/// factor `c` such that `p = c · prim`. The leading coefficient is positive.
pub fn primitive_integer(p: &QUniPoly) -> (Vec<BigInt>, Rational) {
    let dense = p.to_dense();
    if dense.is_empty() {
        return (Vec::new(), Rational::zero());
    }
    let l = denominator_lcm(dense.iter());
    let ints: Vec<BigInt> = dense.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if ints.last().expect("nonzero").is_negative() {
        g = -g;
    }
    let prim: Vec<BigInt> = ints.iter().map(|c| c / &g).collect();
    (prim, Rational::new(g, l))
}

pub fn from_integer_coeffs(c: &[BigInt]) -> QUniPoly {
    QUniPoly::from_coeffs(c.iter().map(|v| Rational::from_integer(v.clone())))
}

/// Monic squarefree factors with multiplicities (Yun).
pub fn squarefree_univar(p: &QUniPoly) -> Vec<(QUniPoly, u32)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let dp = p.derivative();
    let c = p.gcd(&dp);
    let mut w = p.div_rem(&c).0.make_monic();
    let mut y = dp.div_rem(&c).0.scale(&(Rational::one() / p.leading_coeff()));
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let z = &y - &w.derivative();
        let g = w.gcd(&z);
        if g.degree().unwrap_or(0) > 0 {
            out.push((g.clone(), i));
        }
        w = w.div_rem(&g).0;
        y = z.div_rem(&g).0;
        i += 1;
    }
    out
}

/// Distinct rational roots of a nonzero `p` with their multiplicities,
/// sorted ascending.
pub fn rational_roots(p: &QUniPoly) -> Vec<(Rational, u32)> {
    let mut out = Vec::new();
    for (g, m) in squarefree_univar(p) {
        for r in rational_roots_squarefree(&g) {
            out.push((r, m));
        }
    }
    out.sort();
    out
}

fn rational_roots_squarefree(p: &QUniPoly) -> Vec<Rational> {
    let mut roots = Vec::new();
    let mut q = p.clone();
    if q.coeff(0).is_zero() {
        roots.push(Rational::zero());
        q = q.div_rem(&QUniPoly::var()).0;
    }
    if q.degree().unwrap_or(0) == 0 {
        return roots;
    }
    let (ints, _) = primitive_integer(&q);
    let lead = ints.last().expect("nonzero").clone();
    let tail = ints[0].clone();
    let num_divs = factor_bigint(&tail).divisors().expect("coefficient factorization incomplete");
    let den_divs = factor_bigint(&lead).divisors().expect("coefficient factorization incomplete");
    for a in &num_divs {
        for b in &den_divs {
            if !a.gcd(b).is_one() {
                continue;
            }
            for sign in [1i32, -1] {
                let num = BigInt::from_biguint(num_bigint::Sign::Plus, a.clone()) * sign;
                let den = BigInt::from_biguint(num_bigint::Sign::Plus, b.clone());
                if homogeneous_eval(&ints, &num, &den).is_zero() {
                    roots.push(Rational::new(num, den));
                }
            }
        }
    }
    roots
}

/// `den^n · P(num/den)` in exact integers.
fn homogeneous_eval(c: &[BigInt], num: &BigInt, den: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    let mut dpow = BigInt::one();
    for ci in c.iter().rev() {
        acc = acc * num + ci * &dpow;
        dpow *= den;
    }
    acc
}

/// Full factorization into monic irreducibles over `Q`.
pub fn factor_univar(p: &QUniPoly) -> UnivarFactorization {
    assert!(!p.is_zero(), "factorization of the zero polynomial");
    let mut factors = Vec::new();
    let mut certified = true;
    for (g, m) in squarefree_univar(p) {
        let mut rest = g.clone();
        for r in rational_roots_squarefree(&g) {
            let lin = QUniPoly::from_coeffs([-r, Rational::one()]);
            rest = rest.div_rem(&lin).0;
            factors.push((lin, m));
        }
        let (parts, ok) = split_irreducible(&rest);
        certified &= ok;
        factors.extend(parts.into_iter().map(|f| (f, m)));
    }
    factors.sort_by_key(|a| (a.0.degree(), a.0.to_dense()));
    UnivarFactorization { leading: p.leading_coeff(), factors, certified }
}

/// Splits a squarefree polynomial without rational roots into irreducibles.
fn split_irreducible(p: &QUniPoly) -> (Vec<QUniPoly>, bool) {
    let d = p.degree().unwrap_or(0);
    if d == 0 {
        return (Vec::new(), true);
    }
    if d <= 3 {
        return (vec![p.make_monic()], true);
    }
    match kronecker_split(p) {
        KroneckerOutcome::Irreducible => (vec![p.make_monic()], true),
        KroneckerOutcome::Budget => (vec![p.make_monic()], false),
        KroneckerOutcome::Split(a, b) => {
            let (mut fa, oka) = split_irreducible(&a);
            let (fb, okb) = split_irreducible(&b);
            fa.extend(fb);
            (fa, oka && okb)
        }
    }
}

enum KroneckerOutcome {
    Irreducible,
    Budget,
    Split(QUniPoly, QUniPoly),
}

fn kronecker_split(p: &QUniPoly) -> KroneckerOutcome {
    let (ints, _) = primitive_integer(p);
    let n = ints.len() - 1;
    let mut pts: Vec<(BigInt, BigInt, usize)> = Vec::new();
    let mut a = 0i64;
    while pts.len() < 3 * (n / 2 + 1) + 4 {
        let ab = BigInt::from(a);
        let v = homogeneous_eval(&ints, &ab, &BigInt::one());
        if !v.is_zero() {
            let nd = factor_bigint(&v).divisors().map_or(usize::MAX, |d| d.len());
            pts.push((ab, v, nd));
        }
        a = if a <= 0 { 1 - a } else { -a };
    }
    pts.sort_by_key(|t| t.2);
    for k in 2..=n / 2 {
        let chosen = &pts[..=k];
        let mut lists: Vec<Vec<BigInt>> = Vec::new();
        let mut combos: u64 = 1;
        for (i, (_, v, _)) in chosen.iter().enumerate() {
            let divs = match factor_bigint(v).divisors() {
                Some(d) => d,
                None => return KroneckerOutcome::Budget,
            };
            let mut l: Vec<BigInt> = Vec::new();
            for d in divs {
                let d = BigInt::from_biguint(num_bigint::Sign::Plus, d);
                if i > 0 {
                    l.push(-d.clone());
                }
                l.push(d);
            }
            combos = combos.saturating_mul(l.len() as u64);
            lists.push(l);
        }
        if combos > KRONECKER_BUDGET {
            return KroneckerOutcome::Budget;
        }
        let xs: Vec<Rational> = chosen.iter().map(|t| Rational::from_integer(t.0.clone())).collect();
        let basis = lagrange_basis(&xs);
        let mut idx = vec![0usize; k + 1];
        loop {
            let mut cand = QUniPoly::zero();
            for (i, b) in basis.iter().enumerate() {
                cand = &cand + &b.scale(&Rational::from_integer(lists[i][idx[i]].clone()));
            }
            if cand.degree() == Some(k as u32) && cand.terms().all(|(_, c)| c.is_integer()) {
                let (q, r) = p.div_rem(&cand);
                if r.is_zero() {
                    return KroneckerOutcome::Split(cand, q);
                }
            }
            let mut pos = 0;
            loop {
                if pos > k {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < lists[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos > k {
                break;
            }
        }
    }
    KroneckerOutcome::Irreducible
}

fn lagrange_basis(xs: &[Rational]) -> Vec<QUniPoly> {
    (0..xs.len())
        .map(|i| {
            let mut b = QUniPoly::one();
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    let lin = QUniPoly::from_coeffs([-xj.clone(), Rational::one()]);
                    b = (&b * &lin).scale(&(Rational::one() / (&xs[i] - xj)));
                }
            }
            b
        })
        .collect()
}

/// Resultant via fraction-free Gaussian elimination on the Sylvester matrix.
pub fn resultant(a: &QUniPoly, b: &QUniPoly) -> Rational {
    let (da, db) = match (a.degree(), b.degree()) {
        (Some(x), Some(y)) => (x as usize, y as usize),
        _ => return Rational::zero(),
    };
    if da == 0 && db == 0 {
        return Rational::one();
    }
    if da == 0 {
        return super::univar::pow_scalar(&a.coeff(0), db as u32);
    }
    if db == 0 {
        return super::univar::pow_scalar(&b.coeff(0), da as u32);
    }
    let n = da + db;
    let mut m = vec![vec![Rational::zero(); n]; n];
    let ac = a.to_dense();
    let bc = b.to_dense();
    for r in 0..db {
        for (i, c) in ac.iter().rev().enumerate() {
            m[r][r + i] = c.clone();
        }
    }
    for r in 0..da {
        for (i, c) in bc.iter().rev().enumerate() {
            m[db + r][r + i] = c.clone();
        }
    }
    determinant(m)
}

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pv;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    det
}

/// `(-1)^(n(n-1)/2) · res(p, p') / lc(p)`.
pub fn discriminant(p: &QUniPoly) -> Rational {
    let n = p.degree().unwrap_or(0) as u64;
    if n == 0 {
        return Rational::one();
    }
    let r = resultant(p, &p.derivative()) / p.leading_coeff();
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

/// Primes dividing the numerator or denominator of a nonzero rational;
/// composites that could not be split are returned separately.
pub fn rational_prime_support(r: &Rational) -> (Vec<u64>, Vec<BigUint>) {
    let mut primes = Vec::new();
    let mut rest = Vec::new();
    for v in [r.numer(), r.denom()] {
        let f = factor_bigint(v);
        for (p, _) in f.primes {
            match p.to_u64() {
                Some(q) => primes.push(q),
                None => rest.push(p),
            }
        }
        rest.extend(f.unfactored);
    }
    (primes, rest)
}
