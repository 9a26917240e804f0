use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{PolyError, UnivarPoly, DEFAULT_DEGREE_CAP};
use crate::scalar::Coeff;

/// Coordinate axis of a bivariate polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// Sparse polynomial in `x` and `y`; the key `(j, k)` is the monomial
/// `x^j y^k`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BivarPoly<T> {
    terms: BTreeMap<(u32, u32), T>,
}

impl<T: Coeff> Default for BivarPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coeff> BivarPoly<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: T, j: u32, k: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(j, k, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(T::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(T::one(), 0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), T)>>(it: I) -> Self {
        let mut p = Self::zero();
        for ((j, k), c) in it {
            p.add_term(j, k, c);
        }
        p
    }

    /// Embeds `u(x)`.
    pub fn from_x_poly(u: &UnivarPoly<T>) -> Self {
        Self::from_terms(u.terms().map(|(e, c)| ((e, 0), c.clone())))
    }

    /// Embeds `u(y)`.
    pub fn from_y_poly(u: &UnivarPoly<T>) -> Self {
        Self::from_terms(u.terms().map(|(e, c)| ((0, e), c.clone())))
    }

    /// `Σ_k coeffs[k](x) y^k`.
    pub fn from_y_coeffs(coeffs: &[UnivarPoly<T>]) -> Self {
        let mut p = Self::zero();
        for (k, ck) in coeffs.iter().enumerate() {
            for (j, c) in ck.terms() {
                p.add_term(j, k as u32, c.clone());
            }
        }
        p
    }

    pub fn add_term(&mut self, j: u32, k: u32, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&(j, k)) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert((j, k), s);
                }
            }
            None => {
                self.terms.insert((j, k), c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, j: u32, k: u32) -> T {
        self.terms.get(&(j, k)).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &T)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Exponent pairs carrying nonzero coefficients, origin included.
    pub fn support(&self) -> BTreeSet<(u32, u32)> {
        self.terms.keys().copied().collect()
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.1).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0 + e.1).max()
    }

    /// Lowest total degree among nonzero terms.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0 + e.1).min()
    }

    pub fn constant_term(&self) -> T {
        self.coeff(0, 0)
    }

    pub fn without_constant(&self) -> Self {
        let mut p = self.clone();
        p.terms.remove(&(0, 0));
        p
    }

    /// True iff there is no constant term and no linear term.
    pub fn has_critical_origin(&self) -> bool {
        self.coeff(1, 0).is_zero() && self.coeff(0, 1).is_zero()
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, v)| (*e, v.clone() * c.clone())))
    }

    pub fn map_coeffs<U: Coeff>(&self, f: impl Fn(&T) -> U) -> BivarPoly<U> {
        BivarPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// Maps exponents with `g`; colliding images are summed.
    pub fn map_exponents(&self, g: impl Fn(u32, u32) -> (u32, u32)) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(j, k), c)| (g(j, k), c.clone())))
    }

    pub fn swap_xy(&self) -> Self {
        self.map_exponents(|j, k| (k, j))
    }

    /// Coefficients in `y`: element `k` is the `Q[x]` coefficient of `y^k`.
    pub fn y_coeffs(&self) -> Vec<UnivarPoly<T>> {
        let n = self.deg_y().map_or(0, |d| d as usize + 1);
        let mut out = vec![UnivarPoly::zero(); n];
        for (&(j, k), c) in self.terms.iter() {
            out[k as usize].add_term(j, c.clone());
        }
        out
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        self.y_coeffs()
            .iter()
            .rev()
            .fold(T::zero(), |acc, ck| acc * y.clone() + ck.eval(x))
    }

    /// `f(x, r(x))`.
    pub fn subs_y(&self, r: &UnivarPoly<T>) -> UnivarPoly<T> {
        self.y_coeffs()
            .iter()
            .rev()
            .fold(UnivarPoly::zero(), |acc, ck| &(&acc * r) + ck)
    }

    /// Formal derivative of the given order.
    pub fn partial_derivative(&self, axis: Axis, order: u32) -> Self {
        let falling = |e: u32| -> T {
            (0..order).fold(T::one(), |acc, i| acc * T::from_int((e - i) as i64))
        };
        Self::from_terms(self.terms.iter().filter_map(|(&(j, k), c)| match axis {
            Axis::X if j >= order => Some(((j - order, k), c.clone() * falling(j))),
            Axis::Y if k >= order => Some(((j, k - order), c.clone() * falling(k))),
            _ => None,
        }))
    }

    pub fn checked_pow(&self, mut k: u32, cap: u32) -> Result<Self, PolyError> {
        if let (Some(dx), Some(dy)) = (self.deg_x(), self.deg_y()) {
            let worst = u64::from(dx.max(dy)) * u64::from(k);
            if worst > u64::from(cap) {
                return Err(PolyError::DegreeCap { degree: worst, cap });
            }
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// `f(x, y + ψ(x))` under the default degree cap.
    pub fn shear_y(&self, psi: &UnivarPoly<T>) -> Result<Self, PolyError> {
        self.shear_y_capped(psi, DEFAULT_DEGREE_CAP)
    }

    pub fn shear_y_capped(&self, psi: &UnivarPoly<T>, cap: u32) -> Result<Self, PolyError> {
        let dpsi = u64::from(psi.degree().unwrap_or(0));
        let bound = self
            .terms
            .keys()
            .map(|&(j, k)| u64::from(j) + u64::from(k) * dpsi)
            .max()
            .unwrap_or(0);
        if bound > u64::from(cap) {
            return Err(PolyError::DegreeCap { degree: bound, cap });
        }
        let lin = &Self::y() + &Self::from_x_poly(psi);
        let out = self
            .y_coeffs()
            .iter()
            .rev()
            .fold(Self::zero(), |acc, ck| &(&acc * &lin) + &Self::from_x_poly(ck));
        Ok(out)
    }

    /// `f(x + ψ(y), y)` under the default degree cap.
    pub fn shear_x(&self, psi: &UnivarPoly<T>) -> Result<Self, PolyError> {
        self.shear_x_capped(psi, DEFAULT_DEGREE_CAP)
    }

    pub fn shear_x_capped(&self, psi: &UnivarPoly<T>, cap: u32) -> Result<Self, PolyError> {
        Ok(self.swap_xy().shear_y_capped(psi, cap)?.swap_xy())
    }

    /// Canonical text: terms sorted by total degree, then by `x` exponent.
    pub fn to_canonical_string(&self) -> String {
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|&&(j, k)| (j + k, j));
        let terms: Vec<(T, String)> = keys
            .into_iter()
            .map(|&(j, k)| (self.terms[&(j, k)].clone(), monomial_text(j, k)))
            .collect();
        super::format_terms(&terms)
    }
}

fn monomial_text(j: u32, k: u32) -> String {
    let part = |v: &str, e: u32| match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    };
    [part("x", j), part("y", k)].into_iter().flatten().collect::<Vec<_>>().join("*")
}

impl<T: Coeff> fmt::Display for BivarPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl<'a, T: Coeff> Add<&'a BivarPoly<T>> for &'a BivarPoly<T> {
    type Output = BivarPoly<T>;
    fn add(self, rhs: &BivarPoly<T>) -> BivarPoly<T> {
        let mut out = self.clone();
        for (&(j, k), c) in rhs.terms.iter() {
            out.add_term(j, k, c.clone());
        }
        out
    }
}

impl<'a, T: Coeff> Sub<&'a BivarPoly<T>> for &'a BivarPoly<T> {
    type Output = BivarPoly<T>;
    fn sub(self, rhs: &BivarPoly<T>) -> BivarPoly<T> {
        let mut out = self.clone();
        for (&(j, k), c) in rhs.terms.iter() {
            out.add_term(j, k, -c.clone());
        }
        out
    }
}

impl<'a, T: Coeff> Mul<&'a BivarPoly<T>> for &'a BivarPoly<T> {
    type Output = BivarPoly<T>;
    fn mul(self, rhs: &BivarPoly<T>) -> BivarPoly<T> {
        let mut out = BivarPoly::zero();
        for (&(ja, ka), ca) in self.terms.iter() {
            for (&(jb, kb), cb) in rhs.terms.iter() {
                out.add_term(ja + jb, ka + kb, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Coeff> Neg for &BivarPoly<T> {
    type Output = BivarPoly<T>;
    fn neg(self) -> BivarPoly<T> {
        BivarPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl<T: Coeff> Neg for BivarPoly<T> {
    type Output = BivarPoly<T>;
    fn neg(self) -> BivarPoly<T> {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Coeff> $tr<BivarPoly<T>> for BivarPoly<T> {
            type Output = BivarPoly<T>;
            fn $m(self, rhs: BivarPoly<T>) -> BivarPoly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;
    use crate::{FPoly, QPoly, QUniPoly};

    fn t(c: i64, j: u32, k: u32) -> QPoly {
        QPoly::monomial(rat_int(c), j, k)
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(t(1, 2, 1).partial_derivative(Axis::X, 1), t(2, 1, 1));
        assert!(t(9, 0, 0).partial_derivative(Axis::Y, 1).is_zero());
        assert_eq!(t(1, 0, 4).partial_derivative(Axis::Y, 4), t(24, 0, 0));
    }

    #[test]
    fn shear_examples() {
        let x2 = QUniPoly::monomial(rat_int(1), 2);
        let f = (&t(1, 0, 1) - &t(1, 2, 0)).checked_pow(2, 512).unwrap();
        assert_eq!(f.shear_y(&x2).unwrap(), t(1, 0, 2));
        let g = &(&t(1, 0, 2) - &t(1, 2, 0)) - &t(1, 3, 0);
        let sheared = g.shear_y(&QUniPoly::var()).unwrap();
        assert_eq!(sheared, &(&t(1, 0, 2) + &t(2, 1, 1)) - &t(1, 3, 0));
        assert_eq!(g.shear_y(&QUniPoly::zero()).unwrap(), g);
        let h = &t(1, 2, 0) - &t(1, 0, 3);
        let hx = h.shear_x(&QUniPoly::var()).unwrap();
        let expect = &(&t(1, 2, 0) + &t(2, 1, 1)) + &(&t(1, 0, 2) - &t(1, 0, 3));
        assert_eq!(hx, expect);
    }

    #[test]
    fn shear_cap_is_enforced() {
        let f = t(1, 0, 200);
        let psi = QUniPoly::monomial(rat_int(1), 3);
        assert!(matches!(f.shear_y(&psi), Err(PolyError::DegreeCap { .. })));
    }

    #[test]
    fn canonical_order() {
        let f = &(&t(1, 0, 4) + &t(-2, 2, 3)) + &(&t(2, 6, 1) - &t(1, 8, 0));
        assert_eq!(f.to_string(), "y^4 - 2*x^2*y^3 + 2*x^6*y - x^8");
    }

    #[test]
    fn float_instantiation() {
        let f = FPoly::from_terms([((2, 0), 1.0), ((0, 2), 1.0)]);
        assert_eq!(f.eval(&3.0, &4.0), 25.0);
        assert_eq!(f.partial_derivative(Axis::X, 1), FPoly::monomial(2.0, 1, 0));
    }
}
