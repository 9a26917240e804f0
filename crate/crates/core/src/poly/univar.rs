use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Coeff;

/// Sparse univariate polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnivarPoly<T> {
    terms: BTreeMap<u32, T>,
}

impl<T: Coeff> Default for UnivarPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coeff> UnivarPoly<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: T, e: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// The variable itself.
    pub fn var() -> Self {
        Self::monomial(T::one(), 1)
    }

    /// Dense coefficients, lowest degree first.
    pub fn from_coeffs<I: IntoIterator<Item = T>>(coeffs: I) -> Self {
        Self::from_terms(coeffs.into_iter().enumerate().map(|(e, c)| (e as u32, c)))
    }

    /// Sums repeated exponents and drops zeros.
    pub fn from_terms<I: IntoIterator<Item = (u32, T)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: u32, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    /// Smallest exponent carrying a nonzero coefficient.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    pub fn coeff(&self, e: u32) -> T {
        self.terms.get(&e).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading_coeff(&self) -> T {
        self.terms.values().next_back().cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &T)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Dense coefficient vector of length `degree + 1` (empty for zero).
    pub fn to_dense(&self) -> Vec<T> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|e| self.coeff(e)).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, v)| (*e, v.clone() * c.clone())))
    }

    /// Multiplies by `var^k`.
    pub fn shift(&self, k: u32) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        let mut prev: Option<u32> = None;
        for (e, c) in self.terms.iter().rev() {
            if let Some(pe) = prev {
                acc = acc * pow_scalar(x, pe - e);
            }
            acc = acc + c.clone();
            prev = Some(*e);
        }
        match prev {
            Some(pe) => acc * pow_scalar(x, pe),
            None => acc,
        }
    }

    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| **e > 0)
                .map(|(e, c)| (e - 1, c.clone() * T::from_int(*e as i64))),
        )
    }

    pub fn pow(&self, mut k: u32) -> Self {
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
        acc
    }

    /// `self(g(var))`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.to_dense().into_iter().rev() {
            acc = &(&acc * g) + &Self::constant(c);
        }
        acc
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.leading_coeff();
        let mut rem = self.clone();
        let mut quo = Self::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading_coeff() / lc.clone();
            let e = rd - dd;
            for (de, dc) in divisor.terms.iter() {
                rem.add_term(de + e, -(dc.clone() * c.clone()));
            }
            // guard against inexact scalars leaving a residue at the top
            rem.terms.remove(&rd);
            quo.add_term(e, c);
        }
        (quo, rem)
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c.clone() / lc.clone())))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn map_coeffs<U: Coeff>(&self, f: impl Fn(&T) -> U) -> UnivarPoly<U> {
        UnivarPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// Canonical text in the variable `var`, highest degree first.
    pub fn to_string_in(&self, var: &str) -> String {
        let terms: Vec<(T, String)> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let m = match e {
                    0 => String::new(),
                    1 => var.to_string(),
                    _ => format!("{var}^{e}"),
                };
                (c.clone(), m)
            })
            .collect();
        super::format_terms(&terms)
    }
}

pub(crate) fn pow_scalar<T: Coeff>(x: &T, mut k: u32) -> T {
    let mut base = x.clone();
    let mut acc = T::one();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base.clone();
        }
        k >>= 1;
        if k > 0 {
            base = base.clone() * base;
        }
    }
    acc
}

impl<T: Coeff> fmt::Display for UnivarPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

impl<'a, T: Coeff> Add<&'a UnivarPoly<T>> for &'a UnivarPoly<T> {
    type Output = UnivarPoly<T>;
    fn add(self, rhs: &UnivarPoly<T>) -> UnivarPoly<T> {
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a, T: Coeff> Sub<&'a UnivarPoly<T>> for &'a UnivarPoly<T> {
    type Output = UnivarPoly<T>;
    fn sub(self, rhs: &UnivarPoly<T>) -> UnivarPoly<T> {
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<'a, T: Coeff> Mul<&'a UnivarPoly<T>> for &'a UnivarPoly<T> {
    type Output = UnivarPoly<T>;
    fn mul(self, rhs: &UnivarPoly<T>) -> UnivarPoly<T> {
        let mut out = UnivarPoly::zero();
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in rhs.terms.iter() {
                out.add_term(ea + eb, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Coeff> Neg for &UnivarPoly<T> {
    type Output = UnivarPoly<T>;
    fn neg(self) -> UnivarPoly<T> {
        UnivarPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Coeff> $tr<UnivarPoly<T>> for UnivarPoly<T> {
            type Output = UnivarPoly<T>;
            fn $m(self, rhs: UnivarPoly<T>) -> UnivarPoly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Coeff> Neg for UnivarPoly<T> {
    type Output = UnivarPoly<T>;
    fn neg(self) -> UnivarPoly<T> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use crate::QUniPoly;

    fn q(c: &[i64]) -> QUniPoly {
        QUniPoly::from_coeffs(c.iter().map(|&v| rat_int(v)))
    }

    #[test]
    fn eval_sparse_horner() {
        let p = QUniPoly::from_terms([(7, rat_int(2)), (2, rat_int(-3)), (0, rat_int(1))]);
        let x = rat(3, 2);
        let direct = rat_int(2) * pow_scalar(&x, 7) - rat_int(3) * x.clone() * x.clone() + rat_int(1);
        assert_eq!(p.eval(&x), direct);
    }

    #[test]
    fn div_rem_identity() {
        let a = q(&[1, 0, -3, 2, 5]);
        let b = q(&[2, 1, 3]);
        let (qq, r) = a.div_rem(&b);
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(&(&qq * &b) + &r, a);
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let f = q(&[-1, 1]);
        let a = &f * &q(&[1, 0, 1]);
        let b = &f * &q(&[3, 2]);
        assert_eq!(a.gcd(&b), f);
        assert_eq!(q(&[0, 2]).gcd(&QUniPoly::zero()), q(&[0, 1]));
    }

    #[test]
    fn compose_and_derivative() {
        let p = q(&[0, 0, 1]);
        let g = q(&[1, 1]);
        assert_eq!(p.compose(&g), q(&[1, 2, 1]));
        assert_eq!(q(&[5, 0, 0, 4]).derivative(), q(&[0, 0, 12]));
        assert_eq!(q(&[1, 1]).pow(3), q(&[1, 3, 3, 1]));
    }

    #[test]
    fn works_over_floats() {
        let p = UnivarPoly::<f64>::from_coeffs([1.0, -2.0, 1.0]);
        assert_eq!(p.eval(&1.0), 0.0);
        assert_eq!(p.to_string(), "x^2 - 2*x + 1");
    }
}
