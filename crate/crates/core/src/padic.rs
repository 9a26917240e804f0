//! p-adic valuations, Hensel lifting and the residue classification behind
//! the one-variable oscillatory bound.
//!
//! Elements of `Z_p` are integers modulo an explicit power `p^s`. Derivative
//! conditions use Taylor coefficients `g^(k)(x)/k!`, which agree in valuation
//! with `g^(k)(x)` whenever `p > deg g` and remain correct for small primes.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{inv_mod, is_prime_u64};
use crate::scalar::denominator_lcm;
use crate::{Integer as Int, QUniPoly, Rational};

/// Largest modulus enumerated by the brute-force oracles.
pub const ENUM_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p divides a coefficient denominator")]
    NotIntegral,
    #[error("enumeration of {size} residues exceeds the budget {budget}")]
    Budget { size: u128, budget: u64 },
    #[error("g(x0) is not 0 mod p^{s}")]
    NotARoot { s: u32 },
    #[error("derivative valuation {delta:?} is not below s/2 = {s}/2")]
    DerivativeTooSmall { delta: Option<u32>, s: u32 },
    #[error("Hensel condition {index} fails at x0 (condition 1 for k < L, condition 2 for k = L)")]
    Condition { index: u32 },
    #[error("Newton iteration did not reach precision {s}")]
    NoConvergence { s: u32 },
    #[error("the n-th Taylor coefficient vanishes mod p at residue {0}")]
    Hypothesis(u64),
    #[error("s must be a positive multiple of n")]
    NotMultiple,
}

/// `x = unit · p^valuation`; the valuation of zero is `None` (infinite).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicValue {
    pub p: u64,
    pub valuation: Option<i64>,
    pub unit: Rational,
}

impl PadicValue {
    pub fn abs(&self) -> f64 {
        self.valuation.map_or(0.0, |v| (self.p as f64).powi(-(v as i32)))
    }
}

fn vp_biguint(n: &BigUint, p: u64) -> u32 {
    let bp = BigUint::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&bp);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// Valuation of a nonzero integer; `None` for zero.
pub fn vp_int(n: &BigInt, p: u64) -> Option<u32> {
    (!n.is_zero()).then(|| vp_biguint(n.magnitude(), p))
}

pub fn vp(x: &Rational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(vp_biguint(x.numer().magnitude(), p) as i64 - vp_biguint(x.denom().magnitude(), p) as i64)
}

pub fn padic_value(x: &Rational, p: u64) -> PadicValue {
    let valuation = vp(x, p);
    let unit = match valuation {
        None => Rational::zero(),
        Some(v) => {
            let pk = Rational::from_integer(BigInt::from(p).pow(v.unsigned_abs() as u32));
            if v >= 0 {
                x / pk
            } else {
                x * pk
            }
        }
    };
    PadicValue { p, valuation, unit }
}

/// `r mod m` for a rational whose denominator is coprime to `m`.
pub fn rat_mod_u64(r: &Rational, m: u64) -> Option<u64> {
    let mb = BigInt::from(m);
    let num = r.numer().mod_floor(&mb).to_u64()?;
    let den = r.denom().mod_floor(&mb).to_u64()?;
    if m == 1 {
        return Some(0);
    }
    Some(crate::arith::mul_mod(num, inv_mod(den, m)?, m))
}

/// `r mod m` over big integers.
pub fn rat_mod_big(r: &Rational, m: &BigInt) -> Option<BigInt> {
    let den = r.denom().mod_floor(m);
    let inv = den.modinv(m)?;
    Some((r.numer() * inv).mod_floor(m))
}

/// Integer coefficients of a p-integral polynomial, scaled by a p-unit.
fn integer_coeffs(g: &QUniPoly, p: u64) -> Result<Vec<BigInt>, PadicError> {
    let l = denominator_lcm(g.terms().map(|(_, c)| c));
    if vp_int(&l, p).unwrap_or(0) > 0 {
        return Err(PadicError::NotIntegral);
    }
    let l = Rational::from_integer(l);
    Ok(g.to_dense().into_iter().map(|c| (c * &l).to_integer()).collect())
}

fn eval_big(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Taylor coefficients of `g` at `x0`: entry `k` is `g^(k)(x0)/k!`.
pub fn taylor_at(coeffs: &[BigInt], x0: &BigInt) -> Vec<BigInt> {
    let mut work = coeffs.to_vec();
    let mut out = Vec::with_capacity(work.len());
    while !work.is_empty() {
        let mut rem = BigInt::zero();
        let mut quot = vec![BigInt::zero(); work.len() - 1];
        for i in (0..work.len()).rev() {
            rem = rem * x0 + &work[i];
            if i > 0 {
                quot[i - 1] = rem.clone();
            }
        }
        out.push(rem);
        work = quot;
    }
    out
}

fn big_pow(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

mod serde_big {
    use num_bigint::BigInt;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HenselWitness {
    pub p: u64,
    #[serde(with = "serde_big")]
    pub x0: BigInt,
    /// Valuation of `g'(x0)`.
    pub delta: u32,
    pub s: u32,
    /// The p-adic root reduced mod `p^s`.
    #[serde(with = "serde_big")]
    pub root: BigInt,
    /// `root ≡ x0 mod p^congruence_exponent`.
    pub congruence_exponent: u32,
    #[serde(with = "serde_big")]
    pub congruence_modulus: BigInt,
    /// `L` of the lemma used; 1 is the classical statement.
    pub steps: u32,
}

impl HenselWitness {
    /// Checks `g(root) ≡ 0 mod p^s` and the congruence with `x0`.
    pub fn validate(&self, g: &QUniPoly) -> bool {
        let Ok(c) = integer_coeffs(g, self.p) else { return false };
        let ps = big_pow(self.p, self.s);
        eval_big(&c, &self.root).mod_floor(&ps).is_zero()
            && (&self.root - &self.x0).mod_floor(&self.congruence_modulus).is_zero()
    }
}

fn check_prime(p: u64) -> Result<(), PadicError> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(PadicError::NotPrime(p))
    }
}

/// Newton iteration `x ← x − g(x)/g'(x)` with `v(g'(x)) = delta` held fixed,
/// run until `v(g(x)) ≥ s + delta`, which pins the root mod `p^s`.
fn newton(c: &[BigInt], dc: &[BigInt], x0: &BigInt, p: u64, delta: u32, s: u32) -> Result<BigInt, PadicError> {
    let work = big_pow(p, s + delta);
    let pd = big_pow(p, delta);
    let mut x = x0.mod_floor(&work);
    let cap = 4 * (s + delta + 2) * c.len() as u32 + 64;
    for _ in 0..cap {
        let gx = eval_big(c, &x);
        let vg = vp_int(&gx, p);
        if vg.is_none_or(|v| v >= s + delta) {
            return Ok(x.mod_floor(&big_pow(p, s)));
        }
        if vg < Some(delta) {
            return Err(PadicError::NoConvergence { s });
        }
        let dx = eval_big(dc, &x);
        if vp_int(&dx, p) != Some(delta) {
            return Err(PadicError::NoConvergence { s });
        }
        let unit = (&dx / &pd).mod_floor(&work);
        let inv = unit.modinv(&work).ok_or(PadicError::NoConvergence { s })?;
        let step = (&gx / &pd) * inv;
        x = (&x - step).mod_floor(&work);
    }
    Err(PadicError::NoConvergence { s })
}

fn derivative_coeffs(c: &[BigInt]) -> Vec<BigInt> {
    c.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect()
}

/// Classical lift to precision `s` from `x0` with `|g(x0)| < |g'(x0)|²`.
///
/// The root satisfies `root ≡ x0 mod p^(v(g(x0)) − δ)`; when
/// `g(x0) ≡ 0 mod p^s` this is the familiar `mod p^(s − δ)`.
pub fn hensel_lift(g: &QUniPoly, x0: &BigInt, p: u64, s: u32) -> Result<HenselWitness, PadicError> {
    check_prime(p)?;
    let c = integer_coeffs(g, p)?;
    let dc = derivative_coeffs(&c);
    let vg = vp_int(&eval_big(&c, x0), p);
    let delta = vp_int(&eval_big(&dc, x0), p);
    let delta = match (delta, vg) {
        (Some(d), None) => d,
        (Some(d), Some(v)) if v > 2 * d => d,
        (Some(_), Some(v)) if v == 0 => return Err(PadicError::NotARoot { s: 1 }),
        _ => return Err(PadicError::DerivativeTooSmall { delta, s }),
    };
    let root = newton(&c, &dc, x0, p, delta, s)?;
    let e = vg.map_or(s, |v| (v - delta).min(s));
    let w = HenselWitness {
        p,
        x0: x0.clone(),
        delta,
        s,
        root,
        congruence_exponent: e,
        congruence_modulus: big_pow(p, e),
        steps: 1,
    };
    debug_assert!(w.validate(g));
    Ok(w)
}

/// Valuation inequalities of the L-step lemma at `x0`.
///
/// Returns the index of the first violated condition, with
/// indices `1..L` for condition 1 and `L` for condition 2.
pub fn general_conditions(g: &QUniPoly, x0: &BigInt, p: u64, l: u32) -> Result<(), PadicError> {
    let c = integer_coeffs(g, p)?;
    let tay = taylor_at(&c, x0);
    let v = |k: usize| tay.get(k).and_then(|a| vp_int(a, p)).map(i64::from);
    // valuations with None as +∞; |a| < |b| iff v(a) > v(b)
    let gt = |a: Option<i64>, b: Option<i64>| match (a, b) {
        (_, None) => false,
        (None, Some(_)) => true,
        (Some(a), Some(b)) => a > b,
    };
    let add = |a: Option<i64>, b: Option<i64>| Some(a? + b?);
    let (v0, v1) = (v(0), v(1));
    for k in 1..l {
        if !gt(add(v(k as usize + 1), v0), add(v(k as usize), v1)) {
            return Err(PadicError::Condition { index: k });
        }
    }
    if !gt(v0, add(v(l as usize), v1)) {
        return Err(PadicError::Condition { index: l });
    }
    Ok(())
}

/// L-step lift to precision `s`, with root in `|x − x0| ≤ |g(x0)/g'(x0)|`.
pub fn hensel_general(g: &QUniPoly, x0: &BigInt, p: u64, l: u32, s: u32) -> Result<HenselWitness, PadicError> {
    check_prime(p)?;
    if l == 0 {
        return Err(PadicError::Condition { index: 0 });
    }
    general_conditions(g, x0, p, l)?;
    let c = integer_coeffs(g, p)?;
    let dc = derivative_coeffs(&c);
    let delta = vp_int(&eval_big(&dc, x0), p).expect("condition 2 forces g'(x0) != 0");
    let radius = vp_int(&eval_big(&c, x0), p).map_or(s, |v| v - delta);
    let root = newton(&c, &dc, x0, p, delta, s)?;
    let e = radius.min(s);
    let w = HenselWitness {
        p,
        x0: x0.clone(),
        delta,
        s,
        root,
        congruence_exponent: e,
        congruence_modulus: big_pow(p, e),
        steps: l,
    };
    debug_assert!(w.validate(g));
    Ok(w)
}

fn coeffs_mod(g: &QUniPoly, m: u64) -> Result<Vec<u64>, PadicError> {
    g.to_dense().iter().map(|c| rat_mod_u64(c, m).ok_or(PadicError::NotIntegral)).collect()
}

fn horner_mod(c: &[u64], x: u64, m: u64) -> u64 {
    c.iter().rev().fold(0u64, |acc, &a| ((acc as u128 * x as u128 + a as u128) % m as u128) as u64)
}

fn checked_modulus(p: u64, s: u32) -> Result<u64, PadicError> {
    match p.checked_pow(s) {
        Some(m) if m <= ENUM_BUDGET => Ok(m),
        _ => Err(PadicError::Budget { size: (p as u128).saturating_pow(s), budget: ENUM_BUDGET }),
    }
}

/// Residues `x mod p^s` with `g(x) ≡ 0` and `x ≡ center mod p^e`.
pub fn roots_mod_in_class(g: &QUniPoly, p: u64, s: u32, center: u64, e: u32) -> Result<Vec<u64>, PadicError> {
    let m = checked_modulus(p, s)?;
    let c = coeffs_mod(g, m)?;
    let step = p.pow(e.min(s));
    let start = center % step;
    Ok((0..m / step).map(|i| start + i * step).filter(|&x| horner_mod(&c, x, m) == 0).collect())
}

pub fn count_roots_mod(g: &QUniPoly, p: u64, s: u32) -> Result<u64, PadicError> {
    roots_mod_in_class(g, p, s, 0, 0).map(|v| v.len() as u64)
}

/// Enumerates the ball of the witness at precision `s + δ`; a unique root in
/// the ball gives exactly `p^δ` solutions there, all `≡ root mod p^s`.
pub fn witness_is_unique(g: &QUniPoly, w: &HenselWitness) -> Result<bool, PadicError> {
    let center = w.x0.mod_floor(&BigInt::from(ENUM_BUDGET * w.p)).to_u64().unwrap_or(0);
    let roots = roots_mod_in_class(g, w.p, w.s + w.delta, center, w.congruence_exponent)?;
    let ps = big_pow(w.p, w.s);
    let all_match = roots.iter().all(|&r| (BigInt::from(r) - &w.root).mod_floor(&ps).is_zero());
    Ok(all_match && roots.len() as u64 == w.p.pow(w.delta))
}

/// `e(k/m) = exp(2πi k/m)`.
pub fn char_e(k: u64, m: u64) -> Complex64 {
    let theta = std::f64::consts::TAU * (k % m) as f64 / m as f64;
    Complex64::new(theta.cos(), theta.sin())
}

/// The partition `R_1, …, R_n` of pairs `(x0, u0)` with `u0 mod p^t` over `x0 ∈ S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueClasses {
    pub p: u64,
    pub t: u32,
    pub n: u32,
    /// `classes[j-1]` is `R_j`.
    pub classes: Vec<Vec<(u64, u64)>>,
}

impl ResidueClasses {
    pub fn counts(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

/// Valuation of `a mod p^cap`, saturating at `cap` for zero.
fn vp_mod(a: u64, p: u64, cap: u32) -> u32 {
    if a == 0 {
        return cap;
    }
    let mut v = 0;
    let mut a = a;
    while a.is_multiple_of(p) && v < cap {
        a /= p;
        v += 1;
    }
    v
}

/// Taylor coefficients of ψ at `u0` reduced mod `m`.
fn taylor_mod(psi: &[BigInt], u0: u64, m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    taylor_at(psi, &BigInt::from(u0)).iter().map(|a| a.mod_floor(&mb).to_u64().unwrap()).collect()
}

/// Index `j` of the class of `u0`, from the Taylor coefficient valuations
/// `w_k = v(ψ^(k)(u0)/k!)`.
fn class_index(w: &[u32], t: u32, n: u32) -> u32 {
    if n == 1 {
        return 1;
    }
    let n = n as usize;
    let t = t as usize;
    let wk = |k: usize| w.get(k).copied().unwrap_or(u32::MAX) as usize;
    if wk(n - 1) >= t {
        return 1;
    }
    for j in 2..n {
        let k = n - j;
        if wk(k) >= t + wk(k + 1) {
            return j as u32;
        }
    }
    n as u32
}

/// Splits `R` into the classes `R_1, …, R_n` for `s = t·n`.
pub fn classify_residues(psi: &QUniPoly, p: u64, t: u32, n: u32, set: &BTreeSet<u64>) -> Result<ResidueClasses, PadicError> {
    check_prime(p)?;
    if n == 0 || t == 0 {
        return Err(PadicError::NotMultiple);
    }
    let c = integer_coeffs(psi, p)?;
    let pt = checked_modulus(p, t)?;
    // valuations up to n·t suffice for every inequality
    let cap = n * t + 1;
    let m = checked_modulus(p, cap).unwrap_or(u64::MAX / 4);
    let mut classes = vec![Vec::new(); n as usize];
    for &x0 in set {
        let x0 = x0 % p;
        let tay = taylor_mod(&c, x0, p);
        if tay.get(n as usize).is_none_or(|&a| a % p == 0) {
            return Err(PadicError::Hypothesis(x0));
        }
        for u0 in (x0..pt).step_by(p as usize) {
            let w: Vec<u32> = taylor_mod(&c, u0, m).iter().map(|&a| vp_mod(a, p, cap)).collect();
            let j = class_index(&w, t, n);
            classes[j as usize - 1].push((x0, u0));
        }
    }
    Ok(ResidueClasses { p, t, n, classes })
}

/// `T_{x0,u0} = ∫_{|u|≤1} e(p^{-(n-1)t} Σ_{r<n} ψ^(r)(u0)/r! · p^{t(r-1)} u^r) du`.
pub fn t_integral(psi: &QUniPoly, p: u64, t: u32, n: u32, u0: u64) -> Result<Complex64, PadicError> {
    if n <= 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let c = integer_coeffs(psi, p)?;
    let e = (n - 1) * t;
    let m = checked_modulus(p, e)?;
    let tay = taylor_mod(&c, u0, m);
    let mut phase = vec![0u64; n as usize];
    for r in 1..n as usize {
        let scale = p.pow(t * (r as u32 - 1)) % m;
        phase[r] = crate::arith::mul_mod(tay.get(r).copied().unwrap_or(0), scale, m);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for u in 0..m {
        acc += char_e(horner_mod(&phase, u, m), m);
    }
    Ok(acc / m as f64)
}

/// `I` assembled from the classes: `p^{-t} Σ_R e(p^{-nt} ψ(u0)) T_{x0,u0}`.
pub fn vc_integral_decomposed(psi: &QUniPoly, p: u64, s: u32, n: u32, set: &BTreeSet<u64>) -> Result<Complex64, PadicError> {
    if n == 0 || !s.is_multiple_of(n) {
        return Err(PadicError::NotMultiple);
    }
    let t = s / n;
    let cls = classify_residues(psi, p, t, n, set)?;
    let ps = checked_modulus(p, s)?;
    let c = coeffs_mod(psi, ps)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (_, u0) in cls.classes.iter().flatten() {
        let tv = t_integral(psi, p, t, n, *u0)?;
        acc += char_e(horner_mod(&c, *u0, ps), ps) * tv;
    }
    Ok(acc / p.pow(t) as f64)
}

/// Histogram of `ψ(x) mod p^s` over `x mod p^s` with `x mod p ∈ S`.
pub fn vc_histogram(psi: &QUniPoly, p: u64, s: u32, set: &BTreeSet<u64>) -> Result<Vec<u64>, PadicError> {
    let m = checked_modulus(p, s)?;
    let c = coeffs_mod(psi, m)?;
    let mut hist = vec![0u64; m as usize];
    let residues: BTreeSet<u64> = set.iter().map(|x| x % p).collect();
    for x0 in residues {
        for x in (x0..m).step_by(p as usize) {
            hist[horner_mod(&c, x, m) as usize] += 1;
        }
    }
    Ok(hist)
}

/// `I = Σ_{x0∈S} ∫_{x ≡ x0 mod p} e(p^{-s} ψ(x)) dx` by direct summation.
pub fn vc_integral_direct(psi: &QUniPoly, p: u64, s: u32, set: &BTreeSet<u64>) -> Result<Complex64, PadicError> {
    let hist = vc_histogram(psi, p, s, set)?;
    let m = hist.len() as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (u, &n) in hist.iter().enumerate() {
        if n != 0 {
            acc += char_e(u as u64, m) * n as f64;
        }
    }
    Ok(acc / m as f64)
}

/// Parses an integer into a `BigInt` suitable as an approximate root.
pub fn parse_int(s: &str) -> Option<Int> {
    s.trim().parse::<BigInt>().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_univar;
    use crate::scalar::{rat, rat_int};

    fn g(s: &str) -> QUniPoly {
        parse_univar(s).unwrap()
    }

    #[test]
    fn valuations() {
        assert_eq!(vp(&rat_int(12), 2), Some(2));
        assert_eq!(vp(&rat(3, 5), 5), Some(-1));
        assert_eq!(vp(&rat_int(0), 7), None);
        let v = padic_value(&rat(50, 3), 5);
        assert!((v.abs() - 0.04).abs() < 1e-15);
        assert_eq!((v.valuation, v.unit), (Some(2), rat(2, 3)));
    }

    #[test]
    fn classical_lift_matches_enumeration() {
        let f = g("x^2 - 6");
        let w = hensel_lift(&f, &BigInt::from(1), 5, 2).unwrap();
        let roots = roots_mod_in_class(&f, 5, 2, 1, 1).unwrap();
        assert_eq!(roots, vec![16]);
        assert_eq!(w.root, BigInt::from(16));
        assert!(witness_is_unique(&f, &w).unwrap());
        assert_eq!(hensel_general(&f, &BigInt::from(1), 5, 1, 2).unwrap(), w);
        let w = hensel_lift(&f, &BigInt::from(16), 5, 2).unwrap();
        assert_eq!(w.congruence_exponent, 2);
    }

    #[test]
    fn linear_and_degenerate() {
        let w = hensel_lift(&g("x - 7"), &BigInt::from(7), 3, 4).unwrap();
        assert_eq!(w.root, BigInt::from(7));
        assert!(matches!(
            hensel_lift(&g("x^2"), &BigInt::from(0), 5, 1),
            Err(PadicError::DerivativeTooSmall { delta: None, .. })
        ));
        assert!(matches!(hensel_general(&g("x^2"), &BigInt::from(0), 5, 2, 3), Err(PadicError::Condition { .. })));
    }

    #[test]
    fn two_step_lemma() {
        let f = g("x^3 - 5*x - 25");
        let x0 = BigInt::from(20);
        general_conditions(&f, &x0, 5, 2).unwrap();
        let w = hensel_general(&f, &x0, 5, 2, 6).unwrap();
        assert!(w.validate(&f));
        assert!(witness_is_unique(&f, &w).unwrap());
    }

    #[test]
    fn root_counts() {
        assert_eq!(count_roots_mod(&g("x^2 - 1"), 2, 3).unwrap(), 4);
        assert_eq!(count_roots_mod(&g("x - 3"), 5, 3).unwrap(), 1);
        assert_eq!(count_roots_mod(&g("x^2 + 1"), 7, 1).unwrap(), 0);
        assert!(matches!(count_roots_mod(&g("x"), 10007, 3), Err(PadicError::Budget { .. })));
    }

    #[test]
    fn taylor_coefficients() {
        let c: Vec<BigInt> = [1, 2, 3].iter().map(|&v| BigInt::from(v)).collect();
        // 1 + 2x + 3x^2 at 1: 6, 8, 3
        let t = taylor_at(&c, &BigInt::from(1));
        assert_eq!(t, vec![BigInt::from(6), BigInt::from(8), BigInt::from(3)]);
    }

    #[test]
    fn classification_examples() {
        let units: BTreeSet<u64> = (1..5).collect();
        let c = classify_residues(&g("x^2"), 5, 1, 2, &units).unwrap();
        assert_eq!(c.counts(), vec![0, 4]);
        let c = classify_residues(&g("x^2 - 10*x"), 5, 1, 2, &units).unwrap();
        assert_eq!(c.counts().iter().sum::<usize>(), 4);
        let c = classify_residues(&g("x^3 + x"), 5, 1, 2, &BTreeSet::new()).unwrap();
        assert!(c.classes.iter().all(Vec::is_empty));
    }

    #[test]
    fn gauss_integral() {
        let all: BTreeSet<u64> = (0..5).collect();
        for s in [2, 4] {
            let d = vc_integral_direct(&g("x^2"), 5, s, &all).unwrap();
            let e = vc_integral_decomposed(&g("x^2"), 5, s, 2, &all).unwrap();
            assert!((d.norm() - 5f64.powf(-(s as f64) / 2.0)).abs() < 1e-9);
            assert!((d - e).norm() < 1e-9);
        }
    }
}
