//! Exact evaluation of the complete sum `S(φ, p^s)` and the local sum
//! `S₀(φ, p^s)`, and the observed-constant check of the local-sum bound.
//!
//! Every evaluator builds an exact histogram `N_u = #{points : φ ≡ u mod p^s}`
//! and applies the additive character once per residue class.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::adapt::{adapt, effective_nu_for_bound, AdaptError};
use crate::arith::{is_prime_u64, mul_mod};
use crate::edge::exceptional_primes;
use crate::newton::{Face, GeometryError, NewtonPolygon};
use crate::padic::{char_e, rat_mod_u64, vp};
use crate::scalar::serde_rat;
use crate::{QPoly, Rational};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const DEFAULT_S_REF: u32 = 3;
/// Relative slack allowed over the observed constant.
pub const BOUND_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExpSumError {
    #[error("{points} points exceed the budget {budget}")]
    Budget { points: u128, budget: u64 },
    #[error("p = {0} divides a coefficient denominator")]
    NotIntegral(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("s must be at least 1")]
    ZeroExponent,
    #[error(transparent)]
    Adapt(#[from] AdaptError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SumKind {
    Complete,
    Local,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpSumResult {
    pub p: u64,
    pub s: u32,
    pub kind: SumKind,
    /// `histogram[u]` counts points with `φ ≡ u mod p^s`.
    #[serde(skip)]
    pub histogram: Vec<u64>,
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    pub modulus: f64,
    pub error_bound: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

impl ExpSumResult {
    pub fn total(&self) -> u64 {
        self.histogram.iter().sum()
    }
}

fn modulus_of(p: u64, s: u32) -> Result<u64, ExpSumError> {
    if !is_prime_u64(p) {
        return Err(ExpSumError::NotPrime(p));
    }
    if s == 0 {
        return Err(ExpSumError::ZeroExponent);
    }
    match p.checked_pow(s) {
        Some(m) if m < 1 << 32 => Ok(m),
        _ => Err(ExpSumError::Budget { points: (p as u128).saturating_pow(2 * s), budget: 1 << 32 }),
    }
}

fn point_count(p: u64, s: u32, kind: SumKind) -> u128 {
    let e = match kind {
        SumKind::Complete => 2 * s,
        SumKind::Local => 2 * (s - 1),
    };
    (p as u128).saturating_pow(e)
}

fn check_budget(p: u64, s: u32, kind: SumKind, budget: u64) -> Result<(), ExpSumError> {
    let points = point_count(p, s, kind);
    if points > budget as u128 {
        return Err(ExpSumError::Budget { points, budget });
    }
    Ok(())
}

/// Normalizes a histogram by `p^{2s}`.
pub fn weigh_histogram(hist: &[u64], p: u64, s: u32) -> (Complex64, f64) {
    let m = hist.len() as u64;
    let norm = (p as f64).powi(2 * s as i32);
    let mut acc = Complex64::zero();
    let mut classes = 0usize;
    for (u, &n) in hist.iter().enumerate() {
        if n != 0 {
            acc += char_e(u as u64, m) * (n as f64 / norm);
            classes += 1;
        }
    }
    (acc, 4.0 * (classes.max(1) as f64) * f64::EPSILON)
}

fn finish(p: u64, s: u32, kind: SumKind, histogram: Vec<u64>) -> ExpSumResult {
    let (value, error_bound) = weigh_histogram(&histogram, p, s);
    ExpSumResult { p, s, kind, modulus: value.norm(), histogram, value, error_bound }
}

/// Coefficients of `f` without its constant term, reduced mod `m`.
fn reduced_terms(f: &QPoly, p: u64, m: u64) -> Result<(u64, Vec<((u32, u32), Rational)>), ExpSumError> {
    let c0 = rat_mod_u64(&f.constant_term(), m).ok_or(ExpSumError::NotIntegral(p))?;
    let mut terms = Vec::new();
    for ((j, k), c) in f.terms() {
        if (j, k) != (0, 0) {
            if vp(c, p).is_some_and(|v| v < 0) {
                return Err(ExpSumError::NotIntegral(p));
            }
            terms.push(((j, k), c.clone()));
        }
    }
    Ok((c0, terms))
}

fn pow_rat(p: u64, e: u32) -> Rational {
    Rational::from_integer(num_bigint::BigInt::from(p).pow(e))
}

/// Histogram of `Σ c_{jk} a^j b^k mod r` over `(a, b) ∈ (Z/r)²` restricted to
/// `a ∈ xs`, `b ∈ ys` (all residues when `None`).
fn grid_histogram(coeffs: &[((u32, u32), u64)], r: u64, xs: Option<&[u64]>, ys: Option<&[u64]>) -> Vec<u64> {
    let deg_y = coeffs.iter().map(|((_, k), _)| *k).max().unwrap_or(0) as usize;
    let row = |a: u64| -> Vec<u64> {
        let mut cy = vec![0u64; deg_y + 1];
        for &((j, k), c) in coeffs {
            let aj = crate::arith::pow_mod(a, j as u64, r);
            cy[k as usize] = (cy[k as usize] + mul_mod(c, aj, r)) % r;
        }
        cy
    };
    let all: Vec<u64>;
    let xs = match xs {
        Some(v) => v,
        None => {
            all = (0..r).collect();
            &all
        }
    };
    let linear_ok = ys.is_none();
    xs.par_iter()
        .fold(
            || vec![0u64; r as usize],
            |mut hist, &a| {
                let cy = row(a);
                let top = cy.iter().rposition(|&c| c != 0).unwrap_or(0);
                if linear_ok && top <= 1 {
                    let (c0, c1) = (cy[0], if top == 1 { cy[1] } else { 0 });
                    // c0 + c1·b hits each multiple of g = gcd(c1, r) exactly g times
                    let g = num_integer::gcd(c1, r);
                    let g = if c1 == 0 { r } else { g };
                    for i in 0..r / g {
                        hist[((c0 + g * i) % r) as usize] += g;
                    }
                } else {
                    let mut eval = |b: u64| {
                        let v = cy.iter().rev().fold(0u64, |acc, &c| (mul_mod(acc, b, r) + c) % r);
                        hist[v as usize] += 1;
                    };
                    match ys {
                        Some(ys) => ys.iter().for_each(|&b| eval(b)),
                        None => (0..r).for_each(eval),
                    }
                }
                hist
            },
        )
        .reduce(
            || vec![0u64; r as usize],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

/// Whether the linear part has a `p`-unit coefficient.
pub fn has_unit_gradient(f: &QPoly, p: u64) -> bool {
    [(1, 0), (0, 1)].iter().any(|&(j, k)| vp(&f.coeff(j, k), p) == Some(0))
}

/// Closed form when `∇φ(0,0) ≢ 0 mod p`: the value is `0` for `s ≥ 2` and
/// `p^{-2}·e(φ(0)/p)` for `s = 1`; the histogram is uniform on `φ(0) + pZ`.
pub fn eval_local_gradient(f: &QPoly, p: u64, s: u32) -> Result<ExpSumResult, ExpSumError> {
    let m = modulus_of(p, s)?;
    let c0 = rat_mod_u64(&f.constant_term(), m).ok_or(ExpSumError::NotIntegral(p))?;
    let mut hist = vec![0u64; m as usize];
    let per = m / p;
    for i in 0..per {
        hist[((c0 + p * i) % m) as usize] = per;
    }
    let value = if s == 1 {
        char_e(c0, m) / (p * p) as f64
    } else {
        Complex64::zero()
    };
    Ok(ExpSumResult { p, s, kind: SumKind::Local, modulus: value.norm(), histogram: hist, value, error_bound: 0.0 })
}

pub fn eval_sum_direct(f: &QPoly, p: u64, s: u32, kind: SumKind) -> Result<ExpSumResult, ExpSumError> {
    eval_sum_direct_budget(f, p, s, kind, DEFAULT_BUDGET)
}

/// Direct evaluation. Local sums use `φ(pa, pb) = φ(0) + p^D·ψ(a, b)` with
/// `ψ mod p^{s−D}` depending only on `(a, b) mod p^{s−D}`.
pub fn eval_sum_direct_budget(f: &QPoly, p: u64, s: u32, kind: SumKind, budget: u64) -> Result<ExpSumResult, ExpSumError> {
    let m = modulus_of(p, s)?;
    check_budget(p, s, kind, budget)?;
    let (c0, terms) = reduced_terms(f, p, m)?;
    let mut hist = vec![0u64; m as usize];
    match kind {
        SumKind::Complete => {
            let coeffs: Vec<_> = terms.iter().map(|(e, c)| (*e, rat_mod_u64(c, m).expect("p-integral"))).collect();
            for (v, n) in grid_histogram(&coeffs, m, None, None).into_iter().enumerate() {
                hist[((c0 + v as u64) % m) as usize] += n;
            }
        }
        SumKind::Local => {
            let d = terms
                .iter()
                .filter_map(|((j, k), c)| vp(c, p).map(|v| j + k + v as u32))
                .min()
                .unwrap_or(s)
                .min(s);
            if d >= s {
                hist[c0 as usize] = (p as u128).pow(2 * (s - 1)) as u64;
            } else {
                let r = p.pow(s - d);
                let pd = p.pow(d);
                let mult = p.pow(2 * (d - 1));
                let coeffs: Vec<_> = terms
                    .iter()
                    .map(|((j, k), c)| {
                        let scaled = c * pow_rat(p, j + k) / pow_rat(p, d);
                        ((*j, *k), rat_mod_u64(&scaled, r).expect("p-integral"))
                    })
                    .collect();
                for (v, n) in grid_histogram(&coeffs, r, None, None).into_iter().enumerate() {
                    if n != 0 {
                        hist[((c0 + pd * v as u64) % m) as usize] += n * mult;
                    }
                }
            }
        }
    }
    Ok(finish(p, s, kind, hist))
}

/// Local sum, routed to the closed form when the gradient is a unit.
pub fn eval_local(f: &QPoly, p: u64, s: u32, budget: u64) -> Result<ExpSumResult, ExpSumError> {
    if has_unit_gradient(f, p) {
        check_budget(p, s, SumKind::Local, budget)?;
        eval_local_gradient(f, p, s)
    } else {
        eval_sum_direct_budget(f, p, s, SumKind::Local, budget)
    }
}

/// Point-by-point enumeration, for tests.
pub fn eval_sum_brute(f: &QPoly, p: u64, s: u32, kind: SumKind) -> Result<ExpSumResult, ExpSumError> {
    let m = modulus_of(p, s)?;
    check_budget(p, s, kind, DEFAULT_BUDGET)?;
    let c0 = rat_mod_u64(&f.constant_term(), m).ok_or(ExpSumError::NotIntegral(p))?;
    let coeffs: Vec<_> = f
        .terms()
        .filter(|(e, _)| *e != (0, 0))
        .map(|(e, c)| rat_mod_u64(c, m).map(|c| (e, c)).ok_or(ExpSumError::NotIntegral(p)))
        .collect::<Result<_, _>>()?;
    let step = match kind {
        SumKind::Complete => 1,
        SumKind::Local => p,
    };
    let mut hist = vec![0u64; m as usize];
    for x in (0..m).step_by(step as usize) {
        for y in (0..m).step_by(step as usize) {
            let mut v = c0;
            for &((j, k), c) in &coeffs {
                let t = mul_mod(c, mul_mod(crate::arith::pow_mod(x, j as u64, m), crate::arith::pow_mod(y, k as u64, m), m), m);
                v = (v + t) % m;
            }
            hist[v as usize] += 1;
        }
    }
    Ok(finish(p, s, kind, hist))
}

/// Points of the local domain grouped by the face selected by their
/// valuation pair `(l₁, l₂)`; `face` is `None` only for constant `f`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceSumContribution {
    pub face: Option<Face>,
    pub weights: Vec<(u32, u32)>,
    #[serde(skip)]
    pub histogram: Vec<u64>,
    #[serde(serialize_with = "ser_complex")]
    pub i_tau: Complex64,
}

fn units_mod(p: u64, r: u32) -> Vec<u64> {
    let m = p.pow(r);
    (0..m).filter(|w| w % p != 0).collect()
}

fn unit_count(p: u64, e: u32) -> u64 {
    if e == 0 {
        1
    } else {
        p.pow(e) - p.pow(e - 1)
    }
}

/// Histogram of the shell `|x| = p^{-l₁}`, `|y| = p^{-l₂}`; `l = s` stands
/// for the coordinate being `0 mod p^s`.
fn shell_histogram(terms: &[((u32, u32), Rational)], c0: u64, p: u64, s: u32, (l1, l2): (u32, u32)) -> Vec<u64> {
    let m = p.pow(s);
    let mut hist = vec![0u64; m as usize];
    let live: Vec<_> = terms
        .iter()
        .filter(|((j, k), _)| (l1 < s || *j == 0) && (l2 < s || *k == 0))
        .filter_map(|((j, k), c)| {
            let e = l1 * j + l2 * k + vp(c, p)? as u32;
            (e < s).then(|| ((*j, *k), c, l1 * j + l2 * k))
        })
        .collect();
    let free = |l: u32| s.saturating_sub(l);
    if live.is_empty() {
        hist[c0 as usize] = unit_count(p, free(l1)) * unit_count(p, free(l2));
        return hist;
    }
    let n = live.iter().map(|(_, c, e)| e + vp(c, p).unwrap() as u32).min().unwrap();
    let rmod = p.pow(s - n);
    let coeffs: Vec<_> = live
        .iter()
        .map(|(jk, c, e)| {
            let scaled = *c * pow_rat(p, *e) / pow_rat(p, n);
            (*jk, rat_mod_u64(&scaled, rmod).expect("p-integral"))
        })
        .collect();
    let r1 = if l1 < s { (s - l1).min(s - n) } else { 0 };
    let r2 = if l2 < s { (s - l2).min(s - n) } else { 0 };
    let xs = if l1 < s { units_mod(p, r1) } else { vec![0] };
    let ys = if l2 < s { units_mod(p, r2) } else { vec![0] };
    let mult = p.pow(free(l1) - r1) * p.pow(free(l2) - r2);
    let pn = p.pow(n);
    // a unit grid mod p^r embeds in residues mod p^{s-n} since r ≤ s - n
    for (v, cnt) in grid_histogram(&coeffs, rmod, Some(&xs), Some(&ys)).into_iter().enumerate() {
        if cnt != 0 {
            hist[((c0 + pn * v as u64) % m) as usize] += cnt * mult;
        }
    }
    hist
}

/// Local sum by exact-valuation shells, grouped by face.
pub fn eval_sum_faces(f: &QPoly, p: u64, s: u32) -> Result<(Vec<FaceSumContribution>, ExpSumResult), ExpSumError> {
    let m = modulus_of(p, s)?;
    check_budget(p, s, SumKind::Local, DEFAULT_BUDGET)?;
    let (c0, terms) = reduced_terms(f, p, m)?;
    let g = f.without_constant();
    let np = if g.is_zero() { None } else { Some(NewtonPolygon::new(&g)?) };
    let mut groups: Vec<FaceSumContribution> = Vec::new();
    let mut total = vec![0u64; m as usize];
    for l1 in 1..=s {
        for l2 in 1..=s {
            let h = shell_histogram(&terms, c0, p, s, (l1, l2));
            let face = np.as_ref().map(|np| np.face_of_weight((l1, l2)).0);
            let slot = match groups.iter().position(|c| c.face == face) {
                Some(i) => i,
                None => {
                    groups.push(FaceSumContribution {
                        face,
                        weights: Vec::new(),
                        histogram: vec![0; m as usize],
                        i_tau: Complex64::zero(),
                    });
                    groups.len() - 1
                }
            };
            let c = &mut groups[slot];
            c.weights.push((l1, l2));
            for (i, n) in h.into_iter().enumerate() {
                c.histogram[i] += n;
                total[i] += n;
            }
        }
    }
    for c in &mut groups {
        c.i_tau = weigh_histogram(&c.histogram, p, s).0;
    }
    Ok((groups, finish(p, s, SumKind::Local, total)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub p: u64,
    pub s: u32,
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
    pub normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub polynomial: String,
    #[serde(with = "serde_rat")]
    pub h: Rational,
    pub nu_eff: u8,
    pub s_ref: u32,
    pub excluded_primes: Vec<u64>,
    pub rows: Vec<BoundRow>,
    /// Maximum normalized value over `s ≤ s_ref`, per prime.
    pub observed_constant: BTreeMap<u64, f64>,
    pub max_normalized: f64,
    pub violations: Vec<BoundRow>,
}

#[derive(Clone, Copy, Debug)]
pub struct BoundConfig {
    pub budget: u64,
    pub s_max: Option<u32>,
    pub s_ref: u32,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, s_max: None, s_ref: DEFAULT_S_REF }
    }
}

/// Height and effective exponent used for normalization, with the
/// polynomials whose coefficients and edges define the excluded primes.
pub fn bound_parameters(f: &QPoly) -> Result<(Rational, u8, Vec<QPoly>), ExpSumError> {
    match adapt(f) {
        Ok(r) => Ok((r.height.clone(), effective_nu_for_bound(f, &r), r.transforms)),
        Err(AdaptError::LinearTerm) => {
            let np = NewtonPolygon::new(&f.without_constant())?;
            Ok((np.newton_distance().clone(), 0, vec![f.clone()]))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn verify_bound(f: &QPoly, primes: &[u64], cfg: BoundConfig) -> Result<BoundReport, ExpSumError> {
    let (h, nu_eff, transforms) = bound_parameters(f)?;
    let ex = exceptional_primes(f, &transforms);
    let (excluded, kept): (Vec<u64>, Vec<u64>) = primes.iter().partition(|&&p| ex.contains(p));
    let hf = h.to_f64().expect("finite height");
    let mut rows = Vec::new();
    for &p in &kept {
        let mut s = 1;
        while point_count(p, s, SumKind::Local) <= cfg.budget as u128 && cfg.s_max.is_none_or(|m| s <= m) {
            let r = eval_local(f, p, s, cfg.budget)?;
            let normalized = r.modulus * (p as f64).powf(s as f64 / hf) / (s as f64).powi(nu_eff as i32);
            rows.push(BoundRow { p, s, re: r.value.re, im: r.value.im, modulus: r.modulus, normalized });
            s += 1;
        }
    }
    let mut observed_constant = BTreeMap::new();
    for r in rows.iter().filter(|r| r.s <= cfg.s_ref) {
        let e = observed_constant.entry(r.p).or_insert(0.0f64);
        *e = e.max(r.normalized);
    }
    let violations = rows
        .iter()
        .filter(|r| r.s > cfg.s_ref && r.normalized > observed_constant.get(&r.p).copied().unwrap_or(0.0) * (1.0 + BOUND_TOLERANCE))
        .cloned()
        .collect();
    let max_normalized = rows.iter().map(|r| r.normalized).fold(0.0, f64::max);
    Ok(BoundReport {
        polynomial: f.to_string(),
        h,
        nu_eff,
        s_ref: cfg.s_ref,
        excluded_primes: excluded,
        rows,
        observed_constant,
        max_normalized,
        violations,
    })
}
