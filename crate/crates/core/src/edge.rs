//! Quasi-homogeneous factorization of compact-edge polynomials and the
//! invariants read off from it.
//!
//! An edge on `q·t1 + m·t2 = n` with endpoints `(α, β + qM)` and
//! `(α + mM, β)` carries the polynomial
//! `x^(α+mM) y^β · T(y^q / x^m)` with `deg T = M` and `T(0) ≠ 0`, so
//! factoring `T` over `Q` yields the factorization
//! `c·x^α·y^β·∏(y^q − ξ_j x^m)^(n_j)`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::primes_up_to;
use crate::newton::{Face, NewtonPolygon};
use crate::poly::factor::{discriminant, factor_univar, rational_prime_support, resultant};
use crate::scalar::serde_rat;
use crate::{QPoly, QUniPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EdgeError {
    #[error("face is not a compact edge")]
    NotAnEdge,
    #[error("polynomial has a term off the edge or fewer than two terms")]
    NotOnEdge,
    #[error("reconstruction of the edge polynomial failed")]
    Reconstruction,
    #[error("edge lemma violated: {0}")]
    LemmaViolation(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRoot {
    #[serde(with = "serde_rat")]
    pub xi: Rational,
    pub mult: u32,
}

/// Monic irreducible factor of `T` of degree ≥ 2, standing for `degree`
/// conjugate roots of equal multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrationalBlock {
    #[serde(serialize_with = "ser_minpoly", deserialize_with = "de_minpoly")]
    pub minpoly: QUniPoly,
    pub mult: u32,
}

fn ser_minpoly<S: serde::Serializer>(p: &QUniPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string_in("t"))
}

fn de_minpoly<'de, D: serde::Deserializer<'de>>(d: D) -> Result<QUniPoly, D::Error> {
    use serde::de::Error;
    let s = String::deserialize(d)?;
    crate::poly::parse_univar(&s.replace('t', "x")).map_err(D::Error::custom)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeFactorization {
    pub alpha: u32,
    pub beta: u32,
    pub q: u32,
    pub m: u32,
    pub n: u32,
    #[serde(rename = "M")]
    pub big_m: u32,
    pub roots: Vec<RationalRoot>,
    pub irrational: Vec<IrrationalBlock>,
    #[serde(with = "serde_rat")]
    pub leading_coefficient: Rational,
    /// False if a block of degree ≥ 4 may still be reducible.
    pub certified: bool,
}

impl EdgeFactorization {
    /// `T(t) = c·∏(t − ξ)^n_j·∏ P(t)^n_b`.
    pub fn dehomogenized(&self) -> QUniPoly {
        let mut t = QUniPoly::constant(self.leading_coefficient.clone());
        for r in &self.roots {
            t = &t * &QUniPoly::from_coeffs([-r.xi.clone(), Rational::one()]).pow(r.mult);
        }
        for b in &self.irrational {
            t = &t * &b.minpoly.pow(b.mult);
        }
        t
    }

    /// Expands the factorization back into the edge polynomial.
    pub fn expand(&self) -> QPoly {
        let t = self.dehomogenized();
        QPoly::from_terms(t.terms().map(|(e, c)| {
            ((self.alpha + self.m * (self.big_m - e), self.beta + self.q * e), c.clone())
        }))
    }

    /// Root multiplicities, each irrational block counted once per conjugate.
    pub fn root_multiplicities(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.roots.iter().map(|r| (r.mult, true)).chain(
            self.irrational
                .iter()
                .flat_map(|b| std::iter::repeat_n((b.mult, false), b.minpoly.degree().unwrap_or(0) as usize)),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeInvariants {
    #[serde(with = "serde_rat")]
    pub d_tau: Rational,
    pub m_pr: u32,
    #[serde(rename = "m_Q")]
    pub m_q: u32,
    #[serde(with = "serde_rat")]
    pub height_qh: Rational,
    pub is_exceptional_quadratic: bool,
}

/// Where the edge sits relative to the bisectrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeRole {
    Principal,
    NonPrincipal,
}

/// Factors the polynomial of a compact edge.
pub fn factor_edge(f_tau: &QPoly, face: &Face) -> Result<EdgeFactorization, EdgeError> {
    let Face::Edge { left, right, q, m, n } = *face else {
        return Err(EdgeError::NotAnEdge);
    };
    if f_tau.num_terms() < 2 {
        return Err(EdgeError::NotOnEdge);
    }
    let (alpha, beta) = (left.0, right.1);
    let big_m = (right.0 - alpha) / m;
    let mut t = QUniPoly::zero();
    for ((j, k), c) in f_tau.terms() {
        if !face.contains((j, k)) || (k - beta) % q != 0 {
            return Err(EdgeError::NotOnEdge);
        }
        t.add_term((k - beta) / q, c.clone());
    }
    if t.coeff(0).is_zero() || t.degree() != Some(big_m) {
        return Err(EdgeError::NotOnEdge);
    }
    let fac = factor_univar(&t);
    let mut roots = Vec::new();
    let mut irrational = Vec::new();
    for (g, mult) in fac.factors {
        if g.degree() == Some(1) {
            roots.push(RationalRoot { xi: -g.coeff(0), mult });
        } else {
            irrational.push(IrrationalBlock { minpoly: g, mult });
        }
    }
    roots.sort_by(|a: &RationalRoot, b| a.xi.cmp(&b.xi));
    let out = EdgeFactorization {
        alpha,
        beta,
        q,
        m,
        n,
        big_m,
        roots,
        irrational,
        leading_coefficient: fac.leading,
        certified: fac.certified,
    };
    if out.expand() != *f_tau {
        return Err(EdgeError::Reconstruction);
    }
    Ok(out)
}

/// Factorization of every compact edge of `f`, in polygon order.
pub fn factor_all_edges(f: &QPoly, np: &NewtonPolygon) -> Result<Vec<(Face, EdgeFactorization)>, EdgeError> {
    np.compact_edges()
        .map(|e| {
            let ft = np.face_polynomial(f, e).expect("own face");
            factor_edge(&ft, e).map(|fac| (e.clone(), fac))
        })
        .collect()
}

fn is_quadratic_power(fact: &EdgeFactorization) -> bool {
    fact.alpha == 0
        && fact.beta == 0
        && fact.q == 1
        && fact.m == 1
        && fact.roots.is_empty()
        && fact.irrational.len() == 1
        && fact.irrational[0].minpoly.degree() == Some(2)
}

pub fn edge_invariants(fact: &EdgeFactorization) -> EdgeInvariants {
    let d_tau = Rational::new(fact.n.into(), (fact.q + fact.m).into());
    let m_pr = fact.root_multiplicities().map(|(n, _)| n).max().unwrap_or(0);
    let m_q = fact.roots.iter().map(|r| r.mult).chain([fact.alpha, fact.beta]).max().unwrap_or(0);
    let height_qh = d_tau.clone().max(Rational::from_integer(m_q.into()));
    EdgeInvariants { d_tau, m_pr, m_q, height_qh, is_exceptional_quadratic: is_quadratic_power(fact) }
}

/// `(qα + mβ + qmM)/(q + m)`, equal to `n/(q+m)` by construction.
pub fn d_tau_from_factors(fact: &EdgeFactorization) -> Rational {
    let num = fact.q * fact.alpha + fact.m * fact.beta + fact.q * fact.m * fact.big_m;
    Rational::new(num.into(), (fact.q + fact.m).into())
}

/// Checks the multiplicity constraints that any compact edge must obey.
pub fn check_edge_lemma(fact: &EdgeFactorization, role: EdgeRole) -> Result<(), EdgeError> {
    let d = edge_invariants(fact).d_tau;
    let as_q = |v: u32| Rational::from_integer(v.into());
    match role {
        EdgeRole::NonPrincipal => {
            if as_q(fact.big_m) > d {
                return Err(EdgeError::LemmaViolation(format!("M = {} exceeds d_tau = {d}", fact.big_m)));
            }
        }
        EdgeRole::Principal => {
            let mults: Vec<(u32, bool)> = fact.root_multiplicities().collect();
            let above: Vec<&(u32, bool)> = mults.iter().filter(|(n, _)| as_q(*n) > d).collect();
            if let Some(&&(_, rational)) = above.first() {
                if above.len() > 1 || mults.iter().filter(|(n, _)| as_q(*n) >= d).count() > 1 {
                    return Err(EdgeError::LemmaViolation("several multiplicities reach d".into()));
                }
                if !rational {
                    return Err(EdgeError::LemmaViolation("multiplicity above d on an irrational root".into()));
                }
            }
            let at: Vec<&(u32, bool)> = mults.iter().filter(|(n, _)| as_q(*n) == d).collect();
            if at.len() >= 2 {
                let quadratic = fact.q == 1 && fact.m == 1 && fact.alpha == 0 && fact.beta == 0 && as_q(fact.big_m) == &d * as_q(2);
                if !quadratic {
                    return Err(EdgeError::LemmaViolation("repeated multiplicity d outside the quadratic-power form".into()));
                }
            } else if at.len() == 1 && !at[0].1 && above.is_empty() {
                return Err(EdgeError::LemmaViolation("unique multiplicity d on an irrational root".into()));
            }
        }
    }
    Ok(())
}

/// True iff the principal part is `a·Q(x, y)^n` with `Q` an irreducible
/// quadratic form over `Q`.
pub fn is_exceptional_class(f: &QPoly) -> bool {
    let Ok(np) = NewtonPolygon::new(f) else {
        return false;
    };
    let face = np.principal_face();
    if !matches!(face, Face::Edge { .. }) {
        return false;
    }
    let part = np.principal_part(f);
    factor_edge(&part, face).map(|fac| is_quadratic_power(&fac)).unwrap_or(false)
}

/// A finite set of primes outside which coefficients, edge roots and root
/// gaps of the given polynomials are all `p`-adic units. Composite numbers
/// that resisted factorization are kept whole and tested by divisibility.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalPrimes {
    pub primes: BTreeSet<u64>,
    pub unfactored: Vec<String>,
}

impl ExceptionalPrimes {
    pub fn contains(&self, p: u64) -> bool {
        self.primes.contains(&p)
            || self.unfactored.iter().any(|u| (u.parse::<BigUint>().expect("decimal") % p).is_zero())
    }

    fn add_rational(&mut self, r: &Rational) {
        if r.is_zero() {
            return;
        }
        let (ps, rest) = rational_prime_support(r);
        self.primes.extend(ps);
        self.unfactored.extend(rest.into_iter().map(|u| u.to_string()));
    }
}

pub fn exceptional_primes(f: &QPoly, transforms: &[QPoly]) -> ExceptionalPrimes {
    let mut out = ExceptionalPrimes::default();
    out.primes.extend(primes_up_to(u64::from(f.total_degree().unwrap_or(0))));
    for g in std::iter::once(f).chain(transforms.iter()) {
        for (_, c) in g.terms() {
            out.add_rational(c);
        }
        let Ok(np) = NewtonPolygon::new(g) else { continue };
        for e in np.compact_edges() {
            let part = np.face_polynomial(g, e).expect("own face");
            let Ok(fac) = factor_edge(&part, e) else { continue };
            let t = fac.dehomogenized();
            out.add_rational(&t.leading_coeff());
            out.add_rational(&t.coeff(0));
            let irreducibles: Vec<QUniPoly> = fac
                .roots
                .iter()
                .map(|r| QUniPoly::from_coeffs([-r.xi.clone(), Rational::one()]))
                .chain(fac.irrational.iter().map(|b| b.minpoly.clone()))
                .collect();
            for (i, a) in irreducibles.iter().enumerate() {
                for (_, c) in a.terms() {
                    out.add_rational(c);
                }
                out.add_rational(&discriminant(a));
                for b in &irreducibles[i + 1..] {
                    out.add_rational(&resultant(a, b));
                }
            }
        }
    }
    out.unfactored.sort();
    out.unfactored.dedup();
    out
}

/// Machine-size primes in `candidates` that are not exceptional.
pub fn admissible_primes(ex: &ExceptionalPrimes, candidates: &[u64]) -> Vec<u64> {
    candidates.iter().copied().filter(|&p| !ex.contains(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::scalar::{rat, rat_int};

    fn principal(s: &str) -> (EdgeFactorization, EdgeInvariants) {
        let f = parse_poly(s).unwrap();
        let np = NewtonPolygon::new(&f).unwrap();
        let fac = factor_edge(&np.principal_part(&f), np.principal_face()).unwrap();
        let inv = edge_invariants(&fac);
        (fac, inv)
    }

    #[test]
    fn circle_edge() {
        let (fac, inv) = principal("y^2 + x^2");
        assert_eq!((fac.alpha, fac.beta, fac.q, fac.m), (0, 0, 1, 1));
        assert!(fac.roots.is_empty());
        assert_eq!(fac.irrational.len(), 1);
        assert_eq!(fac.irrational[0].minpoly.to_string_in("t"), "t^2 + 1");
        assert_eq!(inv.m_pr, 1);
        assert!(inv.is_exceptional_quadratic);
    }

    #[test]
    fn square_edge() {
        let (fac, inv) = principal("y^2 - 2*x^2*y + x^4");
        assert_eq!(fac.roots, vec![RationalRoot { xi: rat_int(1), mult: 2 }]);
        assert_eq!((inv.m_pr, inv.m_q), (2, 2));
    }

    #[test]
    fn lines_with_axis_factor() {
        let f = parse_poly("x*(y-x)*(y-2*x)^3").unwrap();
        let np = NewtonPolygon::new(&f).unwrap();
        let face = np.compact_edges().next().unwrap().clone();
        let fac = factor_edge(&f, &face).unwrap();
        assert_eq!(fac.alpha, 1);
        assert_eq!(fac.big_m, 4);
        assert_eq!(fac.roots, vec![RationalRoot { xi: rat_int(1), mult: 1 }, RationalRoot { xi: rat_int(2), mult: 3 }]);
        assert_eq!(edge_invariants(&fac).m_pr, 3);
    }

    #[test]
    fn invariants_table() {
        for m in 1..=3u32 {
            let (_, inv) = principal(&format!("(y^2+x^2)^{m}"));
            assert_eq!(inv.d_tau, rat_int(m as i64));
            assert_eq!((inv.m_pr, inv.m_q), (m, 0));
            assert_eq!(inv.height_qh, rat_int(m as i64));
        }
        let (fac, inv) = principal("y^2 - x^3");
        assert_eq!(inv.d_tau, rat(6, 5));
        assert_eq!(inv.m_pr, 1);
        assert_eq!(d_tau_from_factors(&fac), inv.d_tau);
        let (fac, inv) = principal("(y - x^2)^3*(y + x^2)");
        assert_eq!(inv.d_tau, rat(8, 3));
        assert_eq!((inv.m_pr, inv.m_q), (3, 3));
        assert!(check_edge_lemma(&fac, EdgeRole::Principal).is_ok());
    }

    #[test]
    fn exceptional_class_examples() {
        assert!(is_exceptional_class(&parse_poly("(x^2+y^2)^2").unwrap()));
        assert!(is_exceptional_class(&parse_poly("3*(x^2+x*y+y^2)^3 + x^7").unwrap()));
        assert!(!is_exceptional_class(&parse_poly("(y^2-x^2)^2").unwrap()));
        assert!(!is_exceptional_class(&parse_poly("y^2 - x^3").unwrap()));
        assert!(!is_exceptional_class(&parse_poly("(x^2+y^2)*(x^2+2*y^2)").unwrap()));
    }

    #[test]
    fn exceptional_prime_examples() {
        let f = parse_poly("(y-x^2)^3*(y+x^2)").unwrap();
        let ex = exceptional_primes(&f, &[]);
        assert!(ex.contains(2) && ex.contains(3));
        assert!(!ex.contains(11));
        let ex = exceptional_primes(&parse_poly("x*y").unwrap(), &[]);
        assert_eq!(ex.primes.into_iter().collect::<Vec<_>>(), vec![2]);
        let ex = exceptional_primes(&parse_poly("6*x^2 + y^3").unwrap(), &[]);
        assert!(ex.contains(2) && ex.contains(3));
        // root gap 1 - 6 = -5 on the edge of (y - x)(y - 6x)
        let ex = exceptional_primes(&parse_poly("(y - x)*(y - 6*x)").unwrap(), &[]);
        assert!(ex.contains(5));
    }

    #[test]
    fn rejects_bad_input() {
        let f = parse_poly("y^2 - x^3").unwrap();
        assert_eq!(factor_edge(&f, &Face::Vertex { point: (0, 2) }), Err(EdgeError::NotAnEdge));
        let e = Face::Edge { left: (0, 2), right: (3, 0), q: 2, m: 3, n: 6 };
        assert_eq!(factor_edge(&parse_poly("y^2").unwrap(), &e), Err(EdgeError::NotOnEdge));
        assert_eq!(factor_edge(&parse_poly("y^2 + x*y").unwrap(), &e), Err(EdgeError::NotOnEdge));
    }

    #[test]
    fn json_report_fields() {
        let (fac, _) = principal("x*(y-x)*(y-2*x)^3");
        let v = serde_json::to_value(&fac).unwrap();
        assert_eq!(v["alpha"], 1);
        assert_eq!(v["roots"][1]["xi"], "2/1");
        let (fac, _) = principal("(y^2+x^2)^2");
        let v = serde_json::to_value(&fac).unwrap();
        assert_eq!(v["irrational"][0]["minpoly"], "t^2 + 1");
        assert_eq!(v["irrational"][0]["mult"], 2);
    }
}
