//! Adapted coordinates by iterated rational shears.
//!
//! While the principal face is a compact edge whose principal root has
//! multiplicity above the Newton distance, the root `ξ` is rational and the
//! edge slope `a` is an integer, so `y → y + ξ·x^a` is a polynomial change
//! of variables that strictly raises the Newton distance. If the followed
//! branch is a genuine power series the loop never ends; that case is
//! detected from squarefree factor data and closed off with `h = N`.

use num_traits::Zero;
use serde::Serialize;

use crate::edge::{check_edge_lemma, edge_invariants, factor_edge, is_exceptional_class, EdgeError, EdgeRole};
use crate::newton::{Face, GeometryError, NewtonPolygon};
use crate::poly::{polynomial_roots_in_y, squarefree_decompose_in_y, Axis, PolyError};
use crate::scalar::serde_rat;
use crate::{QPoly, QUniPoly, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AdaptError {
    #[error("polynomial has a linear term at the origin; use the gradient evaluation instead")]
    LinearTerm,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Edge(#[from] EdgeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("non-adapted coordinates without a valid shear: {0}")]
    ConditionViolation(String),
    #[error("step cap {cap} reached before the coordinates became adapted")]
    StepCap { cap: usize, partial: Box<AdaptationResult> },
}

/// Which adaptedness criterion holds or fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AdaptReason {
    Vertex,
    UnboundedEdge,
    CompactEdgeMprAtMostD {
        m_pr: u32,
        #[serde(with = "serde_rat")]
        d: Rational,
    },
    CompactEdgeMprAboveD {
        m_pr: u32,
        #[serde(with = "serde_rat")]
        d: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Adaptedness {
    pub adapted: bool,
    pub reason: AdaptReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdaptStep {
    /// The variable being shifted: `Y` means `y → y + ξ·x^a`.
    pub direction: Axis,
    #[serde(with = "serde_rat")]
    pub root: Rational,
    pub exponent: u32,
    #[serde(with = "serde_rat")]
    pub d_before: Rational,
    #[serde(with = "serde_rat")]
    pub d_after: Rational,
    pub principal_multiplicity: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Adapted,
    StabilizedInfiniteBranch,
    StepCap,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdaptationResult {
    /// Accumulated shear in the direction of the steps.
    #[serde(serialize_with = "ser_poly_x")]
    pub shear: QUniPoly,
    #[serde(serialize_with = "ser_bivar")]
    pub final_poly: QPoly,
    pub final_face: Face,
    #[serde(with = "serde_rat")]
    pub height: Rational,
    pub nu: u8,
    pub terminated: Termination,
    pub steps: Vec<AdaptStep>,
    pub exceptional_class: bool,
    /// Input followed by every sheared polynomial, in the original axes.
    #[serde(skip)]
    pub transforms: Vec<QPoly>,
}

fn ser_poly_x<S: serde::Serializer>(p: &QUniPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn ser_bivar<S: serde::Serializer>(p: &QPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl AdaptationResult {
    pub fn direction(&self) -> Option<Axis> {
        self.steps.first().map(|s| s.direction)
    }
}

fn as_q(v: u32) -> Rational {
    Rational::from_integer(v.into())
}

fn prepare(f: &QPoly) -> Result<QPoly, AdaptError> {
    let g = f.without_constant();
    if !g.has_critical_origin() {
        return Err(AdaptError::LinearTerm);
    }
    if g.is_zero() {
        return Err(GeometryError::EmptySupport.into());
    }
    Ok(g)
}

fn adaptedness_of(g: &QPoly, np: &NewtonPolygon) -> Result<Adaptedness, AdaptError> {
    let face = np.principal_face();
    let reason = match face {
        Face::Vertex { .. } => AdaptReason::Vertex,
        Face::Horizontal { .. } | Face::Vertical { .. } => AdaptReason::UnboundedEdge,
        Face::Edge { .. } => {
            let fac = factor_edge(&np.principal_part(g), face)?;
            let m_pr = edge_invariants(&fac).m_pr;
            let d = np.newton_distance().clone();
            if as_q(m_pr) <= d {
                AdaptReason::CompactEdgeMprAtMostD { m_pr, d }
            } else {
                AdaptReason::CompactEdgeMprAboveD { m_pr, d }
            }
        }
    };
    let adapted = !matches!(reason, AdaptReason::CompactEdgeMprAboveD { .. });
    Ok(Adaptedness { adapted, reason })
}

/// Decides whether the given coordinates are adapted to `f`.
pub fn is_adapted(f: &QPoly) -> Result<Adaptedness, AdaptError> {
    let g = prepare(f)?;
    let np = NewtonPolygon::new(&g)?;
    adaptedness_of(&g, &np)
}

/// `4·deg(f)²`.
pub fn default_step_cap(f: &QPoly) -> usize {
    let d = f.total_degree().unwrap_or(1) as usize;
    4 * d * d
}

/// Rebuilds the polygon vertices from edge slopes and cluster sizes and
/// checks that every abscissa comes out integral and equal to the vertex.
pub fn vertex_formula_check(np: &NewtonPolygon) -> Result<(), String> {
    let v = np.vertices();
    let mut a_acc = as_q(v[0].0);
    for w in v.windows(2) {
        let cluster = w[0].1 - w[1].1;
        let slope = Rational::new((w[1].0 - w[0].0).into(), cluster.into());
        a_acc += slope * as_q(cluster);
        if !a_acc.is_integer() {
            return Err(format!("non-integral vertex abscissa {a_acc}"));
        }
        if a_acc != as_q(w[1].0) {
            return Err(format!("vertex abscissa {a_acc} disagrees with {}", w[1].0));
        }
    }
    Ok(())
}

/// Number of roots in `y` (with multiplicity) whose `x`-order exceeds `a`.
fn roots_beyond(g: &QPoly, a: u32) -> Result<u32, GeometryError> {
    let np = NewtonPolygon::new(g)?;
    let (face, _) = np.face_of_weight((1, a));
    Ok(match face {
        Face::Vertex { point } => point.1,
        Face::Edge { right, .. } => right.1,
        Face::Horizontal { vertex } | Face::Vertical { vertex } => vertex.1,
    })
}

/// The branch followed at exponent `a` is an isolated power-series root of
/// multiplicity `n` that is not a polynomial.
fn branch_is_stable(w: &QPoly, a: u32, n: u32) -> bool {
    let dec = squarefree_decompose_in_y(w);
    let Some(p) = dec.factor_with_multiplicity(n) else {
        return false;
    };
    if roots_beyond(w, a).ok() != Some(n) || roots_beyond(p, a).ok() != Some(1) {
        return false;
    }
    let bound = p.deg_x().unwrap_or(0);
    !polynomial_roots_in_y(p, bound)
        .iter()
        .any(|r| r.order().is_none_or(|o| o > a))
}

/// Runs the shear iteration with the default step cap.
pub fn adapt(f: &QPoly) -> Result<AdaptationResult, AdaptError> {
    adapt_capped(f, default_step_cap(f))
}

pub fn adapt_capped(f: &QPoly, step_cap: usize) -> Result<AdaptationResult, AdaptError> {
    let g = prepare(f)?;
    let exceptional_class = is_exceptional_class(&g);
    let deg_y = f.deg_y().unwrap_or(0) as usize;
    let mut direction: Option<Axis> = None;
    // working polynomial, always sheared in y; swapped back for x steps
    let mut w = g.clone();
    let mut shear = QUniPoly::zero();
    let mut steps: Vec<AdaptStep> = Vec::new();
    let mut transforms = vec![f.clone()];
    let mut np = NewtonPolygon::new(&w)?;
    let to_user = |p: &QPoly, dir: Option<Axis>| if dir == Some(Axis::X) { p.swap_xy() } else { p.clone() };

    loop {
        vertex_formula_check(&np).map_err(AdaptError::ConditionViolation)?;
        let status = adaptedness_of(&w, &np)?;
        if status.adapted {
            let final_poly = to_user(&w, direction);
            let user_np = NewtonPolygon::new(&final_poly)?;
            let mut out = AdaptationResult {
                shear,
                final_face: user_np.principal_face().clone(),
                height: user_np.newton_distance().clone(),
                final_poly,
                nu: 0,
                terminated: Termination::Adapted,
                steps,
                exceptional_class,
                transforms,
            };
            out.nu = varchenko_nu(&out);
            return Ok(out);
        }
        if steps.len() >= step_cap {
            let final_poly = to_user(&w, direction);
            let user_np = NewtonPolygon::new(&final_poly)?;
            let partial = AdaptationResult {
                shear,
                final_face: user_np.principal_face().clone(),
                height: user_np.newton_distance().clone(),
                final_poly,
                nu: 0,
                terminated: Termination::StepCap,
                steps,
                exceptional_class,
                transforms,
            };
            return Err(AdaptError::StepCap { cap: step_cap, partial: Box::new(partial) });
        }

        let face = np.principal_face().clone();
        let d = np.newton_distance().clone();
        let mut fac = factor_edge(&np.principal_part(&w), &face)?;
        check_edge_lemma(&fac, EdgeRole::Principal)?;
        if direction.is_none() {
            direction = Some(if fac.q == 1 {
                Axis::Y
            } else if fac.m == 1 {
                w = w.swap_xy();
                np = NewtonPolygon::new(&w)?;
                let face = np.principal_face().clone();
                fac = factor_edge(&np.principal_part(&w), &face)?;
                Axis::X
            } else {
                return Err(AdaptError::ConditionViolation(format!(
                    "principal edge weights ({}, {}) admit no integral shear",
                    fac.q, fac.m
                )));
            });
        }
        if fac.q != 1 {
            return Err(AdaptError::ConditionViolation(format!(
                "edge slope {}/{} is not integral in the active direction",
                fac.m, fac.q
            )));
        }
        let above: Vec<_> = fac.roots.iter().filter(|r| as_q(r.mult) > d).collect();
        if above.len() != 1 || fac.irrational.iter().any(|b| as_q(b.mult) > d) {
            return Err(AdaptError::ConditionViolation("no unique rational principal root".into()));
        }
        let (xi, n_mult) = (above[0].xi.clone(), above[0].mult);
        let a = fac.m;
        if let Some(prev) = steps.last() {
            if a <= prev.exponent {
                return Err(AdaptError::ConditionViolation(format!(
                    "shear exponent {a} does not exceed the previous {}",
                    prev.exponent
                )));
            }
        }
        let term = QUniPoly::monomial(xi.clone(), a);
        w = w.shear_y(&term)?;
        shear = &shear + &term;
        np = NewtonPolygon::new(&w)?;
        let d_after = np.newton_distance().clone();
        if d_after <= d {
            return Err(AdaptError::ConditionViolation(format!("distance did not increase: {d} -> {d_after}")));
        }
        transforms.push(to_user(&w, direction));
        steps.push(AdaptStep {
            direction: direction.expect("set above"),
            root: xi,
            exponent: a,
            d_before: d,
            d_after,
            principal_multiplicity: n_mult,
        });

        let window = deg_y + 1;
        if steps.len() >= window
            && steps[steps.len() - window..].iter().all(|s| s.principal_multiplicity == n_mult)
            && !adaptedness_of(&w, &np)?.adapted
            && branch_is_stable(&w, a, n_mult)
        {
            let final_poly = to_user(&w, direction);
            let user_np = NewtonPolygon::new(&final_poly)?;
            return Ok(AdaptationResult {
                shear,
                final_face: user_np.principal_face().clone(),
                height: as_q(n_mult),
                final_poly,
                nu: 0,
                terminated: Termination::StabilizedInfiniteBranch,
                steps,
                exceptional_class,
                transforms,
            });
        }
    }
}

/// Varchenko exponent from an adaptation run.
///
/// Zero unless `h ≥ 2`. On an adapted exit it is one when the principal
/// face is a vertex, and also when it is a compact edge with `m_pr = d`
/// outside the quadratic-power form: a rational root of multiplicity `d`
/// then exists and shearing along it turns the principal face into a vertex.
pub fn varchenko_nu(result: &AdaptationResult) -> u8 {
    if result.height < as_q(2) || result.terminated != Termination::Adapted {
        return 0;
    }
    match &result.final_face {
        Face::Vertex { .. } => 1,
        face @ Face::Edge { .. } => {
            let Ok(np) = NewtonPolygon::new(&result.final_poly) else { return 0 };
            let Ok(fac) = factor_edge(&np.principal_part(&result.final_poly), face) else { return 0 };
            let d = np.newton_distance().clone();
            let inv = edge_invariants(&fac);
            let rational_at_d = fac.roots.iter().any(|r| as_q(r.mult) == d);
            u8::from(as_q(inv.m_pr) == d && rational_at_d && !inv.is_exceptional_quadratic)
        }
        _ => 0,
    }
}

/// The exponent to use in the local-sum bound: one on the exceptional
/// class, otherwise the Varchenko exponent.
pub fn effective_nu_for_bound(f: &QPoly, result: &AdaptationResult) -> u8 {
    if is_exceptional_class(&f.without_constant()) {
        1
    } else {
        varchenko_nu(result)
    }
}

/// Height by brute force over single shears `y → y + c·x^k` and
/// `x → x + c·y^k`, for tests on polynomials adapted after one step.
pub fn best_single_shear_distance(f: &QPoly, coeffs: &[Rational], max_k: u32) -> Rational {
    let g = f.without_constant();
    let mut best = NewtonPolygon::new(&g).map(|np| np.newton_distance().clone()).unwrap_or_else(|_| Rational::zero());
    for k in 1..=max_k {
        for c in coeffs {
            let psi = QUniPoly::monomial(c.clone(), k);
            for h in [g.shear_y(&psi), g.shear_x(&psi)].into_iter().flatten() {
                if let Ok(np) = NewtonPolygon::new(&h) {
                    if np.newton_distance() > &best {
                        best = np.newton_distance().clone();
                    }
                }
            }
        }
    }
    best
}
