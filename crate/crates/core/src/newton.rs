//! Newton polygon of a bivariate polynomial at the origin.
//!
//! Only the reduced support (constant term removed) matters. The polygon is
//! the lower-left boundary of the convex hull of the support plus the
//! positive quadrant, described by its vertices ordered by increasing `t1`.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::scalar::Coeff;
use crate::{BivarPoly, Rational};

pub type Point = (u32, u32);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("the reduced support is empty (constant polynomial)")]
    EmptySupport,
    #[error("face {0:?} is not a face of this Newton polygon")]
    FaceMismatch(Face),
}

/// A face of the Newton polyhedron.
///
/// `Edge` lies on `q·t1 + m·t2 = n` with `left` the endpoint of smaller
/// `t1`. `Horizontal` is the ray `t2 = vertex.1, t1 ≥ vertex.0`; `Vertical`
/// is the ray `t1 = vertex.0, t2 ≥ vertex.1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Face {
    Vertical { vertex: Point },
    Vertex { point: Point },
    Edge { left: Point, right: Point, q: u32, m: u32, n: u32 },
    Horizontal { vertex: Point },
}

impl Face {
    pub fn is_compact(&self) -> bool {
        matches!(self, Face::Vertex { .. } | Face::Edge { .. })
    }

    pub fn contains(&self, (a, b): Point) -> bool {
        match *self {
            Face::Vertex { point } => point == (a, b),
            Face::Edge { left, right, q, m, n } => q * a + m * b == n && a >= left.0 && a <= right.0,
            Face::Horizontal { vertex } => b == vertex.1 && a >= vertex.0,
            Face::Vertical { vertex } => a == vertex.0 && b >= vertex.1,
        }
    }

    /// `n/(q+m)` for an edge; the bisectrix coordinate of the line.
    pub fn homogeneous_distance(&self) -> Option<Rational> {
        match *self {
            Face::Edge { q, m, n, .. } => Some(Rational::new(n.into(), (q + m).into())),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    vertices: Vec<Point>,
    faces: Vec<Face>,
    #[serde(rename = "d", with = "crate::scalar::serde_rat")]
    distance: Rational,
    #[serde(rename = "principal_face")]
    principal: usize,
}

/// Support without the origin.
pub fn reduced_support<T: Coeff>(f: &BivarPoly<T>) -> BTreeSet<Point> {
    f.terms().map(|(e, _)| e).filter(|&e| e != (0, 0)).collect()
}

/// Vertices of the lower-left convex boundary of `points + R²₊`.
pub fn hull_vertices(points: &BTreeSet<Point>) -> Vec<Point> {
    let mut stair: Vec<Point> = Vec::new();
    for &(a, b) in points {
        if stair.last().is_none_or(|&(_, lb)| b < lb) {
            stair.push((a, b));
        }
    }
    let cross = |o: Point, p: Point, r: Point| -> i64 {
        let (ox, oy) = (i64::from(o.0), i64::from(o.1));
        (i64::from(p.0) - ox) * (i64::from(r.1) - i64::from(p.1))
            - (i64::from(p.1) - oy) * (i64::from(r.0) - i64::from(p.0))
    };
    let mut hull: Vec<Point> = Vec::new();
    for p in stair {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

fn edge_between(left: Point, right: Point) -> Face {
    let dx = right.0 - left.0;
    let dy = left.1 - right.1;
    let g = dx.gcd(&dy);
    let (q, m) = (dy / g, dx / g);
    Face::Edge { left, right, q, m, n: q * left.0 + m * left.1 }
}

impl NewtonPolygon {
    pub fn new<T: Coeff>(f: &BivarPoly<T>) -> Result<Self, GeometryError> {
        Self::from_support(&reduced_support(f))
    }

    pub fn from_support(points: &BTreeSet<Point>) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::EmptySupport);
        }
        let vertices = hull_vertices(points);
        let mut faces = vec![Face::Vertical { vertex: vertices[0] }];
        for (i, &v) in vertices.iter().enumerate() {
            if i > 0 {
                faces.push(edge_between(vertices[i - 1], v));
            }
            faces.push(Face::Vertex { point: v });
        }
        faces.push(Face::Horizontal { vertex: *vertices.last().expect("nonempty") });

        let first = vertices[0];
        let last = *vertices.last().expect("nonempty");
        let (principal, distance) = if first.0 > first.1 {
            (0, Rational::from_integer(first.0.into()))
        } else if last.0 < last.1 {
            (faces.len() - 1, Rational::from_integer(last.1.into()))
        } else {
            faces
                .iter()
                .enumerate()
                .find_map(|(i, fc)| match *fc {
                    Face::Vertex { point } if point.0 == point.1 => {
                        Some((i, Rational::from_integer(point.0.into())))
                    }
                    Face::Edge { left, right, .. } if left.0 < left.1 && right.0 > right.1 => {
                        Some((i, fc.homogeneous_distance().expect("edge")))
                    }
                    _ => None,
                })
                .expect("the bisectrix meets the boundary")
        };
        Ok(Self { vertices, faces, distance, principal })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Vertical ray, then vertices and edges alternating, then horizontal ray.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn compact_edges(&self) -> impl Iterator<Item = &Face> + '_ {
        self.faces.iter().filter(|f| matches!(f, Face::Edge { .. }))
    }

    pub fn newton_distance(&self) -> &Rational {
        &self.distance
    }

    pub fn principal_face(&self) -> &Face {
        &self.faces[self.principal]
    }

    pub fn principal_index(&self) -> usize {
        self.principal
    }

    pub fn has_face(&self, face: &Face) -> bool {
        self.faces.contains(face)
    }

    /// Face of largest dimension minimizing `ℓ·t`, and the minimum `N(ℓ)`.
    pub fn face_of_weight(&self, l: (u32, u32)) -> (Face, u64) {
        assert!(l != (0, 0), "weight must be nonzero");
        let dot = |p: &Point| u64::from(l.0) * u64::from(p.0) + u64::from(l.1) * u64::from(p.1);
        let n = self.vertices.iter().map(dot).min().expect("nonempty");
        if l.0 == 0 {
            return (self.faces.last().expect("nonempty").clone(), n);
        }
        if l.1 == 0 {
            return (self.faces[0].clone(), n);
        }
        let hits: Vec<usize> = (0..self.vertices.len()).filter(|&i| dot(&self.vertices[i]) == n).collect();
        let face = if hits.len() == 1 {
            Face::Vertex { point: self.vertices[hits[0]] }
        } else {
            edge_between(self.vertices[hits[0]], self.vertices[hits[hits.len() - 1]])
        };
        (face, n)
    }

    /// Sum of the terms of `f` lying on `face` (the principal part for the
    /// principal face).
    pub fn face_polynomial<T: Coeff>(&self, f: &BivarPoly<T>, face: &Face) -> Result<BivarPoly<T>, GeometryError> {
        if !self.has_face(face) {
            return Err(GeometryError::FaceMismatch(face.clone()));
        }
        Ok(BivarPoly::from_terms(
            f.terms().filter(|(e, _)| *e != (0, 0) && face.contains(*e)).map(|(e, c)| (e, c.clone())),
        ))
    }

    pub fn principal_part<T: Coeff>(&self, f: &BivarPoly<T>) -> BivarPoly<T> {
        self.face_polynomial(f, self.principal_face()).expect("own face")
    }
}

/// Newton polygon of `f`.
pub fn newton_polygon<T: Coeff>(f: &BivarPoly<T>) -> Result<NewtonPolygon, GeometryError> {
    NewtonPolygon::new(f)
}

/// `face_of_weight` computed from `f` directly.
pub fn face_of_weight<T: Coeff>(f: &BivarPoly<T>, l: (u32, u32)) -> Result<(Face, u64), GeometryError> {
    Ok(NewtonPolygon::new(f)?.face_of_weight(l))
}

/// `face_polynomial` computed from `f` directly.
pub fn face_polynomial<T: Coeff>(f: &BivarPoly<T>, face: &Face) -> Result<BivarPoly<T>, GeometryError> {
    NewtonPolygon::new(f)?.face_polynomial(f, face)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::scalar::rat;

    fn poly(s: &str) -> NewtonPolygon {
        NewtonPolygon::new(&parse_poly(s).unwrap()).unwrap()
    }

    #[test]
    fn reduced_support_examples() {
        let s = |t: &str| reduced_support(&parse_poly(t).unwrap()).into_iter().collect::<Vec<_>>();
        assert_eq!(s("y^2 - x^3"), vec![(0, 2), (3, 0)]);
        assert!(s("5").is_empty());
        assert_eq!(s("(y-x^2)^2"), vec![(0, 2), (2, 1), (4, 0)]);
    }

    #[test]
    fn cusp_polygon() {
        let np = poly("y^2 - x^3");
        assert_eq!(np.vertices(), &[(0, 2), (3, 0)]);
        let e = Face::Edge { left: (0, 2), right: (3, 0), q: 2, m: 3, n: 6 };
        assert_eq!(np.compact_edges().collect::<Vec<_>>(), vec![&e]);
        assert_eq!(np.newton_distance(), &rat(6, 5));
        assert_eq!(np.principal_face(), &e);
        assert_eq!(np.face_of_weight((2, 3)), (e, 6));
        assert_eq!(np.face_of_weight((1, 1)), (Face::Vertex { point: (0, 2) }, 2));
    }

    #[test]
    fn square_and_vertex_cases() {
        let np = poly("(y-x^2)^2");
        assert_eq!(np.vertices(), &[(0, 2), (4, 0)]);
        assert_eq!(np.newton_distance(), &rat(4, 3));
        assert!(matches!(np.principal_face(), Face::Edge { q: 1, m: 2, n: 4, .. }));
        let np = poly("x^2*y^2 + x^5 + y^5");
        assert_eq!(np.principal_face(), &Face::Vertex { point: (2, 2) });
        assert_eq!(np.newton_distance(), &rat(2, 1));
        assert_eq!(poly("x^2*y^2").face_of_weight((5, 1)), (Face::Vertex { point: (2, 2) }, 12));
    }

    #[test]
    fn monomials_and_rays() {
        assert_eq!(poly("x^3*y").principal_face(), &Face::Vertical { vertex: (3, 1) });
        assert_eq!(poly("x^3*y").newton_distance(), &rat(3, 1));
        assert_eq!(poly("x*y^4").principal_face(), &Face::Horizontal { vertex: (1, 4) });
        let np = poly("y^3*(y+2*x^2)");
        assert_eq!(np.principal_face(), &Face::Horizontal { vertex: (2, 3) });
        assert_eq!(np.newton_distance(), &rat(3, 1));
        assert_eq!(np.face_of_weight((0, 1)).1, 3);
        assert_eq!(np.face_of_weight((1, 0)), (Face::Vertical { vertex: (0, 4) }, 0));
    }

    #[test]
    fn collinear_points_are_not_vertices() {
        let np = poly("y^3 + x*y^2 + x^2*y + x^3 + x^4*y^4");
        assert_eq!(np.vertices(), &[(0, 3), (3, 0)]);
    }

    #[test]
    fn face_polynomials() {
        let f = parse_poly("y^2 - x^3 + x^2*y^2").unwrap();
        let np = NewtonPolygon::new(&f).unwrap();
        assert_eq!(np.principal_part(&f), parse_poly("y^2 - x^3").unwrap());
        let g = parse_poly("x^2*y^2 + x^5 + y^5").unwrap();
        let npg = NewtonPolygon::new(&g).unwrap();
        assert_eq!(npg.principal_part(&g), parse_poly("x^2*y^2").unwrap());
        let h = parse_poly("(y-x^2)^2 + y^3").unwrap();
        let nph = NewtonPolygon::new(&h).unwrap();
        assert_eq!(nph.principal_part(&h), parse_poly("y^2 - 2*x^2*y + x^4").unwrap());
        let bad = Face::Vertex { point: (1, 1) };
        assert_eq!(np.face_polynomial(&f, &bad), Err(GeometryError::FaceMismatch(bad)));
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(poly("y^2 - x^3")).unwrap();
        assert_eq!(v["d"], "6/5");
        assert_eq!(v["principal_face"], 2);
        assert_eq!(v["faces"][2]["kind"], "edge");
    }
}
