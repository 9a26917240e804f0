//! Sparse univariate and bivariate polynomials over a [`Coeff`] field.

mod bivar;
pub mod factor;
mod parse;
mod roots;
mod squarefree;
mod univar;

pub use bivar::{Axis, BivarPoly};
pub use parse::{parse_poly, parse_poly_capped, parse_univar};
pub use roots::polynomial_roots_in_y;
pub use squarefree::{squarefree_decompose_in_y, SquarefreeDecomposition};
pub use univar::UnivarPoly;


use crate::scalar::Coeff;

/// Per-variable degree cap applied by parsing, powers and shears.
pub const DEFAULT_DEGREE_CAP: u32 = 512;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: u64, cap: u32 },
}

/// Joins `(coefficient, monomial)` pairs as `a*m + b*m - ...`.
pub(crate) fn format_terms<T: Coeff>(terms: &[(T, String)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (c, m)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_empty() {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(m);
        } else {
            out.push_str(&format!("{a}*{m}"));
        }
    }
    out
}
