//! Exact sparse Laurent polynomials over Q with optional formal parameters.

mod exponent;
mod laurent;
mod scalar;
mod text;

pub use exponent::{grevlex, monomials_of_degree, monomials_up_to_degree, ExponentVector};
pub use laurent::LaurentPoly;
pub use scalar::Scalar;
pub use text::{default_names, parse_poly, parse_scalar, render, render_latex, VarContext};

/// Largest supported number of variables.
pub const MAX_ARITY: usize = 16;
