//! Exact constructions and checks for Poisson algebras: Laurent tori,
//! Jacobian potential algebras and their quotients, Weyl algebras and
//! tensor products.

pub mod analysis;
pub mod bracket;
pub mod error;
pub mod exec;
pub mod graded;
pub mod groebner;
pub mod lattice;
pub mod linalg;
pub mod morphism;
pub mod poly;
pub mod random;

pub use error::{Error, Result};
pub use exec::Exec;
