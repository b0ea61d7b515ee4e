//! Crystal bases of type `A_n` realized by Nakajima monomials, extended
//! Nakajima monomials and Young tableaux.

pub mod binf;
pub mod bla;
pub mod cartan;
pub mod checks;
pub mod error;
pub mod graph;
pub mod monomial;
pub mod signature;
pub mod tableau;

pub use error::{Error, Result, Violation};
