//! The untyped computational λ-calculus: terms, the equational theory,
//! Freyd-operad semantics, substitution words and finite effectful models.

pub mod adjunction;
pub mod error;
pub mod models;
pub mod operad;
pub mod renaming;
pub mod semantics;
pub mod subst_prop;
pub mod syntax;
pub mod term_model;
pub mod theory;

pub use error::{Error, Result};
