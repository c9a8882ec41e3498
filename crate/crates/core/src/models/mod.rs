//! Finite effectful models and monadic combinatory algebras.

pub mod config;
pub mod effect;
pub mod kleisli;
pub mod mca;

pub use effect::{EffectKind, FiniteEffect, MonadCheck, Monoid};
pub use kleisli::{table_rows, KleisliComps, KleisliModel, KleisliValues, Table};
pub use config::{build_kleisli_model, find_countermodel, load_effect, Countermodel, EffectConfig, ModelConfig};
pub use mca::{closed_term_mca, ClosedTermMca, FiniteMca, Mca, Monomial};
