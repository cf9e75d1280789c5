//! Finitely presented algebras over `Set`.
//!
//! Terms of the free monad on a finite signature, ground congruence
//! closure, finite quotient algebras, bounded equational theories, the
//! adjunction between monoids and finitary monads, and ω-chain colimits of
//! finite sets.

pub mod adjunction;
pub mod algebra;
pub mod colimit;
pub mod congruence;
pub mod corpus;
pub mod equational;
pub mod error;
pub mod finset;
pub mod format;
pub mod signature;
pub mod term;

pub use error::{Error, Result};
pub use finset::{Atom, FinMap, FinSet};
pub use signature::{Signature, Symbol};
pub use term::{Term, TermId, TermStore};

/// Global budgets shared by every bounded procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of term nodes or carrier elements materialized at once.
    pub node_cap: usize,
    /// Maximum depth accepted by chain stages.
    pub max_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            node_cap: 1_000_000,
            max_depth: 8,
        }
    }
}
