use thiserror::Error;

use crate::finset::Atom;

/// Errors raised by the engine. Every variant is an input or budget
/// problem; mathematical "no" answers are ordinary return values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(Atom),
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(Atom),
    #[error("unknown element `{0}`")]
    UnknownElement(Atom),
    #[error("map is undefined on `{0}`")]
    UndefinedOnElement(Atom),
    #[error("chain stage {depth} would hold more than {cap} elements")]
    DepthBudgetExceeded { depth: usize, cap: usize },
    #[error("size cap of {cap} exceeded")]
    SizeCapExceeded { cap: usize },
    #[error("subset does not generate the algebra ({reached} of {carrier} elements reached)")]
    NotGenerating { reached: usize, carrier: usize },
    #[error("map is not a homomorphism: `{op}` fails at {at}")]
    NotHomomorphism { op: String, at: String },
    #[error("not a monoid: {0}")]
    NotAMonoid(String),
    #[error("operation table for `{0}` is incomplete or inconsistent")]
    BadTable(String),
    #[error("carrier of {0} is not finite and no bound was given")]
    CarrierNotMaterializable(String),
    #[error("link {stage} -> {} is not injective", stage + 1)]
    MonoFlagViolation { stage: usize },
    #[error("chain is not flagged as a chain of monomorphisms")]
    MonoFlagUnset,
    #[error("cocone legs do not commute with link {stage} -> {}", stage + 1)]
    NotACocone { stage: usize },
    #[error("chain budget exceeded at stage {0}")]
    BudgetExceeded(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
