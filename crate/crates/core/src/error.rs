use thiserror::Error;

use crate::value::ValueVector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no generators given")]
    EmptyGenerators,
    #[error("generators have gcd {gcd}; the semigroup has infinitely many gaps")]
    NonCoprimeGenerators { gcd: u64 },
    #[error("unsupported branch count {0} (1..={max})", max = crate::value::MAX_BRANCHES)]
    UnsupportedBranchCount(usize),
    #[error("invalid semigroup: {0}")]
    InvalidSemigroup(String),
    #[error("value sets are not nested: {0} lies in the smaller set only")]
    NotNested(ValueVector),
    #[error("saturated chains of different lengths ({first} vs {second}); input violates the good-set axioms")]
    ChainLengthMismatch { first: usize, second: usize },
    #[error("value set did not stabilize: {0}")]
    NoStabilization(String),
    #[error("input is Gorenstein (K = S)")]
    GorensteinInput,
    #[error("no lemma witness exists for a non-Gorenstein semigroup")]
    WitnessNotFound,
    #[error("sequence construction failed: {0}")]
    ConstructionFailure(String),
    #[error("semigroup axiom failure: {0}")]
    SemigroupAxiomFailure(String),
    #[error("fiber points do not share one image: {0}")]
    FiberMismatch(String),
    #[error("the declared fiber is a smooth point")]
    NotSingular,
    #[error("undeclared singularity at parameter {0}")]
    UndeclaredSingularity(String),
    #[error("parametrization is not birational onto its image: {0}")]
    NotBirational(String),
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("no proposition determines the value")]
    Inconclusive,
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
