pub mod corpus;
pub mod curve;
pub mod error;
pub mod koszul;
pub mod linalg;
pub mod linear_systems;
pub mod literal;
pub mod noether;
pub mod poly;
pub mod report;
pub mod semigroup;
pub mod value;

pub use error::{Error, Result};
pub use semigroup::{GoodSemigroup, IdealValueSet, ValueSet};
pub use value::ValueVector;
