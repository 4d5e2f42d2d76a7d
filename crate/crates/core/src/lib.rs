pub mod algebra;
pub mod error;
pub mod hopf;
pub mod linalg;
pub mod magic;
pub mod projective;
pub mod scenario;

pub use error::{Error, Result};
