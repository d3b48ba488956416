pub mod bihermitian;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod fields;
pub mod foliation;
pub mod generalized;
pub mod pointwise;
pub mod samples;
pub mod tensor;

pub use error::{Error, Result};
