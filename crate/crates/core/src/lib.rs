#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod completion;
pub mod error;
pub mod experiments;
pub mod graphs;
pub mod linalg;
pub mod sampling;

pub use error::{Error, Result};
pub use nalgebra;
