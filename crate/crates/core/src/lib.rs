#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod dilog;
pub mod equation;
pub mod error;
pub mod fixed_points;
pub mod gamma;
pub mod index;
pub mod jet;
pub mod lie;
pub mod limit;
pub mod linalg;
pub mod precision;
pub mod verify;

pub use error::{Error, Result};
