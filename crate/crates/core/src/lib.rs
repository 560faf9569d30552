//! Dirichlet L-values on the critical line with rigorous error radii,
//! explicit hybrid bounds for `|L(1/2+it, χ)|`, and the machinery to check
//! those bounds numerically.

// NaN-rejecting `!(x >= y)` guards are intentional throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod bounds;
pub mod characters;
pub mod error;
pub mod expsums;
pub mod harness;
pub mod lfunc;
pub mod numeric;

pub use error::{Error, Result};
