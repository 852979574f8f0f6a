#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod coeffs;
pub mod diffop;
pub mod periodic;
pub mod error;
pub mod expr;
pub mod family;
pub mod quadrature;
pub mod recurrence;
pub mod schrodinger;
pub mod specfun;
pub mod verify;

mod par;

pub use error::{Error, Result};
