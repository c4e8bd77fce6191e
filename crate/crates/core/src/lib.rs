#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod conditions;
pub mod error;
pub mod evolution;
pub mod oracle;
pub mod params;
pub mod swap;
pub mod trajectory;
pub mod verify;

pub use error::{Error, Result};
