//! Exact normalization of Artin-Schreier and Kummer generators over
//! valued rational function fields, with checkable certificates.

pub mod certify;
pub mod cli;
pub mod coeff;
pub mod engine_rt;
pub mod engine_vt;
pub mod error;
pub mod gf;
pub mod laurent;
pub mod poly;
pub mod units;
pub mod values;

pub use error::{Error, Result};
