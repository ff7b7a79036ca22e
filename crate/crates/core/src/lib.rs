//! Exact computation of parallel telescopers for hyperexponential functions
//! and of defining operators for parameterized Picard–Vessiot extensions.
//!
//! Variable index 0 is the integration variable `t`; indices `1..=n` are the
//! parameters `x1, ..., xn`. All arithmetic is exact over the rationals.

pub mod error;
pub mod exec;
pub mod gcd;
pub mod hyperexp;
pub mod linalg;
mod modgcd;
pub mod ore;
pub mod paratele;
pub mod poly;
pub mod ratfun;
pub mod ppv;
pub mod rde;
pub mod syntax;
pub mod telescope;
pub mod upoly;

pub use error::{Error, ErrorClass, Result};
pub use poly::{MPoly, Rat};
pub use ratfun::RatFun;
