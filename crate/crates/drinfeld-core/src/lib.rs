//! Exact arithmetic for rank-1 sign-normalized Drinfeld modules over the
//! coordinate ring of an elliptic curve, their tensor powers, and the
//! associated special zeta values.
//!
//! Everything is computed exactly: finite field elements through lookup
//! tables, elements of the function field K = F_q(theta, eta) as reduced
//! fractions, functions on the curve as reduced y-linear fractions, and
//! series only where a certified precision bound exists.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod anderson;
pub mod curve;
pub mod error;
pub mod fq;
pub mod fqpoly;
pub mod func;
pub mod kfield;
pub mod kpoly;
pub mod laurent;
pub mod local;
pub mod matrix;
pub mod shtuka;
pub mod zeta;

pub use curve::Point;
pub use error::{Error, Result};
pub use fq::{FieldDesc, FqElem};
pub use fqpoly::{FqPoly, ThetaRat};
pub use func::CurveFunc;
pub use kfield::{KContext, KElem};
pub use kpoly::KPoly;
