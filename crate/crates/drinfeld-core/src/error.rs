//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

/// Errors produced by construction, arithmetic, and verification routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Field parameters outside the supported range (q must be a prime power <= 256).
    FieldUnsupported(String),
    /// Modulus polynomial is missing, reducible, or malformed.
    BadModulus(String),
    /// Curve coefficients define a singular Weierstrass equation.
    SingularCurve,
    /// Division by zero in a field, polynomial ring, or function field.
    DivisionByZero,
    /// Degree or sign requested for the zero element.
    DegreeOfZero,
    /// Element is not a q-th power where one was required.
    NotAPower,
    /// Point fails the curve equation.
    PointOffCurve,
    /// Operation requires an affine point.
    PointAtInfinity,
    /// Function has a pole at the evaluation point; payload is the pole order.
    PoleAtPoint(i64),
    /// Residue requested at a point where the invariant differential needs a
    /// different uniformizer (2y + a1 t + a3 vanishes).
    TwoTorsionPoint,
    /// Search for the shtuka point found no admissible candidate.
    SearchExhausted,
    /// Class number of the coordinate ring is not 1; payload is the class number.
    ClassNumberUnsupported(u64),
    /// Parameter outside the documented range (tensor rank, exponent, index).
    RangeUnsupported(String),
    /// Input element must lie in the coordinate ring (polynomial, denominator 1).
    NotIntegral,
    /// Series precision was exhausted before the result was determined.
    PrecisionExhausted,
    /// An internal consistency check failed; indicates a construction bug
    /// or an input outside the supported regime.
    InternalCheck(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::FieldUnsupported(m) => write!(f, "unsupported field: {m}"),
            Error::BadModulus(m) => write!(f, "bad modulus: {m}"),
            Error::SingularCurve => write!(f, "curve is singular"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::DegreeOfZero => write!(f, "degree of zero element"),
            Error::NotAPower => write!(f, "element is not a q-th power"),
            Error::PointOffCurve => write!(f, "point does not satisfy the curve equation"),
            Error::PointAtInfinity => write!(f, "operation requires an affine point"),
            Error::PoleAtPoint(k) => write!(f, "function has a pole of order {k} at the point"),
            Error::TwoTorsionPoint => write!(f, "point is 2-torsion; residue uniformizer unsupported"),
            Error::SearchExhausted => write!(f, "search found no admissible shtuka point"),
            Error::ClassNumberUnsupported(h) => write!(f, "class number {h} != 1 is unsupported"),
            Error::RangeUnsupported(m) => write!(f, "parameter out of range: {m}"),
            Error::NotIntegral => write!(f, "element must be integral (denominator 1)"),
            Error::PrecisionExhausted => write!(f, "series precision exhausted"),
            Error::InternalCheck(m) => write!(f, "internal consistency check failed: {m}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
