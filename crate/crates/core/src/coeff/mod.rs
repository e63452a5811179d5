//! Exact arithmetic substrate: Gaussian rationals, multi-indices, the
//! truncated formal algebra and capped base polynomials.

mod base;
mod formal;
mod multi_index;
mod scalar;
mod sparse;

pub use base::{BaseMonomial, BasePoly};
pub use formal::{TermList, TruncatedFormalCoeff};
pub use multi_index::{formal_dim, MultiIndex};
pub use scalar::Scalar;
pub use sparse::SparsePoly;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Mul,
    Inv,
}

/// Field arithmetic in Q(i). `Inv` ignores `b`.
pub fn scalar_arith(a: &Scalar, b: &Scalar, op: ScalarOp) -> Result<Scalar> {
    match op {
        ScalarOp::Add => Ok(a + b),
        ScalarOp::Mul => Ok(a * b),
        ScalarOp::Inv => a.inv(),
    }
}

pub fn formal_mul(
    p: &TruncatedFormalCoeff,
    q: &TruncatedFormalCoeff,
) -> Result<TruncatedFormalCoeff> {
    p.mul(q)
}

pub fn base_mul(p: &BasePoly, q: &BasePoly) -> Result<BasePoly> {
    p.mul(q)
}
