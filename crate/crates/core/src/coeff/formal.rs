use serde::{Deserialize, Serialize};

use super::{MultiIndex, Scalar, SparsePoly};
use crate::error::{Error, Result};

/// Element of the truncated polynomial algebra `C[z_1..z_n]/(z)^{r+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedFormalCoeff {
    n: usize,
    r: u32,
    poly: SparsePoly<MultiIndex>,
}

impl TruncatedFormalCoeff {
    pub fn zero(n: usize, r: u32) -> Self {
        TruncatedFormalCoeff {
            n,
            r,
            poly: SparsePoly::new(),
        }
    }

    pub fn constant(n: usize, r: u32, c: Scalar) -> Self {
        Self::monomial(n, r, MultiIndex::zero(n), c)
    }

    pub fn one(n: usize, r: u32) -> Self {
        Self::constant(n, r, Scalar::one())
    }

    /// `c * z^alpha`, or zero when `|alpha| > r`.
    pub fn monomial(n: usize, r: u32, alpha: MultiIndex, c: Scalar) -> Self {
        let mut out = Self::zero(n, r);
        if alpha.len() == n && alpha.order() <= r {
            out.poly.add_term(alpha, c);
        }
        out
    }

    /// The variable `z_{i+1}` (zero-based `i`).
    pub fn variable(n: usize, r: u32, i: usize) -> Self {
        Self::monomial(n, r, MultiIndex::unit(n, i), Scalar::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, Scalar)>>(
        n: usize,
        r: u32,
        terms: I,
    ) -> Result<Self> {
        let mut out = Self::zero(n, r);
        for (alpha, c) in terms {
            if alpha.len() != n {
                return Err(Error::ModelMismatch(format!(
                    "multi-index of length {} in a model with n = {n}",
                    alpha.len()
                )));
            }
            if alpha.order() <= r {
                out.poly.add_term(alpha, c);
            }
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Scalar {
        self.poly.coeff(alpha)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.poly.terms()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.r != other.r {
            return Err(Error::ModelMismatch(format!(
                "formal algebras (n={}, r={}) and (n={}, r={})",
                self.n, self.r, other.n, other.r
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(TruncatedFormalCoeff {
            poly: self.poly.add(&other.poly),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(TruncatedFormalCoeff {
            poly: self.poly.sub(&other.poly),
            ..self.clone()
        })
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        TruncatedFormalCoeff {
            poly: self.poly.scale(s),
            ..self.clone()
        }
    }

    /// Product in the quotient ring; monomials of order above `r` are discarded.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let r = self.r;
        let poly = self.poly.mul_with(&other.poly, |a, b| {
            let c = a.add(b);
            (c.order() <= r).then_some(c)
        });
        Ok(TruncatedFormalCoeff {
            poly,
            ..self.clone()
        })
    }

    pub fn to_terms(&self) -> Vec<(MultiIndex, Scalar)> {
        self.poly
            .terms()
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect()
    }
}

/// Sorted `[exponent-list, scalar]` pairs.
impl Serialize for TruncatedFormalCoeff {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_terms().serialize(s)
    }
}

/// Wire form of a coefficient whose model parameters come from context.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(transparent)]
pub struct TermList(pub Vec<(Vec<u32>, Scalar)>);
