use serde::{Deserialize, Serialize};

use super::{Scalar, SparsePoly};
use crate::error::{Error, Result};

/// Monomial `w^w * wbar^wb * zbar^zb` in the base and normal antiholomorphic
/// variables. `zb` is empty outside the ambient model.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BaseMonomial {
    pub w: u32,
    pub wb: u32,
    pub zb: Vec<u32>,
}

impl BaseMonomial {
    pub fn one(normal: usize) -> Self {
        BaseMonomial {
            w: 0,
            wb: 0,
            zb: vec![0; normal],
        }
    }

    pub fn degree(&self) -> u32 {
        self.w + self.wb + self.zb.iter().sum::<u32>()
    }

    pub fn mul(&self, other: &BaseMonomial) -> BaseMonomial {
        BaseMonomial {
            w: self.w + other.w,
            wb: self.wb + other.wb,
            zb: self.zb.iter().zip(&other.zb).map(|(a, b)| a + b).collect(),
        }
    }

    /// `[w, wb, zb_1, .., zb_n]`.
    pub fn exponents(&self) -> Vec<u32> {
        let mut v = vec![self.w, self.wb];
        v.extend(&self.zb);
        v
    }

    pub fn from_exponents(e: &[u32]) -> Option<Self> {
        if e.len() < 2 {
            return None;
        }
        Some(BaseMonomial {
            w: e[0],
            wb: e[1],
            zb: e[2..].to_vec(),
        })
    }
}

/// Finite stand-in for smooth functions on the base: polynomials in
/// `w, wbar` (and `zbar_i` in the ambient model) with total degree capped at
/// `d_cap`. Truncation by degree is not an ideal quotient once `dbar` is
/// applied, so algebra laws only hold on budget-respecting inputs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasePoly {
    d_cap: u32,
    normal: usize,
    poly: SparsePoly<BaseMonomial>,
}

impl BasePoly {
    pub fn zero(d_cap: u32, normal: usize) -> Self {
        BasePoly {
            d_cap,
            normal,
            poly: SparsePoly::new(),
        }
    }

    pub fn monomial(d_cap: u32, m: BaseMonomial, c: Scalar) -> Self {
        let normal = m.zb.len();
        let mut out = Self::zero(d_cap, normal);
        if m.degree() <= d_cap {
            out.poly.add_term(m, c);
        }
        out
    }

    pub fn constant(d_cap: u32, normal: usize, c: Scalar) -> Self {
        Self::monomial(d_cap, BaseMonomial::one(normal), c)
    }

    pub fn w(d_cap: u32, normal: usize) -> Self {
        let mut m = BaseMonomial::one(normal);
        m.w = 1;
        Self::monomial(d_cap, m, Scalar::one())
    }

    pub fn wbar(d_cap: u32, normal: usize) -> Self {
        let mut m = BaseMonomial::one(normal);
        m.wb = 1;
        Self::monomial(d_cap, m, Scalar::one())
    }

    pub fn d_cap(&self) -> u32 {
        self.d_cap
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BaseMonomial, &Scalar)> {
        self.poly.terms()
    }

    /// Largest monomial degree present, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.poly.terms().map(|(m, _)| m.degree()).max()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.d_cap != other.d_cap || self.normal != other.normal {
            return Err(Error::ModelMismatch(format!(
                "base polynomials with d_cap {} and {}",
                self.d_cap, other.d_cap
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(BasePoly {
            poly: self.poly.add(&other.poly),
            ..self.clone()
        })
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        BasePoly {
            poly: self.poly.scale(s),
            ..self.clone()
        }
    }

    /// Product with every monomial of degree above `d_cap` dropped.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let cap = self.d_cap;
        let poly = self.poly.mul_with(&other.poly, |a, b| {
            let m = a.mul(b);
            (m.degree() <= cap).then_some(m)
        });
        Ok(BasePoly {
            poly,
            ..self.clone()
        })
    }
}

impl Serialize for BasePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(Vec<u32>, Scalar)> = self
            .poly
            .terms()
            .map(|(m, c)| (m.exponents(), c.clone()))
            .collect();
        terms.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_times_wbar() {
        let p = BasePoly::w(2, 0).mul(&BasePoly::wbar(2, 0)).unwrap();
        let expected = BasePoly::monomial(
            2,
            BaseMonomial {
                w: 1,
                wb: 1,
                zb: vec![],
            },
            Scalar::one(),
        );
        assert_eq!(p, expected);
    }

    #[test]
    fn over_budget_product_vanishes() {
        let w2 = BasePoly::w(2, 0).mul(&BasePoly::w(2, 0)).unwrap();
        assert!(!w2.is_zero());
        // w^2 * wbar has degree 3 > d_cap = 2
        assert!(w2.mul(&BasePoly::wbar(2, 0)).unwrap().is_zero());
    }

    #[test]
    fn zero_annihilates() {
        let p = BasePoly::w(3, 1)
            .add(&BasePoly::constant(3, 1, Scalar::from_int(5)))
            .unwrap();
        assert!(p.mul(&BasePoly::zero(3, 1)).unwrap().is_zero());
    }

    #[test]
    fn cap_mismatch() {
        assert!(matches!(
            BasePoly::w(2, 0).mul(&BasePoly::w(3, 0)),
            Err(Error::ModelMismatch(_))
        ));
    }
}
