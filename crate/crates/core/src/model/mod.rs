//! Finite models of the Dolbeault dga of the ambient space `C^n x C^m` and
//! of the order-`r` formal neighborhood of `C^m`.

mod basis;
mod form;
mod ops;
pub mod sample;

pub use basis::{form_basis, BasisIndex, FormBasisElement};
pub use form::{CoeffKey, Coefficient, FormComponentDoc, FormDoc, TruncatedForm};
pub use ops::{
    dbar, del_hol, ideal_member, lie_derivative, quotient_dbar_complex, taylor_map, wedge,
    PolyVectorField,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Backend {
    /// `m = 0`: the formal neighborhood of a point; the quotient model is
    /// the finite-dimensional algebra `F^(r)_n` in form degree 0.
    #[serde(rename = "exact-point")]
    ExactPoint,
    /// `m = 1`: polynomials in `w, wbar` capped at `d_cap`.
    #[serde(rename = "poly-base")]
    PolyBase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawConfig")]
pub struct ModelConfig {
    pub m: u8,
    pub n: usize,
    pub r: u32,
    pub d_cap: u32,
    pub backend: Backend,
}

#[derive(Deserialize)]
struct RawConfig {
    m: u8,
    n: usize,
    r: u32,
    #[serde(default)]
    d_cap: u32,
    backend: Option<Backend>,
}

impl TryFrom<RawConfig> for ModelConfig {
    type Error = Error;
    fn try_from(raw: RawConfig) -> Result<Self> {
        let cfg = ModelConfig::new(raw.m, raw.n, raw.r, raw.d_cap)?;
        if let Some(b) = raw.backend {
            if b != cfg.backend {
                return Err(Error::Invalid(format!(
                    "backend {b:?} does not match m = {}",
                    raw.m
                )));
            }
        }
        Ok(cfg)
    }
}

/// Largest normal codimension supported by the bitmask generator encoding.
pub const MAX_NORMAL: usize = 30;

impl ModelConfig {
    pub fn new(m: u8, n: usize, r: u32, d_cap: u32) -> Result<Self> {
        let backend = match m {
            0 => Backend::ExactPoint,
            1 => Backend::PolyBase,
            _ => return Err(Error::UnsupportedDimension(m as usize)),
        };
        if n > MAX_NORMAL {
            return Err(Error::Invalid(format!(
                "normal codimension {n} exceeds {MAX_NORMAL}"
            )));
        }
        Ok(ModelConfig {
            m,
            n,
            r,
            d_cap,
            backend,
        })
    }

    /// Exact backend over a point: `m = 0`.
    pub fn point(n: usize, r: u32) -> Self {
        ModelConfig::new(0, n, r, 0).expect("valid point model")
    }

    /// Polynomial base backend: `m = 1`.
    pub fn disc(n: usize, r: u32, d_cap: u32) -> Self {
        ModelConfig::new(1, n, r, d_cap).expect("valid disc model")
    }

    pub fn is_exact(&self) -> bool {
        self.backend == Backend::ExactPoint
    }

    /// Formal order kept by the ambient model: one more than the quotient,
    /// so generators `z^alpha` with `|alpha| = r + 1` of the ideal survive.
    pub fn ambient_order(&self) -> u32 {
        self.r + 1
    }

    pub fn z_order(&self, space: Space) -> u32 {
        match space {
            Space::Ambient => self.ambient_order(),
            Space::Quotient => self.r,
        }
    }

    /// Number of antiholomorphic normal variables carried by base monomials.
    pub fn normal_conjugates(&self, space: Space) -> usize {
        match space {
            Space::Ambient => self.n,
            Space::Quotient => 0,
        }
    }

    /// Generators available in `space`.
    pub fn generators(&self, space: Space) -> GenSet {
        let mut bits = 0u32;
        if space == Space::Ambient {
            bits |= (1u32 << self.n) - 1;
        }
        if self.m == 1 {
            bits |= 1 << self.n;
        }
        GenSet(bits)
    }

    /// Number of holomorphic directions `z_1..z_n` (and `w` when `m = 1`).
    pub fn holomorphic_directions(&self) -> usize {
        self.n + self.m as usize
    }

    pub fn with_order(&self, r: u32) -> Self {
        ModelConfig { r, ..*self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Ambient,
    Quotient,
}

/// Set of antiholomorphic generators as a bitmask: bit `i < n` is `dzbar_{i+1}`,
/// bit `n` is `dwbar`. Iteration order is the canonical wedge order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenSet(pub u32);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub fn single(bit: usize) -> Self {
        GenSet(1 << bit)
    }

    pub fn dzbar(i: usize) -> Self {
        GenSet::single(i)
    }

    pub fn dwbar(n: usize) -> Self {
        GenSet::single(n)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, bit: usize) -> bool {
        self.0 & (1 << bit) != 0
    }

    pub fn is_subset(&self, other: GenSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn bits(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(move |b| self.contains(*b))
    }

    /// `dz_I ^ dz_J = sign * dz_{I u J}`; `None` when the sets overlap.
    pub fn wedge(self, other: GenSet) -> Option<(GenSet, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        for j in other.bits() {
            // elements of self that must move past dz_j
            swaps += (self.0 >> (j + 1)).count_ones();
        }
        Some((GenSet(self.0 | other.0), swaps % 2 == 1))
    }

    pub fn names(&self, n: usize) -> Vec<String> {
        self.bits()
            .map(|b| {
                if b < n {
                    format!("dzb{}", b + 1)
                } else {
                    "dwb".to_string()
                }
            })
            .collect()
    }

    pub fn from_names<S: AsRef<str>>(names: &[S], n: usize) -> Result<Self> {
        let mut bits = 0u32;
        for name in names {
            let name = name.as_ref();
            let bit = if name == "dwb" {
                n
            } else if let Some(idx) = name.strip_prefix("dzb") {
                let i: usize = idx
                    .parse()
                    .map_err(|_| Error::Invalid(format!("unknown generator {name:?}")))?;
                if i == 0 || i > n {
                    return Err(Error::Invalid(format!(
                        "generator {name:?} out of range for n = {n}"
                    )));
                }
                i - 1
            } else {
                return Err(Error::Invalid(format!("unknown generator {name:?}")));
            };
            if bits & (1 << bit) != 0 {
                return Err(Error::Invalid(format!("repeated generator {name:?}")));
            }
            bits |= 1 << bit;
        }
        Ok(GenSet(bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_sign() {
        let a = GenSet::dzbar(0);
        let b = GenSet::dzbar(1);
        assert_eq!(a.wedge(b), Some((GenSet(0b11), false)));
        assert_eq!(b.wedge(a), Some((GenSet(0b11), true)));
        assert_eq!(a.wedge(a), None);
        // dz2 ^ (dz1 ^ dz3) = - dz1 ^ dz2 ^ dz3
        assert_eq!(b.wedge(GenSet(0b101)), Some((GenSet(0b111), true)));
    }

    #[test]
    fn names_round_trip() {
        let g = GenSet(0b101);
        let names = g.names(2);
        assert_eq!(names, vec!["dzb1", "dwb"]);
        assert_eq!(GenSet::from_names(&names, 2).unwrap(), g);
        assert!(GenSet::from_names(&["dzb3"], 2).is_err());
        assert!(GenSet::from_names(&["dzb1", "dzb1"], 2).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(ModelConfig::new(2, 1, 1, 1).is_err());
        let cfg: ModelConfig = serde_json::from_str(r#"{"m":1,"n":2,"r":2,"d_cap":3}"#).unwrap();
        assert_eq!(cfg.backend, Backend::PolyBase);
        assert!(serde_json::from_str::<ModelConfig>(
            r#"{"m":0,"n":2,"r":2,"backend":"poly-base"}"#
        )
        .is_err());
        assert_eq!(
            serde_json::to_string(&ModelConfig::point(1, 3)).unwrap(),
            r#"{"m":0,"n":1,"r":3,"d_cap":0,"backend":"exact-point"}"#
        );
    }
}
