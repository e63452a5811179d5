use num_rational::BigRational;
use num_traits::Zero;

use super::basis::{form_basis, BasisIndex};
use super::form::{CoeffKey, TruncatedForm};
use super::{GenSet, ModelConfig, Space};
use crate::coeff::{MultiIndex, Scalar};
use crate::error::{Error, Result};
use crate::linalg::{CochainComplex, SparseMatrix, SparseVec};

/// Graded-commutative product. Coefficients are even, so only the
/// generator reordering contributes a sign.
pub fn wedge(a: &TruncatedForm, b: &TruncatedForm) -> Result<TruncatedForm> {
    a.check_compatible(b)?;
    let config = *a.config();
    let space = a.space();
    let z_cap = config.z_order(space);
    let mut out = TruncatedForm::zero(config, space);
    for (ga, ca) in a.components() {
        for (gb, cb) in b.components() {
            let Some((g, negative)) = ga.wedge(*gb) else {
                continue;
            };
            let prod = ca.mul_with(cb, |(ba, aa), (bb, ab)| {
                let base = ba.mul(bb);
                let alpha = aa.add(ab);
                (base.degree() <= config.d_cap && alpha.order() <= z_cap).then_some((base, alpha))
            });
            let sign = if negative {
                Scalar::from_int(-1)
            } else {
                Scalar::one()
            };
            out.add_coefficient(g, &prod, &sign);
        }
    }
    Ok(out)
}

/// Antiholomorphic variables of a model as `(generator bit, exponent accessor)`.
fn antiholomorphic_slots(config: &ModelConfig, space: Space) -> Vec<usize> {
    let mut slots: Vec<usize> = Vec::new();
    if space == Space::Ambient {
        slots.extend(0..config.n);
    }
    if config.m == 1 {
        slots.push(config.n);
    }
    slots
}

fn exponent_of(key: &CoeffKey, bit: usize, n: usize) -> u32 {
    if bit == n {
        key.0.wb
    } else {
        key.0.zb[bit]
    }
}

fn lowered(key: &CoeffKey, bit: usize, n: usize) -> CoeffKey {
    let mut k = key.clone();
    if bit == n {
        k.0.wb -= 1;
    } else {
        k.0.zb[bit] -= 1;
    }
    k
}

/// `dbar = sum_v dvbar * d/dvbar`, the new generator entering on the left.
pub fn dbar(a: &TruncatedForm) -> TruncatedForm {
    let config = *a.config();
    let n = config.n;
    let mut out = TruncatedForm::zero(config, a.space());
    for bit in antiholomorphic_slots(&config, a.space()) {
        for (g, key, c) in a.terms() {
            let e = exponent_of(key, bit, n);
            if e == 0 {
                continue;
            }
            let Some((g2, negative)) = GenSet::single(bit).wedge(g) else {
                continue;
            };
            let mut factor = c * &Scalar::from_int(e as i64);
            if negative {
                factor = -factor;
            }
            out.add_term(g2, lowered(key, bit, n), factor);
        }
    }
    out
}

/// Holomorphic partial derivative along direction `j` (`j < n` is `z_{j+1}`,
/// `j = n` is `w`).
fn partial_hol(a: &TruncatedForm, j: usize) -> TruncatedForm {
    let n = a.config().n;
    a.map_coefficients(|(base, alpha), c| {
        let e = if j == n { base.w } else { alpha.exponents()[j] };
        if e == 0 {
            return None;
        }
        let mut base = base.clone();
        let mut alpha_v = alpha.exponents().to_vec();
        if j == n {
            base.w -= 1;
        } else {
            alpha_v[j] -= 1;
        }
        Some((
            (base, MultiIndex::new(alpha_v)),
            c * &Scalar::from_int(e as i64),
        ))
    })
}

/// The (1,0)-differential, returned as one coefficient form per holomorphic
/// direction `z_1..z_n` followed by `w` when `m = 1`.
pub fn del_hol(a: &TruncatedForm) -> Result<Vec<TruncatedForm>> {
    if a.space() != Space::Ambient {
        return Err(Error::QuotientSpaceUnsupported);
    }
    Ok((0..a.config().holomorphic_directions())
        .map(|j| partial_hol(a, j))
        .collect())
}

/// Vector field `sum_j V_j d/dz_j (+ V_w d/dw)` with form-valued coefficients
/// on the ambient model. Ordinary fields have degree-0 components; applying
/// `dbar` yields a field with one-form coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVectorField {
    components: Vec<TruncatedForm>,
}

impl PolyVectorField {
    pub fn new(components: Vec<TruncatedForm>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::Invalid("vector field without components".into()));
        };
        if first.space() != Space::Ambient {
            return Err(Error::QuotientSpaceUnsupported);
        }
        if components.len() != first.config().holomorphic_directions() {
            return Err(Error::ShapeMismatch(format!(
                "{} components for {} holomorphic directions",
                components.len(),
                first.config().holomorphic_directions()
            )));
        }
        for c in &components {
            first.check_compatible(c)?;
        }
        Ok(PolyVectorField { components })
    }

    /// `d/dz_{j+1}` (or `d/dw` for `j = n`).
    pub fn coordinate(config: ModelConfig, j: usize) -> Self {
        let components = (0..config.holomorphic_directions())
            .map(|i| {
                if i == j {
                    TruncatedForm::one(config, Space::Ambient)
                } else {
                    TruncatedForm::zero(config, Space::Ambient)
                }
            })
            .collect();
        PolyVectorField { components }
    }

    pub fn components(&self) -> &[TruncatedForm] {
        &self.components
    }

    /// `g * V`.
    pub fn scaled_by(&self, g: &TruncatedForm) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| wedge(g, c))
            .collect::<Result<_>>()?;
        Ok(PolyVectorField { components })
    }

    pub fn dbar(&self) -> Self {
        PolyVectorField {
            components: self.components.iter().map(dbar).collect(),
        }
    }

    pub fn base_degree(&self) -> u32 {
        self.components
            .iter()
            .map(TruncatedForm::base_degree)
            .max()
            .unwrap_or(0)
    }
}

/// `L_V a = iota_V del a = sum_j V_j ^ d a/dz_j`.
pub fn lie_derivative(v: &PolyVectorField, a: &TruncatedForm) -> Result<TruncatedForm> {
    let partials = del_hol(a)?;
    let mut out = TruncatedForm::zero(*a.config(), Space::Ambient);
    for (vj, dj) in v.components.iter().zip(&partials) {
        out = out.add(&wedge(vj, dj)?)?;
    }
    Ok(out)
}

/// Taylor homomorphism to order `r`:
/// `sum_{|alpha| <= r} 1/alpha! i^*(d^alpha a) (x) z^alpha`, where `i^*` sets
/// `z = zbar = 0` and kills every `dzbar` generator.
pub fn taylor_map(a: &TruncatedForm, r: u32) -> Result<TruncatedForm> {
    if a.space() != Space::Ambient {
        return Err(Error::ModelMismatch(
            "the Taylor map takes ambient forms".into(),
        ));
    }
    let config = *a.config();
    if r > config.r {
        return Err(Error::ModelMismatch(format!(
            "order {r} exceeds the model order {}",
            config.r
        )));
    }
    let target = config.with_order(r);
    let n = config.n;
    let quotient_gens = target.generators(Space::Quotient);
    let mut out = TruncatedForm::zero(target, Space::Quotient);
    for alpha in MultiIndex::all_up_to(n, r) {
        let mut d = a.clone();
        for (j, &e) in alpha.exponents().iter().enumerate() {
            for _ in 0..e {
                d = partial_hol(&d, j);
            }
        }
        let inv_fact = Scalar::new(
            BigRational::new(1.into(), alpha.factorial()),
            BigRational::zero(),
        );
        for (g, (base, beta), c) in d.terms() {
            let restricted = beta.order() == 0 && base.zb.iter().all(|&e| e == 0);
            if !restricted || !g.is_subset(quotient_gens) {
                continue;
            }
            let mut qbase = base.clone();
            qbase.zb.clear();
            out.add_term(g, (qbase, alpha.clone()), c * &inv_fact);
        }
    }
    Ok(out)
}

/// Membership in the dg-ideal of forms vanishing to order `r` along the
/// base: the kernel of the Taylor map.
pub fn ideal_member(a: &TruncatedForm, r: u32) -> Result<bool> {
    Ok(taylor_map(a, r)?.is_zero())
}

/// `dbar` on the quotient model as a cochain complex of Q(i)-vector spaces
/// over the full monomial basis.
pub fn quotient_dbar_complex(config: &ModelConfig) -> Result<CochainComplex> {
    let max_deg = if config.m == 1 { 1 } else { 0 };
    let bases: Vec<_> = (0..=max_deg)
        .map(|k| form_basis(config, Space::Quotient, k))
        .collect();
    let indices: Vec<BasisIndex> = bases.iter().map(|b| BasisIndex::new(b)).collect();
    let mut complex = CochainComplex::new();
    for (k, b) in bases.iter().enumerate() {
        complex.set_space(k as i32, b.len());
    }
    for k in 0..max_deg {
        let cols = bases[k]
            .iter()
            .map(|e| {
                let img = dbar(&e.to_form(config, Space::Quotient));
                indices[k + 1].coordinates(&img)
            })
            .collect::<Result<Vec<SparseVec>>>()?;
        complex.set_differential(
            k as i32,
            SparseMatrix::from_columns(bases[k + 1].len(), cols)?,
        )?;
    }
    Ok(complex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::BaseMonomial;

    fn amb(n: usize, r: u32, d: u32) -> ModelConfig {
        ModelConfig::new(1, n, r, d).unwrap()
    }

    #[test]
    fn odd_generator_squares_to_zero() {
        let c = amb(1, 1, 2);
        let dw = TruncatedForm::dwbar(c, Space::Ambient).unwrap();
        assert!(wedge(&dw, &dw).unwrap().is_zero());
    }

    #[test]
    fn antisymmetry() {
        let c = amb(2, 1, 2);
        let a = TruncatedForm::dzbar(c, 0);
        let b = TruncatedForm::dzbar(c, 1);
        assert_eq!(wedge(&a, &b).unwrap(), wedge(&b, &a).unwrap().neg());
    }

    #[test]
    fn mixed_wedge() {
        let c = amb(2, 1, 2);
        let z1 = TruncatedForm::z(c, Space::Ambient, 0);
        let a = wedge(&z1, &TruncatedForm::dzbar(c, 0)).unwrap();
        let zb2 = TruncatedForm::zbar(c, 1);
        // hand expansion: (z1 dzb1) ^ zb2 = z1 zb2 dzb1
        let mut base = BaseMonomial::one(2);
        base.zb[1] = 1;
        let expected = TruncatedForm::monomial(
            c,
            Space::Ambient,
            GenSet::dzbar(0),
            base,
            MultiIndex::new(vec![1, 0]),
            Scalar::one(),
        )
        .unwrap();
        assert_eq!(wedge(&a, &zb2).unwrap(), expected);
    }

    #[test]
    fn dbar_examples() {
        let c = amb(1, 1, 3);
        let wb = TruncatedForm::wbar(c, Space::Ambient).unwrap();
        assert_eq!(dbar(&wb), TruncatedForm::dwbar(c, Space::Ambient).unwrap());
        let zb1 = TruncatedForm::zbar(c, 0);
        let prod = wedge(&zb1, &wb).unwrap();
        let expected = wedge(&wb, &TruncatedForm::dzbar(c, 0))
            .unwrap()
            .add(&wedge(&zb1, &TruncatedForm::dwbar(c, Space::Ambient).unwrap()).unwrap())
            .unwrap();
        assert_eq!(dbar(&prod), expected);
        assert!(dbar(&TruncatedForm::z(c, Space::Ambient, 0)).is_zero());
    }

    #[test]
    fn del_hol_examples() {
        let c = amb(1, 1, 3);
        let z1 = TruncatedForm::z(c, Space::Ambient, 0);
        let d = del_hol(&z1).unwrap();
        assert_eq!(d[0], TruncatedForm::one(c, Space::Ambient));
        assert!(d[1].is_zero());
        let w = TruncatedForm::w(c, Space::Ambient).unwrap();
        let d = del_hol(&wedge(&w, &w).unwrap()).unwrap();
        assert_eq!(d[1], w.scale(&Scalar::from_int(2)));
        assert!(del_hol(&TruncatedForm::zbar(c, 0))
            .unwrap()
            .iter()
            .all(TruncatedForm::is_zero));
        let q = TruncatedForm::one(c, Space::Quotient);
        assert_eq!(del_hol(&q), Err(Error::QuotientSpaceUnsupported));
    }

    #[test]
    fn lie_derivative_examples() {
        let c = amb(1, 1, 3);
        let v = PolyVectorField::coordinate(c, 0);
        let dw = TruncatedForm::dwbar(c, Space::Ambient).unwrap();
        let form = wedge(&TruncatedForm::z(c, Space::Ambient, 0), &dw).unwrap();
        assert_eq!(lie_derivative(&v, &form).unwrap(), dw);
        let w = TruncatedForm::w(c, Space::Ambient).unwrap();
        assert!(lie_derivative(&v, &w).unwrap().is_zero());
    }

    #[test]
    fn taylor_examples() {
        let c = amb(1, 2, 3);
        let z1 = TruncatedForm::z(c, Space::Ambient, 0);
        let t = taylor_map(&z1, 1).unwrap();
        assert_eq!(t, TruncatedForm::z(c.with_order(1), Space::Quotient, 0));
        let one = TruncatedForm::one(c, Space::Ambient);
        assert_eq!(
            taylor_map(&one, 2).unwrap(),
            TruncatedForm::one(c, Space::Quotient)
        );
        // z1^2 w: (1/2!) d^2/dz1^2 (z1^2) = 1, so the image is w (x) z1^2
        let w = TruncatedForm::w(c, Space::Ambient).unwrap();
        let a = wedge(&TruncatedForm::z_power(c, Space::Ambient, 0, 2), &w).unwrap();
        let expected = wedge(
            &TruncatedForm::w(c, Space::Quotient).unwrap(),
            &TruncatedForm::z_power(c, Space::Quotient, 0, 2),
        )
        .unwrap();
        assert_eq!(taylor_map(&a, 2).unwrap(), expected);
        assert!(taylor_map(&a, 3).is_err());
    }

    #[test]
    fn ideal_examples() {
        let r = 2;
        let c = amb(1, r, 3);
        assert!(ideal_member(&TruncatedForm::z_power(c, Space::Ambient, 0, r + 1), r).unwrap());
        let zbw = wedge(
            &TruncatedForm::zbar(c, 0),
            &TruncatedForm::w(c, Space::Ambient).unwrap(),
        )
        .unwrap();
        assert!(ideal_member(&zbw, r).unwrap());
        assert!(!ideal_member(&TruncatedForm::z_power(c, Space::Ambient, 0, r), r).unwrap());
        assert!(ideal_member(&TruncatedForm::dzbar(c, 0), r).unwrap());
    }
}
