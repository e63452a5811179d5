//! Seeded generators of budget-respecting forms, vector fields and ideal
//! members, used by the property suites and the CLI.

use rand::seq::SliceRandom;
use rand::Rng;

use super::form::TruncatedForm;
use super::ops::{wedge, PolyVectorField};
use super::{GenSet, ModelConfig, Space};
use crate::coeff::{BaseMonomial, MultiIndex, Scalar};

/// Small Gaussian rational with numerator parts in `[-3, 3]` and
/// denominators in `{1, 2, 3}`; never zero.
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    loop {
        let re = rng.gen_range(-3..=3);
        let im = rng.gen_range(-3..=3);
        if re == 0 && im == 0 {
            continue;
        }
        let den = rng.gen_range(1..=3);
        let s = Scalar::from_gaussian(re, im);
        return &s * &Scalar::from_ratio(1, den).expect("nonzero denominator");
    }
}

/// Random form with at most `terms` monomials, every one of base degree at
/// most `max_base` and (when given) form degree `degree`.
pub fn random_form<R: Rng + ?Sized>(
    rng: &mut R,
    config: &ModelConfig,
    space: Space,
    max_base: u32,
    degree: Option<usize>,
    terms: usize,
) -> TruncatedForm {
    let available: Vec<usize> = config.generators(space).bits().collect();
    let nb = config.normal_conjugates(space);
    let mut out = TruncatedForm::zero(*config, space);
    let count = rng.gen_range(1..=terms.max(1));
    for _ in 0..count {
        let k = degree.unwrap_or_else(|| rng.gen_range(0..=available.len()));
        if k > available.len() {
            return out;
        }
        let mut gens = GenSet::EMPTY;
        for &b in available.choose_multiple(rng, k) {
            gens.0 |= 1 << b;
        }
        // base exponents: [w, wb, zb..] with total degree <= max_base
        let slots = if config.m == 1 { 2 + nb } else { nb };
        let mut exps = vec![0u32; slots];
        let mut budget = rng.gen_range(0..=max_base.min(config.d_cap));
        while budget > 0 && slots > 0 {
            exps[rng.gen_range(0..slots)] += 1;
            budget -= 1;
        }
        let base = if config.m == 1 {
            BaseMonomial {
                w: exps[0],
                wb: exps[1],
                zb: exps[2..].to_vec(),
            }
        } else {
            BaseMonomial {
                w: 0,
                wb: 0,
                zb: exps,
            }
        };
        let mut alpha = vec![0u32; config.n];
        let mut order = rng.gen_range(0..=config.z_order(space));
        while order > 0 && config.n > 0 {
            alpha[rng.gen_range(0..config.n)] += 1;
            order -= 1;
        }
        let term = TruncatedForm::monomial(
            *config,
            space,
            gens,
            base,
            MultiIndex::new(alpha),
            random_scalar(rng),
        )
        .expect("sampled monomial lies in the model");
        out = out.add(&term).expect("same model");
    }
    out
}

/// Vector field with degree-0 components of base degree at most `max_base`.
pub fn random_vector_field<R: Rng + ?Sized>(
    rng: &mut R,
    config: &ModelConfig,
    max_base: u32,
    terms: usize,
) -> PolyVectorField {
    let components = (0..config.holomorphic_directions())
        .map(|_| {
            if rng.gen_bool(0.3) {
                TruncatedForm::zero(*config, Space::Ambient)
            } else {
                random_form(rng, config, Space::Ambient, max_base, Some(0), terms)
            }
        })
        .collect();
    PolyVectorField::new(components).expect("components share the ambient model")
}

/// Random element of the order-`r` ideal: a combination of
/// `z^alpha g` with `|alpha| = r + 1`, `zbar_i h`, and `dzbar_i ^ k`.
/// Cofactors have base degree at most `max_base - 1`.
pub fn random_ideal_member<R: Rng + ?Sized>(
    rng: &mut R,
    config: &ModelConfig,
    r: u32,
    max_base: u32,
    terms: usize,
) -> TruncatedForm {
    let cofactor_budget = max_base.saturating_sub(1);
    let mut out = TruncatedForm::zero(*config, Space::Ambient);
    let high = MultiIndex::all_of_order(config.n, r + 1);
    let count = rng.gen_range(1..=terms.max(1));
    for _ in 0..count {
        let cof = random_form(rng, config, Space::Ambient, cofactor_budget, None, 2);
        let kind = if config.n == 0 {
            0
        } else {
            rng.gen_range(0..3)
        };
        let factor = match kind {
            0 => {
                let alpha = high.choose(rng).expect("order r+1 multi-indices exist");
                let mut f = TruncatedForm::one(*config, Space::Ambient);
                for (i, &e) in alpha.exponents().iter().enumerate() {
                    if e > 0 {
                        let zp = TruncatedForm::z_power(*config, Space::Ambient, i, e);
                        f = wedge(&f, &zp).expect("same model");
                    }
                }
                f
            }
            1 => TruncatedForm::zbar(*config, rng.gen_range(0..config.n)),
            _ => TruncatedForm::dzbar(*config, rng.gen_range(0..config.n)),
        };
        out = out
            .add(&wedge(&factor, &cof).expect("same model"))
            .expect("same model");
    }
    out
}

/// A monomial `c z^alpha` with `|alpha| <= r`: never in the order-`r` ideal.
pub fn random_non_member<R: Rng + ?Sized>(
    rng: &mut R,
    config: &ModelConfig,
    r: u32,
) -> TruncatedForm {
    let alphas = MultiIndex::all_up_to(config.n, r);
    let alpha = alphas.choose(rng).expect("at least the zero index");
    TruncatedForm::monomial(
        *config,
        Space::Ambient,
        GenSet::EMPTY,
        BaseMonomial::one(config.n),
        alpha.clone(),
        random_scalar(rng),
    )
    .expect("valid monomial")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ideal_member;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_members_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = ModelConfig::disc(2, 2, 3);
        for _ in 0..20 {
            let a = random_ideal_member(&mut rng, &c, 2, 3, 3);
            assert!(ideal_member(&a, 2).unwrap());
            let b = random_non_member(&mut rng, &c, 2);
            assert!(!ideal_member(&b, 2).unwrap());
        }
    }

    #[test]
    fn budget_is_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = ModelConfig::disc(1, 1, 4);
        for _ in 0..20 {
            assert!(random_form(&mut rng, &c, Space::Ambient, 2, None, 4).base_degree() <= 2);
        }
    }
}
