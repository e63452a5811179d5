//! Seeded cohesive modules and hom elements.
//!
//! Random modules are direct sums of free summands `A[-p]` and two-term
//! complexes `[A --f--> A]`, conjugated by a random invertible gauge `g`.
//! Gauges are free of `wbar` so that `dbar g = 0` and conjugation preserves
//! flatness exactly under the degree cap.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use super::{CohesiveModule, FormMatrix, HomElement};
use crate::coeff::{BaseMonomial, MultiIndex};
use crate::error::Result;
use crate::model::sample::{random_form, random_scalar};
use crate::model::{GenSet, ModelConfig, Space, TruncatedForm};

/// Random `wbar`-free degree-0 element of the quotient model with at most
/// `terms` monomials of order at least `min_order` in `z`.
pub fn random_holomorphic<R: Rng + ?Sized>(
    rng: &mut R,
    config: &ModelConfig,
    min_order: u32,
    terms: usize,
) -> TruncatedForm {
    let mut out = TruncatedForm::zero(*config, Space::Quotient);
    if min_order > config.r {
        return out;
    }
    for _ in 0..rng.gen_range(1..=terms.max(1)) {
        let order = rng.gen_range(min_order..=config.r);
        let mut alpha = vec![0u32; config.n];
        if config.n == 0 && order > 0 {
            continue;
        }
        for _ in 0..order {
            alpha[rng.gen_range(0..config.n)] += 1;
        }
        let mut base = BaseMonomial::one(0);
        if config.m == 1 && config.d_cap > 0 && rng.gen_bool(0.3) {
            base.w = 1;
        }
        let term = TruncatedForm::monomial(
            *config,
            Space::Quotient,
            GenSet::EMPTY,
            base,
            MultiIndex::new(alpha),
            random_scalar(rng),
        )
        .expect("valid monomial");
        out = out.add(&term).expect("same model");
    }
    out
}

/// Random form of degree `k` in the quotient model (any base monomials).
pub fn random_entry<R: Rng + ?Sized>(
    rng: &mut R,
    config: &ModelConfig,
    k: usize,
    terms: usize,
) -> TruncatedForm {
    random_form(rng, config, Space::Quotient, config.d_cap, Some(k), terms)
}

/// Shape of a split module: which summands sit where.
#[derive(Clone, Copy, Debug)]
pub struct SplitOptions {
    /// Largest rank in any single degree.
    pub max_rank: usize,
    /// Degrees used are `lowest..=lowest + span`.
    pub lowest: i32,
    pub span: i32,
    /// Force at least one free summand, so cohomology is nonzero.
    pub require_free: bool,
}

impl Default for SplitOptions {
    fn default() -> Self {
        SplitOptions {
            max_rank: 3,
            lowest: -1,
            span: 2,
            require_free: false,
        }
    }
}

/// Direct sum of free summands and two-term complexes `[A --f--> A]` with
/// `f` holomorphic; free summands over the disc model may carry a
/// `dwbar`-connection term.
pub fn random_split_module<R: Rng + ?Sized>(
    rng: &mut R,
    config: &ModelConfig,
    opts: SplitOptions,
) -> CohesiveModule {
    let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
    let mut module = CohesiveModule::zero(*config);
    let attempts = rng.gen_range(1..=2 * opts.max_rank);
    let mut have_free = false;
    for attempt in 0..attempts + 4 {
        if attempt >= attempts && (have_free || !opts.require_free) {
            break;
        }
        let p = opts.lowest + rng.gen_range(0..=opts.span);
        let two_term = attempt < attempts && rng.gen_bool(0.5) && p < opts.lowest + opts.span;
        let summand = if two_term {
            if ranks.get(&p).copied().unwrap_or(0) >= opts.max_rank
                || ranks.get(&(p + 1)).copied().unwrap_or(0) >= opts.max_rank
            {
                continue;
            }
            // f = 1 occasionally (a contractible summand), otherwise in the maximal ideal
            let f = if rng.gen_bool(0.15) || config.n == 0 {
                TruncatedForm::constant(*config, Space::Quotient, random_scalar(rng))
            } else {
                random_holomorphic(rng, config, 1, 2)
            };
            let m = FormMatrix::from_rows(*config, 1, 1, vec![vec![f]]).expect("1x1");
            CohesiveModule::new(*config, BTreeMap::from([(p, 1), (p + 1, 1)]), [((0, p), m)])
                .expect("two-term summand")
        } else {
            if ranks.get(&p).copied().unwrap_or(0) >= opts.max_rank {
                continue;
            }
            have_free = true;
            let mut comps = Vec::new();
            if config.m == 1 && rng.gen_bool(0.5) {
                let a = random_entry(rng, config, 1, 2);
                comps.push((
                    (1, p),
                    FormMatrix::from_rows(*config, 1, 1, vec![vec![a]]).expect("1x1"),
                ));
            }
            CohesiveModule::new(*config, BTreeMap::from([(p, 1)]), comps).expect("free summand")
        };
        for (q, r) in summand.ranks() {
            *ranks.entry(*q).or_default() += r;
        }
        module = module.direct_sum(&summand).expect("same model");
    }
    module
}

/// Random invertible `wbar`-free matrix: upper triangular with nonzero
/// constant diagonal plus a nilpotent perturbation.
pub fn random_invertible<R: Rng + ?Sized>(
    rng: &mut R,
    config: &ModelConfig,
    n: usize,
) -> FormMatrix {
    let mut g = FormMatrix::zeros(*config, n, n);
    for i in 0..n {
        for j in i..n {
            let entry = if i == j {
                let c = TruncatedForm::constant(*config, Space::Quotient, random_scalar(rng));
                if rng.gen_bool(0.5) {
                    c.add(&random_holomorphic(rng, config, 1, 1))
                        .expect("same model")
                } else {
                    c
                }
            } else if rng.gen_bool(0.6) {
                random_holomorphic(rng, config, 0, 2)
            } else {
                TruncatedForm::zero(*config, Space::Quotient)
            };
            g.set(i, j, entry);
        }
    }
    g
}

/// Conjugates `module` by a random invertible gauge. Returns the new module
/// and the closed degree-0 isomorphism `g: module -> conjugate`.
pub fn random_gauge<R: Rng + ?Sized>(
    rng: &mut R,
    module: &CohesiveModule,
) -> Result<(CohesiveModule, HomElement)> {
    let config = *module.config();
    let gauges: BTreeMap<i32, FormMatrix> = module
        .ranks()
        .iter()
        .map(|(&p, &r)| (p, random_invertible(rng, &config, r)))
        .collect();
    let inverses: BTreeMap<i32, FormMatrix> = gauges
        .iter()
        .map(|(p, g)| Ok((*p, g.inverse()?)))
        .collect::<Result<_>>()?;
    let components = module
        .connection()
        .components()
        .iter()
        .map(|(&(k, p), c)| {
            let q = p - k as i32 + 1;
            Ok(((k, p), gauges[&q].mul(c)?.mul(&inverses[&p])?))
        })
        .collect::<Result<Vec<_>>>()?;
    let conjugate = CohesiveModule::new(config, module.ranks().clone(), components)?;
    let g = HomElement::new(
        Arc::new(module.without_operator()),
        Arc::new(conjugate.clone()),
        0,
        gauges.into_iter().map(|(p, g)| ((0, p), g)),
    )?;
    Ok((conjugate, g))
}

pub fn random_module<R: Rng + ?Sized>(
    rng: &mut R,
    config: &ModelConfig,
    opts: SplitOptions,
) -> Result<CohesiveModule> {
    let split = random_split_module(rng, config, opts);
    Ok(random_gauge(rng, &split)?.0)
}

/// Random degree-`k` hom element with each component entry nonzero with
/// probability one half.
pub fn random_hom<R: Rng + ?Sized>(
    rng: &mut R,
    source: &Arc<CohesiveModule>,
    target: &Arc<CohesiveModule>,
    k: i32,
) -> Result<HomElement> {
    random_hom_with_budget(rng, source, target, k, source.config().d_cap)
}

/// As [`random_hom`], with entries of base degree at most `max_base`.
pub fn random_hom_with_budget<R: Rng + ?Sized>(
    rng: &mut R,
    source: &Arc<CohesiveModule>,
    target: &Arc<CohesiveModule>,
    k: i32,
    max_base: u32,
) -> Result<HomElement> {
    let config = *source.config();
    let mut components = Vec::new();
    for j in 0..=config.m as usize {
        for (&p, &cols) in source.ranks() {
            let rows = target.rank(p + k - j as i32);
            if rows == 0 {
                continue;
            }
            let mut m = FormMatrix::zeros(config, rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    if rng.gen_bool(0.5) {
                        m.set(
                            r,
                            c,
                            random_form(rng, &config, Space::Quotient, max_base, Some(j), 2),
                        );
                    }
                }
            }
            components.push(((j, p), m));
        }
    }
    HomElement::new(source.clone(), target.clone(), k, components)
}

/// Closed degree-0 map `d(h)` for a random degree `-1` element `h`, plus
/// multiplication by a random holomorphic element when source and target
/// coincide.
pub fn random_closed_map<R: Rng + ?Sized>(
    rng: &mut R,
    source: &Arc<CohesiveModule>,
    target: &Arc<CohesiveModule>,
) -> Result<HomElement> {
    let h = random_hom(rng, source, target, -1)?;
    let mut phi = h.differential()?;
    if source == target {
        let a = random_holomorphic(rng, source.config(), 0, 2);
        phi = phi.add(&HomElement::multiplication(source.clone(), &a)?)?;
    }
    Ok(phi)
}

/// `[A --z1--> A]` in degrees `-1, 0`.
pub fn koszul_module(config: &ModelConfig) -> CohesiveModule {
    let z = TruncatedForm::z(*config, Space::Quotient, 0);
    let m = FormMatrix::from_rows(*config, 1, 1, vec![vec![z]]).expect("1x1");
    CohesiveModule::new(*config, BTreeMap::from([(-1, 1), (0, 1)]), [((0, -1), m)])
        .expect("Koszul module")
}
