use std::collections::HashMap;

use super::form::{CoeffKey, TruncatedForm};
use super::{GenSet, ModelConfig, Space};
use crate::coeff::{BaseMonomial, MultiIndex, Scalar};
use crate::error::{Error, Result};
use crate::linalg::SparseVec;

/// One monomial `base * z^alpha * dzbar_gens` of a model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormBasisElement {
    pub gens: GenSet,
    pub key: CoeffKey,
}

impl FormBasisElement {
    pub fn to_form(&self, config: &ModelConfig, space: Space) -> TruncatedForm {
        TruncatedForm::monomial(
            *config,
            space,
            self.gens,
            self.key.0.clone(),
            self.key.1.clone(),
            Scalar::one(),
        )
        .expect("basis elements are valid monomials")
    }
}

fn base_monomials(config: &ModelConfig, space: Space) -> Vec<BaseMonomial> {
    let nb = config.normal_conjugates(space);
    let lead = if config.m == 1 { 2 } else { 0 };
    MultiIndex::all_up_to(lead + nb, config.d_cap)
        .into_iter()
        .map(|e| {
            let e = e.exponents();
            let (w, wb) = if lead == 2 { (e[0], e[1]) } else { (0, 0) };
            BaseMonomial {
                w,
                wb,
                zb: e[lead..].to_vec(),
            }
        })
        .collect()
}

/// Monomial basis of the degree-`k` part of a model, in a fixed order:
/// generator set, then base monomial, then formal multi-index.
pub fn form_basis(config: &ModelConfig, space: Space, k: usize) -> Vec<FormBasisElement> {
    let available = config.generators(space);
    let mut gen_sets: Vec<GenSet> = (0..=available.0)
        .map(GenSet)
        .filter(|g| g.len() == k && g.is_subset(available))
        .collect();
    gen_sets.sort();
    let bases = base_monomials(config, space);
    let alphas = MultiIndex::all_up_to(config.n, config.z_order(space));
    let mut out = Vec::with_capacity(gen_sets.len() * bases.len() * alphas.len());
    for g in gen_sets {
        for b in &bases {
            for a in &alphas {
                out.push(FormBasisElement {
                    gens: g,
                    key: (b.clone(), a.clone()),
                });
            }
        }
    }
    out
}

/// Reverse lookup from monomials to basis positions.
pub struct BasisIndex {
    positions: HashMap<(GenSet, CoeffKey), usize>,
}

impl BasisIndex {
    pub fn new(basis: &[FormBasisElement]) -> Self {
        BasisIndex {
            positions: basis
                .iter()
                .enumerate()
                .map(|(i, e)| ((e.gens, e.key.clone()), i))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn position(&self, gens: GenSet, key: &CoeffKey) -> Option<usize> {
        self.positions.get(&(gens, key.clone())).copied()
    }

    /// Coordinates of `form` in the basis; fails if a term lies outside it.
    pub fn coordinates(&self, form: &TruncatedForm) -> Result<SparseVec> {
        let pairs = form
            .terms()
            .map(|(g, k, c)| {
                self.position(g, k).map(|i| (i, c.clone())).ok_or_else(|| {
                    Error::ShapeMismatch(format!("term {k:?} in {:?} outside the basis", g))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseVec::from_pairs(pairs))
    }
}
