use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{GenSet, ModelConfig, Space};
use crate::coeff::{BaseMonomial, MultiIndex, Scalar, SparsePoly};
use crate::error::{Error, Result};

/// Monomial key of a coefficient: base part times formal part `z^alpha`.
pub type CoeffKey = (BaseMonomial, MultiIndex);

/// Element of `BasePoly (x) TruncatedFormalCoeff`.
pub type Coefficient = SparsePoly<CoeffKey>;

/// A (possibly inhomogeneous) form `sum_I c_I dzbar_I` in the ambient or
/// quotient model. Components are keyed by sorted generator sets and never
/// hold zero coefficients, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedForm {
    config: ModelConfig,
    space: Space,
    components: BTreeMap<GenSet, Coefficient>,
}

impl TruncatedForm {
    pub fn zero(config: ModelConfig, space: Space) -> Self {
        TruncatedForm {
            config,
            space,
            components: BTreeMap::new(),
        }
    }

    pub fn constant(config: ModelConfig, space: Space, c: Scalar) -> Self {
        let mut f = Self::zero(config, space);
        let key = (
            BaseMonomial::one(config.normal_conjugates(space)),
            MultiIndex::zero(config.n),
        );
        f.add_term(GenSet::EMPTY, key, c);
        f
    }

    pub fn one(config: ModelConfig, space: Space) -> Self {
        Self::constant(config, space, Scalar::one())
    }

    /// `c * base * z^alpha * dzbar_gens`, truncated to the model.
    pub fn monomial(
        config: ModelConfig,
        space: Space,
        gens: GenSet,
        base: BaseMonomial,
        alpha: MultiIndex,
        c: Scalar,
    ) -> Result<Self> {
        if !gens.is_subset(config.generators(space)) {
            return Err(Error::ModelMismatch(format!(
                "generators {:?} not available in the {space:?} model",
                gens.names(config.n)
            )));
        }
        if base.zb.len() != config.normal_conjugates(space) || alpha.len() != config.n {
            return Err(Error::ModelMismatch(
                "monomial arity does not match the model".into(),
            ));
        }
        if config.m == 0 && (base.w > 0 || base.wb > 0) {
            return Err(Error::ModelMismatch(
                "base variables w, wbar absent when m = 0".into(),
            ));
        }
        let mut f = Self::zero(config, space);
        f.add_term(gens, (base, alpha), c);
        Ok(f)
    }

    fn base_one(&self) -> BaseMonomial {
        BaseMonomial::one(self.config.normal_conjugates(self.space))
    }

    /// Holomorphic normal variable `z_{i+1}`.
    pub fn z(config: ModelConfig, space: Space, i: usize) -> Self {
        Self::z_power(config, space, i, 1)
    }

    pub fn z_power(config: ModelConfig, space: Space, i: usize, k: u32) -> Self {
        let mut alpha = vec![0; config.n];
        alpha[i] = k;
        let base = BaseMonomial::one(config.normal_conjugates(space));
        Self::monomial(
            config,
            space,
            GenSet::EMPTY,
            base,
            MultiIndex::new(alpha),
            Scalar::one(),
        )
        .expect("z_i is valid in every model")
    }

    /// Antiholomorphic normal variable `zbar_{i+1}` (ambient only).
    pub fn zbar(config: ModelConfig, i: usize) -> Self {
        let mut base = BaseMonomial::one(config.n);
        base.zb[i] = 1;
        Self::monomial(
            config,
            Space::Ambient,
            GenSet::EMPTY,
            base,
            MultiIndex::zero(config.n),
            Scalar::one(),
        )
        .expect("zbar_i is valid in the ambient model")
    }

    pub fn w(config: ModelConfig, space: Space) -> Result<Self> {
        let mut base = BaseMonomial::one(config.normal_conjugates(space));
        base.w = 1;
        Self::monomial(
            config,
            space,
            GenSet::EMPTY,
            base,
            MultiIndex::zero(config.n),
            Scalar::one(),
        )
    }

    pub fn wbar(config: ModelConfig, space: Space) -> Result<Self> {
        let mut base = BaseMonomial::one(config.normal_conjugates(space));
        base.wb = 1;
        Self::monomial(
            config,
            space,
            GenSet::EMPTY,
            base,
            MultiIndex::zero(config.n),
            Scalar::one(),
        )
    }

    pub fn dzbar(config: ModelConfig, i: usize) -> Self {
        let base = BaseMonomial::one(config.n);
        Self::monomial(
            config,
            Space::Ambient,
            GenSet::dzbar(i),
            base,
            MultiIndex::zero(config.n),
            Scalar::one(),
        )
        .expect("dzbar_i is valid in the ambient model")
    }

    pub fn dwbar(config: ModelConfig, space: Space) -> Result<Self> {
        let base = BaseMonomial::one(config.normal_conjugates(space));
        Self::monomial(
            config,
            space,
            GenSet::dwbar(config.n),
            base,
            MultiIndex::zero(config.n),
            Scalar::one(),
        )
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn components(&self) -> &BTreeMap<GenSet, Coefficient> {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Whether a key survives the truncation of this model.
    pub(crate) fn admissible(config: &ModelConfig, space: Space, key: &CoeffKey) -> bool {
        let (base, alpha) = key;
        base.degree() <= config.d_cap && alpha.order() <= config.z_order(space)
    }

    pub(crate) fn add_term(&mut self, gens: GenSet, key: CoeffKey, c: Scalar) {
        if c.is_zero() || !Self::admissible(&self.config, self.space, &key) {
            return;
        }
        let comp = self.components.entry(gens).or_default();
        comp.add_term(key, c);
        if comp.is_zero() {
            self.components.remove(&gens);
        }
    }

    pub(crate) fn add_coefficient(&mut self, gens: GenSet, coeff: &Coefficient, sign: &Scalar) {
        for (k, c) in coeff.terms() {
            self.add_term(gens, k.clone(), c * sign);
        }
    }

    pub fn check_compatible(&self, other: &TruncatedForm) -> Result<()> {
        if self.config != other.config || self.space != other.space {
            return Err(Error::ModelMismatch(format!(
                "forms over {:?}/{:?} and {:?}/{:?}",
                self.config, self.space, other.config, other.space
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncatedForm) -> Result<TruncatedForm> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (g, c) in &other.components {
            out.add_coefficient(*g, c, &Scalar::one());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncatedForm) -> Result<TruncatedForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncatedForm {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> TruncatedForm {
        if s.is_zero() {
            return Self::zero(self.config, self.space);
        }
        TruncatedForm {
            components: self
                .components
                .iter()
                .map(|(g, c)| (*g, c.scale(s)))
                .collect(),
            ..self.clone()
        }
    }

    /// Form degrees present.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.components.keys().map(GenSet::len).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// `Some(k)` when the form is nonzero and homogeneous of degree `k`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    /// Degree-`k` part.
    pub fn part(&self, k: usize) -> TruncatedForm {
        TruncatedForm {
            components: self
                .components
                .iter()
                .filter(|(g, _)| g.len() == k)
                .map(|(g, c)| (*g, c.clone()))
                .collect(),
            ..self.clone()
        }
    }

    /// Largest base-polynomial degree appearing, used for degree budgets.
    pub fn base_degree(&self) -> u32 {
        self.components
            .values()
            .flat_map(|c| c.terms().map(|((b, _), _)| b.degree()))
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of the unit monomial in the degree-0 part.
    pub fn constant_term(&self) -> Scalar {
        let key = (self.base_one(), MultiIndex::zero(self.config.n));
        self.components
            .get(&GenSet::EMPTY)
            .map(|c| c.coeff(&key))
            .unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (GenSet, &CoeffKey, &Scalar)> {
        self.components
            .iter()
            .flat_map(|(g, c)| c.terms().map(move |(k, s)| (*g, k, s)))
    }

    /// Applies a term-wise map on coefficient keys (generators unchanged).
    pub(crate) fn map_coefficients<F>(&self, f: F) -> TruncatedForm
    where
        F: Fn(&CoeffKey, &Scalar) -> Option<(CoeffKey, Scalar)>,
    {
        let mut out = Self::zero(self.config, self.space);
        for (g, k, c) in self.terms() {
            if let Some((k2, c2)) = f(k, c) {
                out.add_term(g, k2, c2);
            }
        }
        out
    }

    /// Inverse of a degree-0 unit. A degree-0 element with nonzero constant
    /// term is `c (1 + x)` with `x` nilpotent under truncation.
    pub fn inverse(&self) -> Result<TruncatedForm> {
        if self.degrees().iter().any(|&k| k > 0) {
            return Err(Error::Invalid("only degree-0 forms can be inverted".into()));
        }
        let c = self.constant_term();
        let c_inv = c.inv()?;
        let one = Self::one(self.config, self.space);
        // x = c^{-1} a - 1
        let x = self.scale(&c_inv).sub(&one)?;
        let minus_x = x.neg();
        let mut sum = one.clone();
        let mut power = one;
        loop {
            power = super::wedge(&power, &minus_x)?;
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power)?;
        }
        Ok(sum.scale(&c_inv))
    }
}

impl fmt::Debug for TruncatedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (g, (b, a), c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}")?;
            if b.w > 0 {
                write!(f, "*w^{}", b.w)?;
            }
            if b.wb > 0 {
                write!(f, "*wb^{}", b.wb)?;
            }
            for (i, e) in b.zb.iter().enumerate().filter(|(_, e)| **e > 0) {
                write!(f, "*zb{}^{e}", i + 1)?;
            }
            for (i, e) in a.exponents().iter().enumerate().filter(|(_, e)| **e > 0) {
                write!(f, "*z{}^{e}", i + 1)?;
            }
            for name in g.names(self.config.n) {
                write!(f, " {name}")?;
            }
        }
        Ok(())
    }
}

/// Wire form: `{space, config, components: [[generator-list, coeff]]}` with
/// `coeff` a sorted list of `[exponent-list, scalar]`. Exponent lists are
/// `[w, wb, zb_1..zb_n (ambient only), z_1..z_n]`. `config` may be omitted
/// when the form is embedded in a document that supplies it.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FormDoc {
    pub space: Space,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ModelConfig>,
    pub components: Vec<FormComponentDoc>,
}

/// `[generator-list, [[exponent-list, scalar]]]`.
pub type FormComponentDoc = (Vec<String>, Vec<(Vec<u32>, Scalar)>);

impl TruncatedForm {
    pub fn to_doc(&self, with_config: bool) -> FormDoc {
        let components = self
            .components
            .iter()
            .map(|(g, c)| {
                let terms = c
                    .terms()
                    .map(|((b, a), s)| {
                        let mut e = b.exponents();
                        e.extend(a.exponents());
                        (e, s.clone())
                    })
                    .collect();
                (g.names(self.config.n), terms)
            })
            .collect();
        FormDoc {
            space: self.space,
            config: with_config.then_some(self.config),
            components,
        }
    }

    pub fn from_doc(doc: &FormDoc, context: Option<ModelConfig>) -> Result<Self> {
        let config = match (doc.config, context) {
            (Some(c), Some(ctx)) if c != ctx => {
                return Err(Error::ModelMismatch(
                    "embedded form config differs from its document".into(),
                ))
            }
            (Some(c), _) => c,
            (None, Some(ctx)) => ctx,
            (None, None) => {
                return Err(Error::Invalid("form without a model configuration".into()))
            }
        };
        let space = doc.space;
        let nb = config.normal_conjugates(space);
        let mut out = TruncatedForm::zero(config, space);
        for (names, terms) in &doc.components {
            let gens = GenSet::from_names(names, config.n)?;
            for (exps, c) in terms {
                if exps.len() != 2 + nb + config.n {
                    return Err(Error::Invalid(format!(
                        "exponent list of length {} (expected {})",
                        exps.len(),
                        2 + nb + config.n
                    )));
                }
                let base = BaseMonomial::from_exponents(&exps[..2 + nb]).expect("length checked");
                let alpha = MultiIndex::new(exps[2 + nb..].to_vec());
                let m = TruncatedForm::monomial(config, space, gens, base, alpha, c.clone())?;
                out = out.add(&m)?;
            }
        }
        Ok(out)
    }
}

impl Serialize for TruncatedForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc(true).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = FormDoc::deserialize(d)?;
        TruncatedForm::from_doc(&doc, None).map_err(serde::de::Error::custom)
    }
}
