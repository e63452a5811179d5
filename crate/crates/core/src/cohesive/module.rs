use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::matrix::{FormMatrix, MatrixDoc};
use crate::coeff::Scalar;
use crate::error::{Error, Result};
use crate::linalg::{CochainComplex, SparseMatrix, SparseVec};
use crate::model::{
    dbar, form_basis, wedge, BasisIndex, FormBasisElement, ModelConfig, Space, TruncatedForm,
};

/// Component `(k, p)` of a Z-connection: form degree `k`, module degree `p`.
pub type ComponentKey = (usize, i32);

/// The total-degree-one operator of a cohesive module, stored through its
/// values on generators: component `(k, p)` is the matrix `C` of shape
/// `rank(p - k + 1) x rank(p)` with
/// `E(e_i w) = sum_j e_j (C_ji ^ w) + (-1)^p e_i dbar(w)`.
///
/// A connection built from an explicit operator on `E (x) A` keeps that
/// operator so [`CohesiveModule::check_leibniz`] can compare it against the
/// Leibniz extension of its generator values.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZConnection {
    components: BTreeMap<ComponentKey, FormMatrix>,
    operator: Option<Arc<SparseMatrix>>,
}

impl ZConnection {
    pub fn components(&self) -> &BTreeMap<ComponentKey, FormMatrix> {
        &self.components
    }

    pub fn operator(&self) -> Option<&SparseMatrix> {
        self.operator.as_deref()
    }
}

/// A bounded graded free right module over the quotient model with a
/// Z-connection. Construction checks shapes only; flatness is checked by
/// [`CohesiveModule::check_integrability`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohesiveModule {
    config: ModelConfig,
    ranks: BTreeMap<i32, usize>,
    connection: ZConnection,
}

/// Basis `e_i (x) w` of `E (x) A`, with `w` running over the monomial basis
/// of every form degree of the quotient model.
pub struct TotalBasis {
    config: ModelConfig,
    len: usize,
    offsets: BTreeMap<(i32, usize), usize>,
    forms: Vec<FormBasisElement>,
    form_index: BasisIndex,
}

impl TotalBasis {
    pub fn new(module: &CohesiveModule) -> Self {
        let config = module.config;
        let forms: Vec<FormBasisElement> = (0..=config.m as usize)
            .flat_map(|k| form_basis(&config, Space::Quotient, k))
            .collect();
        let form_index = BasisIndex::new(&forms);
        let mut offsets = BTreeMap::new();
        let mut len = 0;
        for (&p, &r) in &module.ranks {
            for i in 0..r {
                offsets.insert((p, i), len);
                len += forms.len();
            }
        }
        TotalBasis {
            config,
            len,
            offsets,
            forms,
            form_index,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Coordinates of `e_i (x) w` for the generator `e_i` of degree `p`.
    pub fn coordinates(&self, p: i32, i: usize, w: &TruncatedForm) -> Result<SparseVec> {
        let off = self.offset(p, i)?;
        let local = self.form_index.coordinates(w)?;
        Ok(SparseVec::from_pairs(
            local.entries().iter().map(|(k, c)| (off + k, c.clone())),
        ))
    }

    fn offset(&self, p: i32, i: usize) -> Result<usize> {
        self.offsets
            .get(&(p, i))
            .copied()
            .ok_or_else(|| Error::ShapeMismatch(format!("no generator {i} in degree {p}")))
    }

    /// Every basis element as `(p, i, w)`, in index order.
    pub fn elements(&self) -> impl Iterator<Item = (i32, usize, TruncatedForm)> + '_ {
        self.offsets.keys().flat_map(move |&(p, i)| {
            self.forms
                .iter()
                .map(move |f| (p, i, f.to_form(&self.config, Space::Quotient)))
        })
    }

    /// Splits a vector into `(p, i) -> form` pieces.
    pub fn decode(&self, v: &SparseVec) -> BTreeMap<(i32, usize), TruncatedForm> {
        let mut out: BTreeMap<(i32, usize), TruncatedForm> = BTreeMap::new();
        let starts: Vec<((i32, usize), usize)> =
            self.offsets.iter().map(|(k, o)| (*k, *o)).collect();
        for (idx, c) in v.entries() {
            let pos = starts.partition_point(|(_, o)| *o <= *idx) - 1;
            let (key, off) = starts[pos];
            let term = self.forms[idx - off]
                .to_form(&self.config, Space::Quotient)
                .scale(c);
            let slot = out
                .entry(key)
                .or_insert_with(|| TruncatedForm::zero(self.config, Space::Quotient));
            *slot = slot.add(&term).expect("same model");
        }
        out
    }
}

fn sign(e: i64) -> Scalar {
    if e.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        Scalar::from_int(-1)
    }
}

impl CohesiveModule {
    /// Module with the given ranks and connection components. Zero ranks and
    /// zero components are dropped.
    pub fn new(
        config: ModelConfig,
        ranks: BTreeMap<i32, usize>,
        components: impl IntoIterator<Item = (ComponentKey, FormMatrix)>,
    ) -> Result<Self> {
        let ranks: BTreeMap<i32, usize> = ranks.into_iter().filter(|(_, r)| *r > 0).collect();
        let mut module = CohesiveModule {
            config,
            ranks,
            connection: ZConnection::default(),
        };
        for ((k, p), m) in components {
            module.check_component(k, p, &m)?;
            if !m.is_zero() && module.connection.components.insert((k, p), m).is_some() {
                return Err(Error::Invalid(format!(
                    "duplicate connection component ({k}, {p})"
                )));
            }
        }
        Ok(module)
    }

    fn check_component(&self, k: usize, p: i32, m: &FormMatrix) -> Result<()> {
        if *m.config() != self.config {
            return Err(Error::ModelMismatch(
                "connection component over a different model".into(),
            ));
        }
        if k > self.config.m as usize {
            return Err(Error::Invalid(format!(
                "form degree {k} exceeds the model's top degree"
            )));
        }
        let expected = (self.rank(p - k as i32 + 1), self.rank(p));
        if m.shape() != expected {
            return Err(Error::ShapeMismatch(format!(
                "component ({k}, {p}) has shape {:?}, expected {:?}",
                m.shape(),
                expected
            )));
        }
        if !m.is_homogeneous(k) {
            return Err(Error::Invalid(format!(
                "component ({k}, {p}) has entries outside form degree {k}"
            )));
        }
        Ok(())
    }

    pub fn zero(config: ModelConfig) -> Self {
        CohesiveModule {
            config,
            ranks: BTreeMap::new(),
            connection: ZConnection::default(),
        }
    }

    /// `A^rank` in degree `p` with the plain `dbar`-extension.
    pub fn free(config: ModelConfig, rank: usize, p: i32) -> Self {
        CohesiveModule::new(config, BTreeMap::from([(p, rank)]), []).expect("free module")
    }

    /// Module defined by a linear operator on `E (x) A` (coordinates in
    /// [`TotalBasis`]). Generator values `E(e_i (x) 1)` become the connection
    /// components; the operator itself is kept for the Leibniz check.
    pub fn from_operator(
        config: ModelConfig,
        ranks: BTreeMap<i32, usize>,
        operator: SparseMatrix,
    ) -> Result<Self> {
        let skeleton = CohesiveModule::new(config, ranks, [])?;
        let basis = TotalBasis::new(&skeleton);
        if operator.nrows() != basis.len() || operator.ncols() != basis.len() {
            return Err(Error::ShapeMismatch(format!(
                "operator is {}x{}, the total space has dimension {}",
                operator.nrows(),
                operator.ncols(),
                basis.len()
            )));
        }
        let one = TruncatedForm::one(config, Space::Quotient);
        let mut components: BTreeMap<ComponentKey, FormMatrix> = BTreeMap::new();
        for (&p, &r) in &skeleton.ranks {
            for i in 0..r {
                let col = basis.coordinates(p, i, &one)?;
                let (idx, _) = col.entries()[0];
                let image = basis.decode(operator.column(idx));
                for ((q, j), w) in image {
                    for k in w.degrees() {
                        if q != p - k as i32 + 1 {
                            return Err(Error::Invalid(format!(
                                "operator sends a degree-{p} generator to module degree {q} with form degree {k}"
                            )));
                        }
                        let m = components
                            .entry((k, p))
                            .or_insert_with(|| FormMatrix::zeros(config, skeleton.rank(q), r));
                        m.set(j, i, w.part(k));
                    }
                }
            }
        }
        let mut module = CohesiveModule::new(config, skeleton.ranks, components)?;
        module.connection.operator = Some(Arc::new(operator));
        Ok(module)
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn ranks(&self) -> &BTreeMap<i32, usize> {
        &self.ranks
    }

    pub fn rank(&self, p: i32) -> usize {
        self.ranks.get(&p).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Lowest and highest degree with nonzero rank.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        Some((*self.ranks.keys().next()?, *self.ranks.keys().next_back()?))
    }

    pub fn connection(&self) -> &ZConnection {
        &self.connection
    }

    /// Component `(k, p)`, zero-filled when absent.
    pub fn component(&self, k: usize, p: i32) -> FormMatrix {
        self.connection
            .components
            .get(&(k, p))
            .cloned()
            .unwrap_or_else(|| {
                FormMatrix::zeros(self.config, self.rank(p - k as i32 + 1), self.rank(p))
            })
    }

    /// Same module with the stored operator (if any) forgotten.
    pub fn without_operator(&self) -> Self {
        CohesiveModule {
            connection: ZConnection {
                components: self.connection.components.clone(),
                operator: None,
            },
            ..self.clone()
        }
    }

    /// `E(e_i (x) w)` for a generator `e_i` of degree `p`, as `(q, j) -> form`.
    pub fn apply(
        &self,
        p: i32,
        i: usize,
        w: &TruncatedForm,
    ) -> Result<BTreeMap<(i32, usize), TruncatedForm>> {
        let mut out: BTreeMap<(i32, usize), TruncatedForm> = BTreeMap::new();
        let zero = || TruncatedForm::zero(self.config, Space::Quotient);
        for k in 0..=self.config.m as usize {
            let q = p - k as i32 + 1;
            let Some(c) = self.connection.components.get(&(k, p)) else {
                continue;
            };
            for j in 0..c.rows() {
                let t = wedge(c.get(j, i), w)?;
                if !t.is_zero() {
                    let slot = out.entry((q, j)).or_insert_with(zero);
                    *slot = slot.add(&t)?;
                }
            }
        }
        let dw = dbar(w);
        if !dw.is_zero() {
            let slot = out.entry((p, i)).or_insert_with(zero);
            *slot = slot.add(&dw.scale(&sign(p as i64)))?;
        }
        out.retain(|_, f| !f.is_zero());
        Ok(out)
    }

    /// The Leibniz extension of the generator values as an operator on
    /// `E (x) A`.
    pub fn leibniz_operator(&self) -> Result<SparseMatrix> {
        let basis = TotalBasis::new(self);
        let cols = basis
            .elements()
            .map(|(p, i, w)| {
                let image = self.apply(p, i, &w)?;
                let mut pairs = Vec::new();
                for ((q, j), f) in image {
                    pairs.extend(basis.coordinates(q, j, &f)?.entries().iter().cloned());
                }
                Ok(SparseVec::from_pairs(pairs))
            })
            .collect::<Result<Vec<_>>>()?;
        SparseMatrix::from_columns(basis.len(), cols)
    }

    /// Shapes and homogeneity of every component, plus — when the module
    /// carries an explicit operator — agreement of that operator with the
    /// Leibniz extension of its values on generators.
    pub fn check_leibniz(&self) -> bool {
        let structural = self
            .connection
            .components
            .iter()
            .all(|(&(k, p), m)| self.check_component(k, p, m).is_ok());
        if !structural {
            return false;
        }
        match &self.connection.operator {
            None => true,
            Some(op) => self.leibniz_operator().map(|l| l == **op).unwrap_or(false),
        }
    }

    /// Components of `E o E`: for form degree `K` and module degree `p`,
    /// `sum_{k + k' = K} C^(k', p-k+1) C^(k, p) + (-1)^(p-K) dbar C^(K-1, p)`.
    pub fn curvature(&self) -> Result<BTreeMap<ComponentKey, FormMatrix>> {
        let top = self.config.m as usize;
        let mut out = BTreeMap::new();
        for &p in self.ranks.keys() {
            for big_k in 0..=top {
                let target = p - big_k as i32 + 2;
                let mut acc = FormMatrix::zeros(self.config, self.rank(target), self.rank(p));
                for k in 0..=big_k {
                    let first = self.component(k, p);
                    let second = self.component(big_k - k, p - k as i32 + 1);
                    acc = acc.add(&second.mul(&first)?)?;
                }
                if big_k >= 1 {
                    let d = self
                        .component(big_k - 1, p)
                        .dbar()
                        .signed(p as i64 - big_k as i64);
                    acc = acc.add(&d)?;
                }
                if !acc.is_zero() {
                    out.insert((big_k, p), acc);
                }
            }
        }
        Ok(out)
    }

    /// `E o E = 0`, checked on generators (enough because the square of a
    /// Leibniz operator is coefficient-linear).
    pub fn check_integrability(&self) -> Result<bool> {
        if !self.check_leibniz() {
            return Err(Error::LeibnizViolation(
                "the connection is not the Leibniz extension of its generator values".into(),
            ));
        }
        Ok(self.curvature()?.is_empty())
    }

    /// Verifies directly that `E o E` commutes with right multiplication by
    /// forms: `E^2(e w) = E^2(e) w` on every basis element of `E (x) A`.
    pub fn curvature_is_linear(&self) -> Result<bool> {
        let op = match &self.connection.operator {
            Some(op) => (**op).clone(),
            None => self.leibniz_operator()?,
        };
        let sq = op.compose(&op)?;
        let basis = TotalBasis::new(self);
        let one = TruncatedForm::one(self.config, Space::Quotient);
        for (col, (p, i, w)) in basis.elements().enumerate() {
            let gen = basis.coordinates(p, i, &one)?;
            let on_gen = basis.decode(sq.column(gen.entries()[0].0));
            let mut expected = Vec::new();
            for ((q, j), f) in on_gen {
                expected.extend(
                    basis
                        .coordinates(q, j, &wedge(&f, &w)?)?
                        .entries()
                        .iter()
                        .cloned(),
                );
            }
            if SparseVec::from_pairs(expected) != *sq.column(col) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `E[s]`: degrees lowered by `s`, connection multiplied by `(-1)^s`.
    pub fn shift_by(&self, s: i32) -> Self {
        let ranks = self.ranks.iter().map(|(p, r)| (p - s, *r)).collect();
        let components = self
            .connection
            .components
            .iter()
            .map(|(&(k, p), m)| ((k, p - s), m.signed(s as i64)))
            .collect();
        CohesiveModule {
            config: self.config,
            ranks,
            connection: ZConnection {
                components,
                operator: None,
            },
        }
    }

    /// `E[1]`.
    pub fn shift(&self) -> Self {
        self.shift_by(1)
    }

    /// Direct sum with block-diagonal connection; generators of `self` come
    /// first in every degree.
    pub fn direct_sum(&self, other: &CohesiveModule) -> Result<Self> {
        if self.config != other.config {
            return Err(Error::ModelMismatch(
                "direct sum of modules over different models".into(),
            ));
        }
        let mut ranks = self.ranks.clone();
        for (p, r) in &other.ranks {
            *ranks.entry(*p).or_default() += r;
        }
        let mut keys: Vec<ComponentKey> = self.connection.components.keys().copied().collect();
        keys.extend(other.connection.components.keys().copied());
        keys.sort_unstable();
        keys.dedup();
        let components = keys.into_iter().map(|(k, p)| {
            let q = p - k as i32 + 1;
            let mut m = FormMatrix::zeros(
                self.config,
                self.rank(q) + other.rank(q),
                self.rank(p) + other.rank(p),
            );
            m.set_block(0, 0, &self.component(k, p));
            m.set_block(self.rank(q), self.rank(p), &other.component(k, p));
            ((k, p), m)
        });
        CohesiveModule::new(self.config, ranks, components.collect::<Vec<_>>())
    }

    /// Degree-0 part of the connection as a complex of Q(i)-vector spaces:
    /// degree `p` is `A^0 (x) Q(i)^rank(p)`.
    pub fn underlying_complex(&self) -> Result<CochainComplex> {
        let forms = form_basis(&self.config, Space::Quotient, 0);
        let index = BasisIndex::new(&forms);
        let dim_a = forms.len();
        let mut complex = CochainComplex::new();
        let Some((lo, hi)) = self.degree_range() else {
            return Ok(complex);
        };
        for p in lo..=hi {
            complex.set_space(p, self.rank(p) * dim_a);
        }
        for p in lo..hi {
            let c = self.component(0, p);
            let mut cols = Vec::with_capacity(self.rank(p) * dim_a);
            for i in 0..self.rank(p) {
                for f in &forms {
                    let w = f.to_form(&self.config, Space::Quotient);
                    let mut pairs = Vec::new();
                    for j in 0..c.rows() {
                        let t = wedge(c.get(j, i), &w)?;
                        let local = index.coordinates(&t)?;
                        pairs.extend(
                            local
                                .entries()
                                .iter()
                                .map(|(k, x)| (j * dim_a + k, x.clone())),
                        );
                    }
                    cols.push(SparseVec::from_pairs(pairs));
                }
            }
            complex.set_differential(
                p,
                SparseMatrix::from_columns(self.rank(p + 1) * dim_a, cols)?,
            )?;
        }
        Ok(complex)
    }

    pub fn to_doc(&self) -> ModuleDoc {
        ModuleDoc {
            config: self.config,
            ranks: self.ranks.clone(),
            connection: self
                .connection
                .components
                .iter()
                .map(|(&(k, p), m)| (k, p, m.to_doc()))
                .collect(),
        }
    }

    pub fn from_doc(doc: &ModuleDoc) -> Result<Self> {
        let ranks: BTreeMap<i32, usize> = doc
            .ranks
            .iter()
            .filter(|(_, r)| **r > 0)
            .map(|(p, r)| (*p, *r))
            .collect();
        let rank = |p: i32| ranks.get(&p).copied().unwrap_or(0);
        let components = doc
            .connection
            .iter()
            .map(|(k, p, m)| {
                let rows = rank(p - *k as i32 + 1);
                let cols = rank(*p);
                Ok(((*k, *p), FormMatrix::from_doc(doc.config, rows, cols, m)?))
            })
            .collect::<Result<Vec<_>>>()?;
        CohesiveModule::new(doc.config, ranks, components)
    }
}

/// Wire form: `{config, ranks: {degree: rank}, connection: [[k, p, matrix]]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModuleDoc {
    pub config: ModelConfig,
    pub ranks: BTreeMap<i32, usize>,
    #[serde(default)]
    pub connection: Vec<(usize, i32, MatrixDoc)>,
}

impl Serialize for CohesiveModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CohesiveModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = ModuleDoc::deserialize(d)?;
        CohesiveModule::from_doc(&doc).map_err(serde::de::Error::custom)
    }
}
