use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::matrix::{FormMatrix, MatrixDoc};
use super::module::{CohesiveModule, ComponentKey};
use crate::coeff::Scalar;
use crate::error::{Error, Result};
use crate::linalg::{CochainComplex, ComplexReport, SparseMatrix, SparseVec};
use crate::model::{form_basis, BasisIndex, FormBasisElement, ModelConfig, Space, TruncatedForm};

/// Degree-`k` element of the hom complex `P_A(E, F)`. Component `(j, p)` is
/// the matrix of shape `rank_F(p + k - j) x rank_E(p)` with entries in `A^j`
/// describing `phi(e_i) = sum_l f_l Phi_li`; elements are right
/// `A`-linear, `phi(e w) = phi(e) w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomElement {
    source: Arc<CohesiveModule>,
    target: Arc<CohesiveModule>,
    degree: i32,
    components: BTreeMap<ComponentKey, FormMatrix>,
}

fn sign(e: i64) -> Scalar {
    if e.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        Scalar::from_int(-1)
    }
}

impl HomElement {
    pub fn new(
        source: Arc<CohesiveModule>,
        target: Arc<CohesiveModule>,
        degree: i32,
        components: impl IntoIterator<Item = (ComponentKey, FormMatrix)>,
    ) -> Result<Self> {
        if source.config() != target.config() {
            return Err(Error::ModelMismatch(
                "hom between modules over different models".into(),
            ));
        }
        let mut out = HomElement {
            source,
            target,
            degree,
            components: BTreeMap::new(),
        };
        for ((j, p), m) in components {
            let expected = out.shape(j, p);
            if m.shape() != expected {
                return Err(Error::ShapeMismatch(format!(
                    "hom component ({j}, {p}) has shape {:?}, expected {:?}",
                    m.shape(),
                    expected
                )));
            }
            if *m.config() != *out.source.config() {
                return Err(Error::ModelMismatch(
                    "hom component over a different model".into(),
                ));
            }
            if j > out.source.config().m as usize || !m.is_homogeneous(j) {
                return Err(Error::Invalid(format!(
                    "hom component ({j}, {p}) is not of form degree {j}"
                )));
            }
            out.accumulate((j, p), m)?;
        }
        Ok(out)
    }

    pub fn zero(source: Arc<CohesiveModule>, target: Arc<CohesiveModule>, degree: i32) -> Self {
        HomElement {
            source,
            target,
            degree,
            components: BTreeMap::new(),
        }
    }

    /// Identity endomorphism.
    pub fn identity(module: Arc<CohesiveModule>) -> Self {
        Self::scalar(module, &Scalar::one())
    }

    /// `s * id`, or more generally multiplication by a central degree-0
    /// form when built through [`HomElement::multiplication`].
    pub fn scalar(module: Arc<CohesiveModule>, s: &Scalar) -> Self {
        let one = TruncatedForm::constant(*module.config(), Space::Quotient, s.clone());
        Self::multiplication(module, &one).expect("constants are degree-0 forms")
    }

    /// Right multiplication by a degree-0 form `a` (central in `A^0`).
    pub fn multiplication(module: Arc<CohesiveModule>, a: &TruncatedForm) -> Result<Self> {
        if a.degrees().iter().any(|&k| k > 0) {
            return Err(Error::Invalid(
                "multiplication by a form of positive degree".into(),
            ));
        }
        let config = *module.config();
        let components = module
            .ranks()
            .iter()
            .map(|(&p, &r)| Ok(((0, p), FormMatrix::identity(config, r).scale_form(a)?)))
            .collect::<Result<Vec<_>>>()?;
        HomElement::new(module.clone(), module, 0, components)
    }

    fn shape(&self, j: usize, p: i32) -> (usize, usize) {
        (
            self.target.rank(p + self.degree - j as i32),
            self.source.rank(p),
        )
    }

    fn accumulate(&mut self, key: ComponentKey, m: FormMatrix) -> Result<()> {
        if m.is_zero() {
            return Ok(());
        }
        let sum = match self.components.remove(&key) {
            Some(prev) => prev.add(&m)?,
            None => m,
        };
        if !sum.is_zero() {
            self.components.insert(key, sum);
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<CohesiveModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CohesiveModule> {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn config(&self) -> &ModelConfig {
        self.source.config()
    }

    pub fn components(&self) -> &BTreeMap<ComponentKey, FormMatrix> {
        &self.components
    }

    pub fn component(&self, j: usize, p: i32) -> FormMatrix {
        self.components.get(&(j, p)).cloned().unwrap_or_else(|| {
            let (r, c) = self.shape(j, p);
            FormMatrix::zeros(*self.config(), r, c)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn check_parallel(&self, other: &HomElement) -> Result<()> {
        if self.degree != other.degree || self.source != other.source || self.target != other.target
        {
            return Err(Error::ShapeMismatch(
                "hom elements with different endpoints or degrees".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &HomElement) -> Result<HomElement> {
        self.check_parallel(other)?;
        let mut out = self.clone();
        for (k, m) in &other.components {
            out.accumulate(*k, m.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HomElement) -> Result<HomElement> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> HomElement {
        if s.is_zero() {
            return HomElement::zero(self.source.clone(), self.target.clone(), self.degree);
        }
        HomElement {
            components: self
                .components
                .iter()
                .map(|(k, m)| (*k, m.scale(s)))
                .collect(),
            ..self.clone()
        }
    }

    /// Same components viewed between other (equal-shaped) endpoints.
    pub fn with_endpoints(
        &self,
        source: Arc<CohesiveModule>,
        target: Arc<CohesiveModule>,
    ) -> Result<HomElement> {
        HomElement::new(source, target, self.degree, self.components.clone())
    }

    /// `d(phi) = E_F o phi - (-1)^k phi o E_E`. Component `(J, p)`:
    /// `sum_{k2 + j = J} C_F^(k2, p+k-j) Phi^(j, p)
    ///  + (-1)^(p+k-J+1) dbar Phi^(J-1, p)
    ///  - (-1)^k sum_{j + k1 = J} Phi^(j, p-k1+1) C_E^(k1, p)`.
    pub fn differential(&self) -> Result<HomElement> {
        let k = self.degree;
        let top = self.config().m as usize;
        let mut out = HomElement::zero(self.source.clone(), self.target.clone(), k + 1);
        for &p in self.source.ranks().keys() {
            for big_j in 0..=top {
                let (rows, cols) = out.shape(big_j, p);
                if rows == 0 || cols == 0 {
                    continue;
                }
                let mut acc = FormMatrix::zeros(*self.config(), rows, cols);
                for j in 0..=big_j {
                    let k2 = big_j - j;
                    if let Some(phi) = self.components.get(&(j, p)) {
                        let c = self.target.component(k2, p + k - j as i32);
                        acc = acc.add(&c.mul(phi)?)?;
                    }
                    let k1 = big_j - j;
                    if let Some(phi) = self.components.get(&(j, p - k1 as i32 + 1)) {
                        let c = self.source.component(k1, p);
                        acc = acc.sub(&phi.mul(&c)?.signed(k as i64))?;
                    }
                }
                if big_j >= 1 {
                    if let Some(phi) = self.components.get(&(big_j - 1, p)) {
                        acc =
                            acc.add(&phi.dbar().scale(&sign((p + k - big_j as i32 + 1) as i64)))?;
                    }
                }
                out.accumulate((big_j, p), acc)?;
            }
        }
        Ok(out)
    }

    pub fn is_closed(&self) -> Result<bool> {
        Ok(self.differential()?.is_zero())
    }

    /// `self o phi`: component `(J, p)` is
    /// `sum_{j + j' = J} Psi^(j', p + k_phi - j) Phi^(j, p)`.
    pub fn compose(&self, phi: &HomElement) -> Result<HomElement> {
        if *phi.target != *self.source {
            return Err(Error::ShapeMismatch(
                "composition of non-composable hom elements".into(),
            ));
        }
        let kp = phi.degree;
        let mut out = HomElement::zero(phi.source.clone(), self.target.clone(), kp + self.degree);
        for (&(j, p), m_phi) in &phi.components {
            for (&(j2, q), m_psi) in &self.components {
                if q != p + kp - j as i32 || j + j2 > self.config().m as usize {
                    continue;
                }
                out.accumulate((j + j2, p), m_psi.mul(m_phi)?)?;
            }
        }
        Ok(out)
    }

    pub fn to_doc(&self) -> HomDoc {
        HomDoc {
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(&(j, p), m)| (j, p, m.to_doc()))
                .collect(),
        }
    }

    pub fn from_doc(
        doc: &HomDoc,
        source: Arc<CohesiveModule>,
        target: Arc<CohesiveModule>,
    ) -> Result<Self> {
        let config = *source.config();
        let components = doc
            .components
            .iter()
            .map(|(j, p, m)| {
                let rows = target.rank(p + doc.degree - *j as i32);
                let cols = source.rank(*p);
                Ok(((*j, *p), FormMatrix::from_doc(config, rows, cols, m)?))
            })
            .collect::<Result<Vec<_>>>()?;
        HomElement::new(source, target, doc.degree, components)
    }
}

/// Wire form of a hom element: `{degree, components: [[j, p, matrix]]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HomDoc {
    pub degree: i32,
    #[serde(default)]
    pub components: Vec<(usize, i32, MatrixDoc)>,
}

/// `d(phi)` as a free function.
pub fn hom_differential(phi: &HomElement) -> Result<HomElement> {
    phi.differential()
}

pub fn compose(psi: &HomElement, phi: &HomElement) -> Result<HomElement> {
    psi.compose(phi)
}

pub fn shift(module: &CohesiveModule) -> CohesiveModule {
    module.shift()
}

fn require_closed_degree_zero(phi: &HomElement) -> Result<()> {
    if phi.degree != 0 {
        return Err(Error::WrongDegree {
            expected: 0,
            got: phi.degree,
        });
    }
    if !phi.is_closed()? {
        return Err(Error::NotClosed);
    }
    Ok(())
}

/// `Cone(phi)` for a closed degree-0 `phi: E -> F`: `Cone^p = F^p (+) E^(p+1)`
/// with connection `[[C_F, Phi], [0, -C_E]]`.
pub fn cone(phi: &HomElement) -> Result<CohesiveModule> {
    require_closed_degree_zero(phi)?;
    cone_unchecked(phi)
}

pub(crate) fn cone_unchecked(phi: &HomElement) -> Result<CohesiveModule> {
    let e = &phi.source;
    let f = &phi.target;
    let config = *e.config();
    let mut degrees: Vec<i32> = f.ranks().keys().copied().collect();
    degrees.extend(e.ranks().keys().map(|p| p - 1));
    degrees.sort_unstable();
    degrees.dedup();
    let ranks: BTreeMap<i32, usize> = degrees
        .iter()
        .map(|&p| (p, f.rank(p) + e.rank(p + 1)))
        .collect();
    let mut components = Vec::new();
    for &p in &degrees {
        for k in 0..=config.m as usize {
            let q = p - k as i32 + 1;
            let (fq, eq) = (f.rank(q), e.rank(q + 1));
            let (fp, ep) = (f.rank(p), e.rank(p + 1));
            if fq + eq == 0 {
                continue;
            }
            let mut m = FormMatrix::zeros(config, fq + eq, fp + ep);
            m.set_block(0, 0, &f.component(k, p));
            m.set_block(0, fp, &phi.component(k, p + 1));
            m.set_block(fq, fp, &e.component(k, p + 1).neg());
            components.push(((k, p), m));
        }
    }
    CohesiveModule::new(config, ranks, components)
}

/// A closed degree-0 map is a homotopy equivalence iff its degree-0 part is
/// a quasi-isomorphism of the underlying complexes, i.e. iff the degree-0
/// complex of its cone is acyclic.
pub fn is_homotopy_equivalence(phi: &HomElement) -> Result<bool> {
    require_closed_degree_zero(phi)?;
    Ok(cone_unchecked(phi)?
        .underlying_complex()?
        .report()
        .is_acyclic())
}

/// Monomial basis of `Hom^k(E, F)`: entries `(j, p, l, i, w)` meaning the
/// element with a single component entry `Phi^(j,p)_li = w`.
pub struct HomBasis {
    source: Arc<CohesiveModule>,
    target: Arc<CohesiveModule>,
    degree: i32,
    slots: Vec<(usize, i32, usize, usize, usize)>,
    offsets: BTreeMap<(usize, i32, usize, usize), usize>,
    forms: Vec<Vec<FormBasisElement>>,
    indices: Vec<BasisIndex>,
}

impl HomBasis {
    pub fn new(source: Arc<CohesiveModule>, target: Arc<CohesiveModule>, degree: i32) -> Self {
        let config = *source.config();
        let forms: Vec<Vec<FormBasisElement>> = (0..=config.m as usize)
            .map(|j| form_basis(&config, Space::Quotient, j))
            .collect();
        let indices = forms.iter().map(|f| BasisIndex::new(f)).collect();
        let mut slots = Vec::new();
        let mut offsets = BTreeMap::new();
        for (j, fj) in forms.iter().enumerate() {
            for (&p, &cols) in source.ranks() {
                let rows = target.rank(p + degree - j as i32);
                for l in 0..rows {
                    for i in 0..cols {
                        offsets.insert((j, p, l, i), slots.len());
                        for w in 0..fj.len() {
                            slots.push((j, p, l, i, w));
                        }
                    }
                }
            }
        }
        HomBasis {
            source,
            target,
            degree,
            slots,
            offsets,
            forms,
            indices,
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// The basis element with index `idx`.
    pub fn element(&self, idx: usize) -> HomElement {
        let (j, p, l, i, w) = self.slots[idx];
        let config = *self.source.config();
        let rows = self.target.rank(p + self.degree - j as i32);
        let mut m = FormMatrix::zeros(config, rows, self.source.rank(p));
        m.set(l, i, self.forms[j][w].to_form(&config, Space::Quotient));
        HomElement::new(
            self.source.clone(),
            self.target.clone(),
            self.degree,
            [((j, p), m)],
        )
        .expect("basis elements have valid shapes")
    }

    pub fn coordinates(&self, phi: &HomElement) -> Result<SparseVec> {
        if phi.degree != self.degree {
            return Err(Error::WrongDegree {
                expected: self.degree,
                got: phi.degree,
            });
        }
        let mut pairs = Vec::new();
        for (&(j, p), m) in &phi.components {
            for l in 0..m.rows() {
                for i in 0..m.cols() {
                    let entry = m.get(l, i);
                    if entry.is_zero() {
                        continue;
                    }
                    let off = self.offsets[&(j, p, l, i)];
                    let local = self.indices[j].coordinates(entry)?;
                    pairs.extend(local.entries().iter().map(|(k, c)| (off + k, c.clone())));
                }
            }
        }
        Ok(SparseVec::from_pairs(pairs))
    }

    pub fn element_from(&self, v: &SparseVec) -> HomElement {
        let mut out = HomElement::zero(self.source.clone(), self.target.clone(), self.degree);
        for (idx, c) in v.entries() {
            out = out
                .add(&self.element(*idx).scale(c))
                .expect("same endpoints");
        }
        out
    }
}

/// The hom complex `P_A(E, F)` as a finite cochain complex over Q(i).
/// Requires the exact backend.
pub fn hom_complex(e: &Arc<CohesiveModule>, f: &Arc<CohesiveModule>) -> Result<CochainComplex> {
    if e.config() != f.config() {
        return Err(Error::ModelMismatch("modules over different models".into()));
    }
    if !e.config().is_exact() {
        return Err(Error::InfiniteDimensionalBackend);
    }
    let mut complex = CochainComplex::new();
    let (Some((e_lo, e_hi)), Some((f_lo, f_hi))) = (e.degree_range(), f.degree_range()) else {
        return Ok(complex);
    };
    let top = e.config().m as i32;
    let (k_lo, k_hi) = (f_lo - e_hi, f_hi - e_lo + top);
    let bases: BTreeMap<i32, HomBasis> = (k_lo..=k_hi)
        .map(|k| (k, HomBasis::new(e.clone(), f.clone(), k)))
        .collect();
    for k in k_lo..=k_hi {
        complex.set_space(k, bases[&k].len());
    }
    for k in k_lo..k_hi {
        let src = &bases[&k];
        let dst = &bases[&(k + 1)];
        let cols = (0..src.len())
            .map(|idx| dst.coordinates(&src.element(idx).differential()?))
            .collect::<Result<Vec<_>>>()?;
        complex.set_differential(k, SparseMatrix::from_columns(dst.len(), cols)?)?;
    }
    Ok(complex)
}

/// Dimensions of `H^k(P_A(E, F))` for every `k`.
pub fn ext_dims(e: &Arc<CohesiveModule>, f: &Arc<CohesiveModule>) -> Result<ComplexReport> {
    Ok(hom_complex(e, f)?.report())
}
