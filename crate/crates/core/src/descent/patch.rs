use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cohesive::{cone, is_homotopy_equivalence, CohesiveModule, HomElement, ModuleDoc};
use crate::error::{Error, Result};
use crate::linalg::ComplexReport;
use crate::model::ModelConfig;

/// Finite, sorted, duplicate-free set of patch identifiers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct PatchSet(Vec<u32>);

impl TryFrom<Vec<u32>> for PatchSet {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(
                "patch sets must be strictly increasing".into(),
            ));
        }
        Ok(PatchSet(v))
    }
}

impl From<PatchSet> for Vec<u32> {
    fn from(s: PatchSet) -> Self {
        s.0
    }
}

impl PatchSet {
    pub fn new(ids: impl IntoIterator<Item = u32>) -> Self {
        let mut v: Vec<u32> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        PatchSet(v)
    }

    pub fn ids(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: u32) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn is_subset(&self, other: &PatchSet) -> bool {
        self.0.iter().all(|s| other.contains(*s))
    }

    pub fn union(&self, other: &PatchSet) -> PatchSet {
        PatchSet::new(self.0.iter().chain(&other.0).copied())
    }

    pub fn intersection(&self, other: &PatchSet) -> PatchSet {
        PatchSet(
            self.0
                .iter()
                .copied()
                .filter(|s| other.contains(*s))
                .collect(),
        )
    }

    pub fn difference(&self, other: &PatchSet) -> PatchSet {
        PatchSet(
            self.0
                .iter()
                .copied()
                .filter(|s| !other.contains(*s))
                .collect(),
        )
    }
}

impl fmt::Display for PatchSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Direct product of copies of one model dga, indexed by a patch set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatchDga {
    pub patches: PatchSet,
    pub config: ModelConfig,
}

impl PatchDga {
    pub fn new(patches: PatchSet, config: ModelConfig) -> Self {
        PatchDga { patches, config }
    }

    /// Dimension of the degree-0 part over Q(i) (exact backend only).
    pub fn degree0_dim(&self) -> usize {
        self.patches.len()
            * crate::model::form_basis(&self.config, crate::model::Space::Quotient, 0).len()
    }
}

/// A dga homomorphism between patch dgas: the projection onto a subset of
/// patches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchMap {
    pub source: PatchDga,
    pub target: PatchDga,
}

impl PatchMap {
    pub fn projection(source: &PatchDga, onto: &PatchSet) -> Result<Self> {
        if !onto.is_subset(&source.patches) {
            return Err(Error::ModelMismatch(format!(
                "cannot project patches {} onto {}",
                source.patches, onto
            )));
        }
        Ok(PatchMap {
            source: source.clone(),
            target: PatchDga::new(onto.clone(), source.config),
        })
    }

    pub fn identity(dga: &PatchDga) -> Self {
        PatchMap {
            source: dga.clone(),
            target: dga.clone(),
        }
    }

    /// `other o self`.
    pub fn then(&self, other: &PatchMap) -> Result<PatchMap> {
        if self.target != other.source {
            return Err(Error::ModelMismatch("non-composable patch maps".into()));
        }
        PatchMap::projection(&self.source, &other.target.patches)
    }

    /// The degree-0 map is surjective: projections always are.
    pub fn is_surjective(&self) -> bool {
        self.target.patches.is_subset(&self.source.patches)
    }
}

/// A cohesive module over a patch dga: one module per patch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchModule {
    dga: PatchDga,
    parts: BTreeMap<u32, Arc<CohesiveModule>>,
}

impl PatchModule {
    pub fn new(dga: PatchDga, parts: BTreeMap<u32, CohesiveModule>) -> Result<Self> {
        if parts.keys().copied().collect::<Vec<_>>() != dga.patches.ids() {
            return Err(Error::ModelMismatch(
                "a module is needed on every patch".into(),
            ));
        }
        if parts.values().any(|m| *m.config() != dga.config) {
            return Err(Error::ModelMismatch(
                "patch module over a different model".into(),
            ));
        }
        Ok(PatchModule {
            dga,
            parts: parts.into_iter().map(|(s, m)| (s, Arc::new(m))).collect(),
        })
    }

    pub fn uniform(dga: PatchDga, module: &CohesiveModule) -> Result<Self> {
        let parts = dga
            .patches
            .ids()
            .iter()
            .map(|&s| (s, module.clone()))
            .collect();
        PatchModule::new(dga, parts)
    }

    pub fn zero(dga: PatchDga) -> Self {
        let parts = dga
            .patches
            .ids()
            .iter()
            .map(|&s| (s, Arc::new(CohesiveModule::zero(dga.config))))
            .collect();
        PatchModule { dga, parts }
    }

    pub fn dga(&self) -> &PatchDga {
        &self.dga
    }

    pub fn part(&self, s: u32) -> &Arc<CohesiveModule> {
        &self.parts[&s]
    }

    pub fn parts(&self) -> &BTreeMap<u32, Arc<CohesiveModule>> {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.values().all(|m| m.is_zero())
    }

    /// Inverse image along a patch map: `f^* E = E (x)_A B`, which for a
    /// projection keeps the parts over the target patches.
    pub fn pullback(&self, f: &PatchMap) -> Result<PatchModule> {
        if f.source != self.dga {
            return Err(Error::ModelMismatch(
                "pullback along a map from a different dga".into(),
            ));
        }
        Ok(PatchModule {
            dga: f.target.clone(),
            parts: f
                .target
                .patches
                .ids()
                .iter()
                .map(|&s| (s, self.parts[&s].clone()))
                .collect(),
        })
    }

    /// Restriction to a subset of patches.
    pub fn restrict_to(&self, patches: &PatchSet) -> Result<PatchModule> {
        self.pullback(&PatchMap::projection(&self.dga, patches)?)
    }

    pub fn check_integrability(&self) -> Result<bool> {
        for m in self.parts.values() {
            if !m.check_integrability()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn shift(&self) -> PatchModule {
        self.map_parts(|m| m.shift())
    }

    fn map_parts(&self, f: impl Fn(&CohesiveModule) -> CohesiveModule) -> PatchModule {
        PatchModule {
            dga: self.dga.clone(),
            parts: self
                .parts
                .iter()
                .map(|(s, m)| (*s, Arc::new(f(m))))
                .collect(),
        }
    }

    pub fn to_doc(&self) -> PatchModuleDoc {
        PatchModuleDoc {
            config: self.dga.config,
            patches: self
                .parts
                .iter()
                .map(|(s, m)| PatchPartDoc {
                    patch: *s,
                    module: m.to_doc(),
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &PatchModuleDoc) -> Result<Self> {
        let patches = PatchSet::new(doc.patches.iter().map(|p| p.patch));
        if patches.len() != doc.patches.len() {
            return Err(Error::Invalid("repeated patch in module document".into()));
        }
        let parts = doc
            .patches
            .iter()
            .map(|p| {
                if p.module.config != doc.config {
                    return Err(Error::ModelMismatch(format!(
                        "patch {} uses a different model",
                        p.patch
                    )));
                }
                Ok((p.patch, CohesiveModule::from_doc(&p.module)?))
            })
            .collect::<Result<_>>()?;
        PatchModule::new(PatchDga::new(patches, doc.config), parts)
    }
}

/// Wire form: `{config, patches: [{patch, module}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PatchModuleDoc {
    pub config: ModelConfig,
    pub patches: Vec<PatchPartDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PatchPartDoc {
    pub patch: u32,
    pub module: ModuleDoc,
}

/// A hom element between patch modules: one per patch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchHom {
    source: Arc<PatchModule>,
    target: Arc<PatchModule>,
    degree: i32,
    parts: BTreeMap<u32, HomElement>,
}

impl PatchHom {
    pub fn new(
        source: Arc<PatchModule>,
        target: Arc<PatchModule>,
        degree: i32,
        parts: BTreeMap<u32, HomElement>,
    ) -> Result<Self> {
        if source.dga != target.dga {
            return Err(Error::ShapeMismatch(
                "patch hom between modules over different dgas".into(),
            ));
        }
        for &s in source.dga.patches.ids() {
            let Some(h) = parts.get(&s) else {
                return Err(Error::ShapeMismatch(format!(
                    "missing hom component on patch {s}"
                )));
            };
            if h.degree() != degree
                || **h.source() != **source.part(s)
                || **h.target() != **target.part(s)
            {
                return Err(Error::ShapeMismatch(format!(
                    "hom component on patch {s} has the wrong endpoints"
                )));
            }
        }
        if parts.len() != source.dga.patches.len() {
            return Err(Error::ShapeMismatch(
                "hom components on unknown patches".into(),
            ));
        }
        Ok(PatchHom {
            source,
            target,
            degree,
            parts,
        })
    }

    pub fn zero(source: Arc<PatchModule>, target: Arc<PatchModule>, degree: i32) -> Result<Self> {
        let parts = source
            .dga
            .patches
            .ids()
            .iter()
            .map(|&s| {
                (
                    s,
                    HomElement::zero(source.part(s).clone(), target.part(s).clone(), degree),
                )
            })
            .collect();
        PatchHom::new(source, target, degree, parts)
    }

    pub fn identity(module: Arc<PatchModule>) -> Self {
        let parts = module
            .parts
            .iter()
            .map(|(s, m)| (*s, HomElement::identity(m.clone())))
            .collect();
        PatchHom {
            source: module.clone(),
            target: module,
            degree: 0,
            parts,
        }
    }

    pub fn source(&self) -> &Arc<PatchModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PatchModule> {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn part(&self, s: u32) -> &HomElement {
        &self.parts[&s]
    }

    pub fn parts(&self) -> &BTreeMap<u32, HomElement> {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.values().all(HomElement::is_zero)
    }

    fn zip(
        &self,
        other: &PatchHom,
        f: impl Fn(&HomElement, &HomElement) -> Result<HomElement>,
    ) -> Result<BTreeMap<u32, HomElement>> {
        self.parts
            .iter()
            .map(|(s, h)| {
                let o = other
                    .parts
                    .get(s)
                    .ok_or_else(|| Error::ShapeMismatch(format!("patch {s} missing")))?;
                Ok((*s, f(h, o)?))
            })
            .collect()
    }

    pub fn add(&self, other: &PatchHom) -> Result<PatchHom> {
        if self.degree != other.degree || self.source != other.source || self.target != other.target
        {
            return Err(Error::ShapeMismatch(
                "adding patch homs with different endpoints".into(),
            ));
        }
        Ok(PatchHom {
            parts: self.zip(other, |a, b| a.add(b))?,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &PatchHom) -> Result<PatchHom> {
        self.add(&other.scale(&crate::coeff::Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &crate::coeff::Scalar) -> PatchHom {
        PatchHom {
            parts: self.parts.iter().map(|(p, h)| (*p, h.scale(s))).collect(),
            ..self.clone()
        }
    }

    pub fn differential(&self) -> Result<PatchHom> {
        Ok(PatchHom {
            degree: self.degree + 1,
            parts: self
                .parts
                .iter()
                .map(|(s, h)| Ok((*s, h.differential()?)))
                .collect::<Result<_>>()?,
            ..self.clone()
        })
    }

    /// `self o phi`.
    pub fn compose(&self, phi: &PatchHom) -> Result<PatchHom> {
        if phi.target != self.source {
            return Err(Error::ShapeMismatch(
                "composition of non-composable patch homs".into(),
            ));
        }
        Ok(PatchHom {
            source: phi.source.clone(),
            target: self.target.clone(),
            degree: self.degree + phi.degree,
            parts: self.zip(phi, |a, b| a.compose(b))?,
        })
    }

    /// Inverse image along a patch projection.
    pub fn pullback(&self, f: &PatchMap) -> Result<PatchHom> {
        let source = Arc::new(self.source.pullback(f)?);
        let target = Arc::new(self.target.pullback(f)?);
        let parts = f
            .target
            .patches
            .ids()
            .iter()
            .map(|&s| (s, self.parts[&s].clone()))
            .collect();
        PatchHom::new(source, target, self.degree, parts)
    }

    pub fn restrict_to(&self, patches: &PatchSet) -> Result<PatchHom> {
        self.pullback(&PatchMap::projection(&self.source.dga, patches)?)
    }

    /// Same components viewed between other (equal) endpoints.
    pub fn with_endpoints(
        &self,
        source: Arc<PatchModule>,
        target: Arc<PatchModule>,
    ) -> Result<PatchHom> {
        let parts = self
            .parts
            .iter()
            .map(|(s, h)| {
                Ok((
                    *s,
                    h.with_endpoints(source.part(*s).clone(), target.part(*s).clone())?,
                ))
            })
            .collect::<Result<_>>()?;
        PatchHom::new(source, target, self.degree, parts)
    }

    pub fn is_closed(&self) -> Result<bool> {
        Ok(self.differential()?.is_zero())
    }

    /// Patch-wise homotopy-equivalence criterion.
    pub fn is_homotopy_equivalence(&self) -> Result<bool> {
        for h in self.parts.values() {
            if !is_homotopy_equivalence(h)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Patch-wise cone.
    pub fn cone(&self) -> Result<PatchModule> {
        let parts = self
            .parts
            .iter()
            .map(|(s, h)| Ok((*s, cone(h)?)))
            .collect::<Result<_>>()?;
        PatchModule::new(self.source.dga.clone(), parts)
    }
}

/// Direct sum of per-patch Ext reports: the hom complex over a product dga
/// is the product of the patch-wise hom complexes.
pub fn patch_ext_dims(e: &PatchModule, f: &PatchModule) -> Result<ComplexReport> {
    if e.dga != f.dga {
        return Err(Error::ModelMismatch(
            "modules over different patch dgas".into(),
        ));
    }
    let mut report = ComplexReport::from_degrees(Vec::new());
    for s in e.dga.patches.ids() {
        report = report.direct_sum(&crate::cohesive::ext_dims(e.part(*s), f.part(*s))?);
    }
    Ok(report)
}
