use serde::Serialize;

use super::patch::{PatchDga, PatchMap, PatchSet};
use crate::error::{Error, Result};
use crate::model::ModelConfig;

/// The square of patch dgas for a two-set cover `U = S1 u S2`:
///
/// ```text
///   A(U) --f--> B(S1)
///    |k          |g
///    v           v
///   C(S2) --l--> D(S1 n S2)
/// ```
///
/// with every arrow a projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentSquare {
    pub a: PatchDga,
    pub b: PatchDga,
    pub c: PatchDga,
    pub d: PatchDga,
    pub f: PatchMap,
    pub g: PatchMap,
    pub k: PatchMap,
    pub l: PatchMap,
}

/// One programmatically checked condition on the square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssumptionCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

impl DescentSquare {
    pub fn new(s1: PatchSet, s2: PatchSet, config: ModelConfig) -> Result<Self> {
        if s1.is_empty() || s2.is_empty() {
            return Err(Error::Invalid("cover sets must be nonempty".into()));
        }
        let a = PatchDga::new(s1.union(&s2), config);
        let b = PatchDga::new(s1.clone(), config);
        let c = PatchDga::new(s2.clone(), config);
        let d = PatchDga::new(s1.intersection(&s2), config);
        let f = PatchMap::projection(&a, &b.patches)?;
        let k = PatchMap::projection(&a, &c.patches)?;
        let g = PatchMap::projection(&b, &d.patches)?;
        let l = PatchMap::projection(&c, &d.patches)?;
        let square = DescentSquare {
            a,
            b,
            c,
            d,
            f,
            g,
            k,
            l,
        };
        if let Some(bad) = square.check_assumptions().into_iter().find(|c| !c.holds) {
            return Err(Error::Invalid(format!(
                "descent condition {} fails: {}",
                bad.name, bad.detail
            )));
        }
        Ok(square)
    }

    pub fn s1(&self) -> &PatchSet {
        &self.b.patches
    }

    pub fn s2(&self) -> &PatchSet {
        &self.c.patches
    }

    pub fn union(&self) -> &PatchSet {
        &self.a.patches
    }

    pub fn intersection(&self) -> &PatchSet {
        &self.d.patches
    }

    /// The four conditions making the square a fiber product suitable for
    /// descent.
    pub fn check_assumptions(&self) -> Vec<AssumptionCheck> {
        let (u, s1, s2, s12) = (
            &self.a.patches,
            &self.b.patches,
            &self.c.patches,
            &self.d.patches,
        );
        // A^0 = B^0 x_{D^0} C^0: the patch sets glue and dimensions add up
        let sets_glue = *u == s1.union(s2) && *s12 == s1.intersection(s2);
        let dims_add = self.a.degree0_dim() + self.d.degree0_dim()
            == self.b.degree0_dim() + self.c.degree0_dim();
        let gf = self.f.then(&self.g);
        let lk = self.k.then(&self.l);
        let commutes = matches!((&gf, &lk), (Ok(x), Ok(y)) if x == y);
        vec![
            AssumptionCheck {
                name: "fiber-product",
                holds: sets_glue && dims_add,
                detail: format!(
                    "dim A0 = {}, dim B0 + dim C0 - dim D0 = {}",
                    self.a.degree0_dim(),
                    self.b.degree0_dim() + self.c.degree0_dim() - self.d.degree0_dim()
                ),
            },
            AssumptionCheck {
                name: "surjective-l0",
                holds: self.l.is_surjective() && self.g.is_surjective(),
                detail: format!("{s12} is contained in {s2}"),
            },
            AssumptionCheck {
                name: "flatness",
                // each factor of a product dga is a free module of rank one
                // over that factor and zero elsewhere, so every projection is flat
                holds: [&self.f, &self.g, &self.k, &self.l]
                    .iter()
                    .all(|m| m.target.patches.is_subset(&m.source.patches)),
                detail: "projections of product dgas are flat".into(),
            },
            AssumptionCheck {
                name: "base-change",
                holds: commutes,
                detail: "g o f and l o k agree as projections onto the intersection".into(),
            },
        ]
    }
}
