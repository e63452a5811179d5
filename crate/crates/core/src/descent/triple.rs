use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::patch::{PatchHom, PatchModule, PatchModuleDoc};
use super::square::DescentSquare;
use crate::coeff::Scalar;
use crate::cohesive::{HomBasis, HomDoc, HomElement};
use crate::error::{Error, Result};
use crate::linalg::{CochainComplex, ComplexReport, SparseMatrix, SparseVec};

/// Object `(M, N, phi)` of the homotopy fiber product: `M` over `B`, `N`
/// over `C`, and a closed degree-0 map `phi: g^*M -> l^*N` over `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleObject {
    square: Arc<DescentSquare>,
    m: Arc<PatchModule>,
    n: Arc<PatchModule>,
    phi: PatchHom,
}

impl TripleObject {
    /// Assembles a triple, checking that every piece lives over the right
    /// dga. Validity of `phi` is checked by [`TripleObject::validate`].
    pub fn new(
        square: Arc<DescentSquare>,
        m: PatchModule,
        n: PatchModule,
        phi: PatchHom,
    ) -> Result<Self> {
        if *m.dga() != square.b || *n.dga() != square.c {
            return Err(Error::ModelMismatch(
                "triple modules must live over the cover sets".into(),
            ));
        }
        let gm = m.pullback(&square.g)?;
        let ln = n.pullback(&square.l)?;
        if phi.degree() != 0 {
            return Err(Error::WrongDegree {
                expected: 0,
                got: phi.degree(),
            });
        }
        if **phi.source() != gm || **phi.target() != ln {
            return Err(Error::ShapeMismatch("phi must map g^*M to l^*N".into()));
        }
        Ok(TripleObject {
            square,
            m: Arc::new(m),
            n: Arc::new(n),
            phi,
        })
    }

    pub fn square(&self) -> &Arc<DescentSquare> {
        &self.square
    }

    pub fn m(&self) -> &Arc<PatchModule> {
        &self.m
    }

    pub fn n(&self) -> &Arc<PatchModule> {
        &self.n
    }

    pub fn phi(&self) -> &PatchHom {
        &self.phi
    }

    /// `phi` is closed and a homotopy equivalence.
    pub fn validate(&self) -> Result<bool> {
        Ok(self.phi.is_closed()? && self.phi.is_homotopy_equivalence()?)
    }

    /// `(M[1], N[1], phi[1])`.
    pub fn shift(&self) -> Result<TripleObject> {
        let m = self.m.shift();
        let n = self.n.shift();
        let gm = Arc::new(m.pullback(&self.square.g)?);
        let ln = Arc::new(n.pullback(&self.square.l)?);
        let parts = self
            .phi
            .parts()
            .iter()
            .map(|(s, h)| {
                let shifted = HomElement::new(
                    gm.part(*s).clone(),
                    ln.part(*s).clone(),
                    0,
                    h.components()
                        .iter()
                        .map(|(&(j, p), mat)| ((j, p - 1), mat.clone())),
                )?;
                Ok((*s, shifted))
            })
            .collect::<Result<_>>()?;
        let phi = PatchHom::new(gm, ln, 0, parts)?;
        TripleObject::new(self.square.clone(), m, n, phi)
    }

    pub fn to_doc(&self) -> TripleDoc {
        TripleDoc {
            m: self.m.to_doc(),
            n: self.n.to_doc(),
            phi: self
                .phi
                .parts()
                .iter()
                .map(|(s, h)| (*s, h.to_doc()))
                .collect(),
        }
    }

    pub fn from_doc(square: Arc<DescentSquare>, doc: &TripleDoc) -> Result<Self> {
        let m = PatchModule::from_doc(&doc.m)?;
        let n = PatchModule::from_doc(&doc.n)?;
        let gm = Arc::new(m.pullback(&square.g)?);
        let ln = Arc::new(n.pullback(&square.l)?);
        let mut parts = BTreeMap::new();
        for &s in square.intersection().ids() {
            let h = doc
                .phi
                .get(&s)
                .ok_or_else(|| Error::Invalid(format!("phi has no component on patch {s}")))?;
            parts.insert(
                s,
                HomElement::from_doc(h, gm.part(s).clone(), ln.part(s).clone())?,
            );
        }
        let phi = PatchHom::new(gm, ln, 0, parts)?;
        TripleObject::new(square, m, n, phi)
    }
}

/// Wire form of a triple: `{M, N, phi: {patch: hom}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TripleDoc {
    #[serde(rename = "M")]
    pub m: PatchModuleDoc,
    #[serde(rename = "N")]
    pub n: PatchModuleDoc,
    pub phi: BTreeMap<u32, HomDoc>,
}

/// Morphism `(mu, nu, gamma)` of degree `i` between triples: `mu` of degree
/// `i` over `B`, `nu` of degree `i` over `C`, and `gamma: g^*M1 -> l^*N2` of
/// degree `i - 1` over `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleMorphism {
    source: Arc<TripleObject>,
    target: Arc<TripleObject>,
    degree: i32,
    pub mu: PatchHom,
    pub nu: PatchHom,
    pub gamma: PatchHom,
}

fn sign(e: i32) -> Scalar {
    if e.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        Scalar::from_int(-1)
    }
}

impl TripleMorphism {
    pub fn new(
        source: Arc<TripleObject>,
        target: Arc<TripleObject>,
        degree: i32,
        mu: PatchHom,
        nu: PatchHom,
        gamma: PatchHom,
    ) -> Result<Self> {
        if source.square != target.square {
            return Err(Error::ShapeMismatch(
                "triples over different squares".into(),
            ));
        }
        let square = &source.square;
        let endpoints_ok = mu.degree() == degree
            && nu.degree() == degree
            && gamma.degree() == degree - 1
            && *mu.source() == source.m
            && *mu.target() == target.m
            && *nu.source() == source.n
            && *nu.target() == target.n
            && *gamma.source() == *source.phi.source()
            && *gamma.target() == *target.phi.target();
        if !endpoints_ok {
            return Err(Error::ShapeMismatch(
                "triple morphism components have the wrong endpoints or degrees".into(),
            ));
        }
        debug_assert_eq!(*gamma.source().dga(), square.d);
        Ok(TripleMorphism {
            source,
            target,
            degree,
            mu,
            nu,
            gamma,
        })
    }

    pub fn zero(source: Arc<TripleObject>, target: Arc<TripleObject>, degree: i32) -> Result<Self> {
        let mu = PatchHom::zero(source.m.clone(), target.m.clone(), degree)?;
        let nu = PatchHom::zero(source.n.clone(), target.n.clone(), degree)?;
        let gamma = PatchHom::zero(
            source.phi.source().clone(),
            target.phi.target().clone(),
            degree - 1,
        )?;
        TripleMorphism::new(source, target, degree, mu, nu, gamma)
    }

    pub fn identity(object: Arc<TripleObject>) -> Result<Self> {
        let mu = PatchHom::identity(object.m.clone());
        let nu = PatchHom::identity(object.n.clone());
        let gamma = PatchHom::zero(object.phi.source().clone(), object.phi.target().clone(), -1)?;
        TripleMorphism::new(object.clone(), object, 0, mu, nu, gamma)
    }

    pub fn source(&self) -> &Arc<TripleObject> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TripleObject> {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.mu.is_zero() && self.nu.is_zero() && self.gamma.is_zero()
    }

    /// `G(mu) = g^* mu` with endpoints identified with the triples' `g^*M`.
    fn g_of_mu(&self, mu: &PatchHom) -> Result<PatchHom> {
        mu.pullback(&self.source.square.g)?.with_endpoints(
            self.source.phi.source().clone(),
            self.target.phi.source().clone(),
        )
    }

    fn l_of_nu(&self, nu: &PatchHom) -> Result<PatchHom> {
        nu.pullback(&self.source.square.l)?.with_endpoints(
            self.source.phi.target().clone(),
            self.target.phi.target().clone(),
        )
    }

    pub fn add(&self, other: &TripleMorphism) -> Result<TripleMorphism> {
        TripleMorphism::new(
            self.source.clone(),
            self.target.clone(),
            self.degree,
            self.mu.add(&other.mu)?,
            self.nu.add(&other.nu)?,
            self.gamma.add(&other.gamma)?,
        )
    }

    pub fn scale(&self, s: &Scalar) -> TripleMorphism {
        TripleMorphism {
            mu: self.mu.scale(s),
            nu: self.nu.scale(s),
            gamma: self.gamma.scale(s),
            ..self.clone()
        }
    }
}

/// `d(mu, nu, gamma) = (d mu, d nu, d gamma + (-1)^i (phi2 G(mu) - L(nu) phi1))`.
pub fn triple_differential(t: &TripleMorphism) -> Result<TripleMorphism> {
    let i = t.degree;
    let phi1 = &t.source.phi;
    let phi2 = &t.target.phi;
    let correction = phi2
        .compose(&t.g_of_mu(&t.mu)?)?
        .sub(&t.l_of_nu(&t.nu)?.compose(phi1)?)?;
    TripleMorphism::new(
        t.source.clone(),
        t.target.clone(),
        i + 1,
        t.mu.differential()?,
        t.nu.differential()?,
        t.gamma.differential()?.add(&correction.scale(&sign(i)))?,
    )
}

/// `(mu' mu, nu' nu, (-1)^|mu| gamma' G(mu) + L(nu') gamma)`.
pub fn triple_compose(t2: &TripleMorphism, t1: &TripleMorphism) -> Result<TripleMorphism> {
    if t1.target != t2.source {
        return Err(Error::ShapeMismatch(
            "composition of non-composable triple morphisms".into(),
        ));
    }
    let gamma = t2
        .gamma
        .compose(&t1.g_of_mu(&t1.mu)?)?
        .scale(&sign(t1.degree))
        .add(&t2.l_of_nu(&t2.nu)?.compose(&t1.gamma)?)?;
    TripleMorphism::new(
        t1.source.clone(),
        t2.target.clone(),
        t1.degree + t2.degree,
        t2.mu.compose(&t1.mu)?,
        t2.nu.compose(&t1.nu)?,
        gamma,
    )
}

/// A closed degree-0 triple morphism is a homotopy equivalence iff `mu` and
/// `nu` are.
pub fn triple_is_homotopy_equivalence(t: &TripleMorphism) -> Result<bool> {
    if t.degree != 0 {
        return Err(Error::WrongDegree {
            expected: 0,
            got: t.degree,
        });
    }
    if !triple_differential(t)?.is_zero() {
        return Err(Error::NotClosed);
    }
    Ok(t.mu.is_homotopy_equivalence()? && t.nu.is_homotopy_equivalence()?)
}

enum Slot {
    Mu(u32),
    Nu(u32),
    Gamma(u32),
}

struct TripleBasis {
    blocks: Vec<(Slot, HomBasis, usize)>,
    len: usize,
}

impl TripleBasis {
    fn new(t1: &TripleObject, t2: &TripleObject, degree: i32) -> Self {
        let mut blocks = Vec::new();
        let mut len = 0;
        let mut push = |slot: Slot, basis: HomBasis| {
            let n = basis.len();
            blocks.push((slot, basis, len));
            len += n;
        };
        for (&s, m) in t1.m.parts() {
            push(
                Slot::Mu(s),
                HomBasis::new(m.clone(), t2.m.part(s).clone(), degree),
            );
        }
        for (&s, n) in t1.n.parts() {
            push(
                Slot::Nu(s),
                HomBasis::new(n.clone(), t2.n.part(s).clone(), degree),
            );
        }
        for (&s, gm) in t1.phi.source().parts() {
            push(
                Slot::Gamma(s),
                HomBasis::new(gm.clone(), t2.phi.target().part(s).clone(), degree - 1),
            );
        }
        TripleBasis { blocks, len }
    }

    fn element(
        &self,
        t1: &Arc<TripleObject>,
        t2: &Arc<TripleObject>,
        degree: i32,
        idx: usize,
    ) -> Result<TripleMorphism> {
        let mut t = TripleMorphism::zero(t1.clone(), t2.clone(), degree)?;
        let (slot, basis, off) = self
            .blocks
            .iter()
            .rev()
            .find(|(_, _, off)| *off <= idx)
            .expect("index in range");
        let e = basis.element(idx - off);
        let replace = |h: &PatchHom, s: u32| -> Result<PatchHom> {
            let mut parts = h.parts().clone();
            parts.insert(s, e.clone());
            PatchHom::new(h.source().clone(), h.target().clone(), h.degree(), parts)
        };
        match slot {
            Slot::Mu(s) => t.mu = replace(&t.mu, *s)?,
            Slot::Nu(s) => t.nu = replace(&t.nu, *s)?,
            Slot::Gamma(s) => t.gamma = replace(&t.gamma, *s)?,
        }
        Ok(t)
    }

    fn coordinates(&self, t: &TripleMorphism) -> Result<SparseVec> {
        let mut pairs = Vec::new();
        for (slot, basis, off) in &self.blocks {
            let h = match slot {
                Slot::Mu(s) => t.mu.part(*s),
                Slot::Nu(s) => t.nu.part(*s),
                Slot::Gamma(s) => t.gamma.part(*s),
            };
            pairs.extend(
                basis
                    .coordinates(h)?
                    .entries()
                    .iter()
                    .map(|(i, c)| (off + i, c.clone())),
            );
        }
        Ok(SparseVec::from_pairs(pairs))
    }
}

/// The fiber-product hom complex between two triples as a finite cochain
/// complex over Q(i). Requires the exact backend.
pub fn triple_hom_complex(
    t1: &Arc<TripleObject>,
    t2: &Arc<TripleObject>,
) -> Result<CochainComplex> {
    if !t1.square.a.config.is_exact() {
        return Err(Error::InfiniteDimensionalBackend);
    }
    let degrees = |m: &PatchModule| -> Vec<i32> {
        m.parts()
            .values()
            .flat_map(|x| x.ranks().keys().copied())
            .collect()
    };
    let src: Vec<i32> = degrees(&t1.m).into_iter().chain(degrees(&t1.n)).collect();
    let dst: Vec<i32> = degrees(&t2.m).into_iter().chain(degrees(&t2.n)).collect();
    let mut complex = CochainComplex::new();
    let (Some(&s_lo), Some(&s_hi), Some(&d_lo), Some(&d_hi)) = (
        src.iter().min(),
        src.iter().max(),
        dst.iter().min(),
        dst.iter().max(),
    ) else {
        return Ok(complex);
    };
    let (lo, hi) = (d_lo - s_hi, d_hi - s_lo + 1);
    let bases: BTreeMap<i32, TripleBasis> = (lo..=hi)
        .map(|k| (k, TripleBasis::new(t1, t2, k)))
        .collect();
    for k in lo..=hi {
        complex.set_space(k, bases[&k].len);
    }
    for k in lo..hi {
        let (src_b, dst_b) = (&bases[&k], &bases[&(k + 1)]);
        let cols = (0..src_b.len)
            .map(|idx| dst_b.coordinates(&triple_differential(&src_b.element(t1, t2, k, idx)?)?))
            .collect::<Result<Vec<_>>>()?;
        complex.set_differential(k, SparseMatrix::from_columns(dst_b.len, cols)?)?;
    }
    Ok(complex)
}

pub fn triple_ext_dims(t1: &Arc<TripleObject>, t2: &Arc<TripleObject>) -> Result<ComplexReport> {
    Ok(triple_hom_complex(t1, t2)?.report())
}
