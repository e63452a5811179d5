//! Restriction to the cover and gluing back.
//!
//! On the overlap the glued module is the shifted cone of
//! `[phi, -id]: M (+) N -> N`, whose generators in degree `p` are ordered
//! `N^(p-1), M^p, N^p`. Away from the overlap it is `M` or `N` unchanged.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use super::patch::{PatchHom, PatchModule};
use super::square::DescentSquare;
use super::triple::{TripleMorphism, TripleObject};
use crate::cohesive::random::{random_gauge, random_split_module, SplitOptions};
use crate::cohesive::{cone, CohesiveModule, FormMatrix, HomElement};
use crate::error::{Error, Result};

/// `R(S) = (f^*S, k^*S, id)`.
pub fn restrict(square: &Arc<DescentSquare>, s: &PatchModule) -> Result<TripleObject> {
    if *s.dga() != square.a {
        return Err(Error::ModelMismatch(
            "module does not live over the union".into(),
        ));
    }
    let m = s.pullback(&square.f)?;
    let n = s.pullback(&square.k)?;
    let overlap = Arc::new(s.pullback(&square.f.then(&square.g)?)?);
    let phi = PatchHom::identity(overlap);
    TripleObject::new(square.clone(), m, n, phi)
}

fn overlap_part(t: &TripleObject, s: u32) -> Result<CohesiveModule> {
    let (m, n) = (t.m().part(s), t.n().part(s));
    let phi = t.phi().part(s);
    let config = *m.config();
    let sum = Arc::new(m.direct_sum(n)?);
    let mut components = Vec::new();
    for (&(j, p), block) in phi.components() {
        let rows = n.rank(p - j as i32);
        let mut mat = FormMatrix::zeros(config, rows, sum.rank(p));
        mat.set_block(0, 0, block);
        components.push(((j, p), mat));
    }
    for (&p, &r) in n.ranks() {
        let mut mat = FormMatrix::zeros(config, r, sum.rank(p));
        mat.set_block(0, m.rank(p), &FormMatrix::identity(config, r).neg());
        components.push(((0, p), mat));
    }
    let lambda = HomElement::new(sum, n.clone(), 0, components)?;
    Ok(cone(&lambda)?.shift_by(-1))
}

/// The glued module over the union. Fails with
/// [`Error::NotHomotopyEquivalence`] unless `phi` is a closed homotopy
/// equivalence.
pub fn glue(t: &TripleObject) -> Result<PatchModule> {
    if !t.validate()? {
        return Err(Error::NotHomotopyEquivalence);
    }
    let square = t.square();
    let mut parts = BTreeMap::new();
    for &s in square.union().ids() {
        let part = match (square.s1().contains(s), square.s2().contains(s)) {
            (true, true) => overlap_part(t, s)?,
            (true, false) => (**t.m().part(s)).clone(),
            (false, true) => (**t.n().part(s)).clone(),
            (false, false) => unreachable!("patch outside the cover"),
        };
        parts.insert(s, part);
    }
    PatchModule::new(square.a.clone(), parts)
}

/// Unit `S -> glue(restrict(S))`: `(0, id, id)` into `N[-1] (+) M (+) N` on
/// the overlap, the identity elsewhere.
pub fn unit(square: &Arc<DescentSquare>, s: &PatchModule) -> Result<PatchHom> {
    let glued = Arc::new(glue(&restrict(square, s)?)?);
    let source = Arc::new(s.clone());
    let mut parts = BTreeMap::new();
    for (&id, part) in s.parts() {
        let target = glued.part(id).clone();
        let h = if square.intersection().contains(id) {
            let config = *part.config();
            let comps: Vec<_> = part
                .ranks()
                .iter()
                .map(|(&p, &r)| {
                    let mut mat = FormMatrix::zeros(config, target.rank(p), r);
                    let id_r = FormMatrix::identity(config, r);
                    let below = part.rank(p - 1);
                    mat.set_block(below, 0, &id_r);
                    mat.set_block(below + r, 0, &id_r);
                    ((0, p), mat)
                })
                .collect();
            HomElement::new(part.clone(), target, 0, comps)?
        } else {
            HomElement::identity(part.clone()).with_endpoints(part.clone(), target)?
        };
        parts.insert(id, h);
    }
    PatchHom::new(source, glued, 0, parts)
}

/// Counit `restrict(glue(t)) -> t`: projections onto `M` and `N`, with the
/// homotopy `gamma` projecting onto the shifted copy of `N` on the overlap.
pub fn counit(t: &Arc<TripleObject>) -> Result<TripleMorphism> {
    let square = t.square();
    let glued = glue(t)?;
    let source = Arc::new(restrict(square, &glued)?);
    let config = square.a.config;

    let project =
        |from: &Arc<PatchModule>, to: &Arc<PatchModule>, pick: Pick| -> Result<PatchHom> {
            let mut parts = BTreeMap::new();
            for (&id, x) in from.parts() {
                let y = to.part(id).clone();
                let h = if square.intersection().contains(id) {
                    let (m, n) = (t.m().part(id), t.n().part(id));
                    let degree = if matches!(pick, Pick::Shifted) { -1 } else { 0 };
                    let comps: Vec<_> = y
                        .ranks()
                        .iter()
                        .map(|(&p, &r)| {
                            let q = p - degree;
                            let offset = match pick {
                                Pick::Shifted => 0,
                                Pick::M => n.rank(q - 1),
                                Pick::N => n.rank(q - 1) + m.rank(q),
                            };
                            let mut mat = FormMatrix::zeros(config, r, x.rank(q));
                            mat.set_block(0, offset, &FormMatrix::identity(config, r));
                            ((0, q), mat)
                        })
                        .collect();
                    HomElement::new(x.clone(), y, degree, comps)?
                } else {
                    HomElement::identity(x.clone()).with_endpoints(x.clone(), y)?
                };
                parts.insert(id, h);
            }
            PatchHom::new(
                from.clone(),
                to.clone(),
                if matches!(pick, Pick::Shifted) { -1 } else { 0 },
                parts,
            )
        };

    let mu = project(source.m(), t.m(), Pick::M)?;
    let nu = project(source.n(), t.n(), Pick::N)?;
    let gamma = project(source.phi().source(), t.phi().target(), Pick::Shifted)?;
    TripleMorphism::new(source, t.clone(), 0, mu, nu, gamma)
}

#[derive(Clone, Copy)]
enum Pick {
    M,
    N,
    Shifted,
}

/// Random module over the union: an independent random module on each
/// patch.
pub fn random_union_module<R: Rng + ?Sized>(
    rng: &mut R,
    square: &DescentSquare,
    opts: SplitOptions,
) -> Result<PatchModule> {
    let config = square.a.config;
    let parts = square
        .union()
        .ids()
        .iter()
        .map(|&s| {
            let split = random_split_module(rng, &config, opts);
            Ok((s, random_gauge(rng, &split)?.0))
        })
        .collect::<Result<_>>()?;
    PatchModule::new(square.a.clone(), parts)
}

/// Random valid triple. On the overlap `N` is a gauge conjugate of a split
/// module `M0`, `M = M0 (+) Cone(id_T)` for a random split `T`, and
/// `phi = [g, 0]` with `g` the gauge.
pub fn random_triple<R: Rng + ?Sized>(
    rng: &mut R,
    square: &Arc<DescentSquare>,
    opts: SplitOptions,
) -> Result<TripleObject> {
    let config = square.a.config;
    let mut m_parts = BTreeMap::new();
    let mut n_parts = BTreeMap::new();
    let mut gauges = BTreeMap::new();
    for &s in square.union().ids() {
        let in1 = square.s1().contains(s);
        let in2 = square.s2().contains(s);
        if in1 && in2 {
            let m0 = random_split_module(rng, &config, opts);
            let (n, g) = random_gauge(rng, &m0)?;
            let t = Arc::new(random_split_module(rng, &config, opts));
            let contractible = cone(&HomElement::identity(t))?;
            let m = m0.direct_sum(&contractible)?;
            m_parts.insert(s, m);
            n_parts.insert(s, n);
            gauges.insert(s, g);
        } else {
            let module = random_split_module(rng, &config, opts);
            let module = random_gauge(rng, &module)?.0;
            if in1 {
                m_parts.insert(s, module);
            } else {
                n_parts.insert(s, module);
            }
        }
    }
    let m = PatchModule::new(square.b.clone(), m_parts)?;
    let n = PatchModule::new(square.c.clone(), n_parts)?;
    let gm = Arc::new(m.pullback(&square.g)?);
    let ln = Arc::new(n.pullback(&square.l)?);
    let mut parts = BTreeMap::new();
    for (s, g) in gauges {
        let (src, dst) = (gm.part(s).clone(), ln.part(s).clone());
        let comps: Vec<_> = g
            .components()
            .iter()
            .map(|(&(j, p), block)| {
                let mut mat = FormMatrix::zeros(config, dst.rank(p - j as i32), src.rank(p));
                mat.set_block(0, 0, block);
                ((j, p), mat)
            })
            .collect();
        parts.insert(s, HomElement::new(src, dst, 0, comps)?);
    }
    let phi = PatchHom::new(gm, ln, 0, parts)?;
    TripleObject::new(square.clone(), m, n, phi)
}
