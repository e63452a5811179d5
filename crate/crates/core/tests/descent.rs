use std::collections::BTreeMap;
use std::sync::Arc;

use formal_dolbeault::cohesive::random::{random_hom_with_budget, SplitOptions};
use formal_dolbeault::cohesive::{CohesiveModule, FormMatrix, HomElement};
use formal_dolbeault::descent::{
    counit, glue, patch_ext_dims, random_triple, random_union_module, restrict, triple_compose,
    triple_differential, triple_ext_dims, triple_is_homotopy_equivalence, unit, DescentSquare,
    PatchHom, PatchModule, PatchSet, TripleDoc, TripleMorphism, TripleObject,
};
use formal_dolbeault::model::ModelConfig;
use formal_dolbeault::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn square(config: ModelConfig) -> Arc<DescentSquare> {
    Arc::new(DescentSquare::new(PatchSet::new([0, 1]), PatchSet::new([1, 2]), config).unwrap())
}

fn small() -> SplitOptions {
    SplitOptions {
        max_rank: 2,
        lowest: 0,
        span: 1,
        require_free: false,
    }
}

fn random_patch_hom(
    rng: &mut ChaCha8Rng,
    source: &Arc<PatchModule>,
    target: &Arc<PatchModule>,
    degree: i32,
    budget: u32,
) -> PatchHom {
    let parts = source
        .parts()
        .iter()
        .map(|(s, m)| {
            (
                *s,
                random_hom_with_budget(rng, m, target.part(*s), degree, budget).unwrap(),
            )
        })
        .collect();
    PatchHom::new(source.clone(), target.clone(), degree, parts).unwrap()
}

fn random_morphism(
    rng: &mut ChaCha8Rng,
    t1: &Arc<TripleObject>,
    t2: &Arc<TripleObject>,
    degree: i32,
    budget: u32,
) -> TripleMorphism {
    TripleMorphism::new(
        t1.clone(),
        t2.clone(),
        degree,
        random_patch_hom(rng, t1.m(), t2.m(), degree, budget),
        random_patch_hom(rng, t1.n(), t2.n(), degree, budget),
        random_patch_hom(
            rng,
            t1.phi().source(),
            t2.phi().target(),
            degree - 1,
            budget,
        ),
    )
    .unwrap()
}

#[test]
fn two_set_cover_satisfies_all_conditions() {
    for cfg in [ModelConfig::point(1, 2), ModelConfig::disc(1, 1, 2)] {
        let sq = square(cfg);
        let checks = sq.check_assumptions();
        assert_eq!(checks.len(), 4);
        assert!(checks.iter().all(|c| c.holds), "{checks:?}");
        assert_eq!(sq.union(), &PatchSet::new([0, 1, 2]));
        assert_eq!(sq.intersection(), &PatchSet::new([1]));
    }
}

#[test]
fn disjoint_cover_has_empty_overlap() {
    let sq = DescentSquare::new(
        PatchSet::new([0]),
        PatchSet::new([3]),
        ModelConfig::point(1, 1),
    )
    .unwrap();
    assert!(sq.intersection().is_empty());
    assert!(DescentSquare::new(
        PatchSet::new([]),
        PatchSet::new([3]),
        ModelConfig::point(1, 1)
    )
    .is_err());
}

#[test]
fn random_triples_are_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for cfg in [ModelConfig::point(1, 2), ModelConfig::disc(1, 1, 2)] {
        let sq = square(cfg);
        for _ in 0..4 {
            let t = random_triple(&mut rng, &sq, small()).unwrap();
            assert!(t.validate().unwrap());
            assert!(t.m().check_integrability().unwrap());
            assert!(t.n().check_integrability().unwrap());
        }
    }
}

#[test]
fn triple_differential_squares_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (cfg, budget) in [
        (ModelConfig::point(1, 2), 0),
        (ModelConfig::disc(1, 1, 4), 1),
    ] {
        let sq = square(cfg);
        for _ in 0..3 {
            let t1 = Arc::new(random_triple(&mut rng, &sq, small()).unwrap());
            let t2 = Arc::new(random_triple(&mut rng, &sq, small()).unwrap());
            let degree = rng.gen_range(-1..=1);
            let x = random_morphism(&mut rng, &t1, &t2, degree, budget);
            let dd = triple_differential(&triple_differential(&x).unwrap()).unwrap();
            assert!(dd.is_zero());
        }
    }
}

#[test]
fn triple_differential_is_a_derivation() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let sq = square(ModelConfig::point(1, 2));
    for _ in 0..3 {
        let ts: Vec<_> = (0..3)
            .map(|_| Arc::new(random_triple(&mut rng, &sq, small()).unwrap()))
            .collect();
        let (a, b) = (rng.gen_range(-1..=1), rng.gen_range(-1..=1));
        let x = random_morphism(&mut rng, &ts[0], &ts[1], a, 0);
        let y = random_morphism(&mut rng, &ts[1], &ts[2], b, 0);
        let lhs = triple_differential(&triple_compose(&y, &x).unwrap()).unwrap();
        let sign = if b % 2 == 0 { 1 } else { -1 };
        let rhs = triple_compose(&triple_differential(&y).unwrap(), &x)
            .unwrap()
            .add(
                &triple_compose(&y, &triple_differential(&x).unwrap())
                    .unwrap()
                    .scale(&sign.into()),
            )
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn triple_composition_is_associative_with_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let sq = square(ModelConfig::point(1, 2));
    let ts: Vec<_> = (0..4)
        .map(|_| Arc::new(random_triple(&mut rng, &sq, small()).unwrap()))
        .collect();
    let x = random_morphism(&mut rng, &ts[0], &ts[1], 1, 0);
    let y = random_morphism(&mut rng, &ts[1], &ts[2], -1, 0);
    let z = random_morphism(&mut rng, &ts[2], &ts[3], 0, 0);
    let left = triple_compose(&z, &triple_compose(&y, &x).unwrap()).unwrap();
    let right = triple_compose(&triple_compose(&z, &y).unwrap(), &x).unwrap();
    assert_eq!(left, right);
    let id = TripleMorphism::identity(ts[1].clone()).unwrap();
    assert_eq!(triple_compose(&id, &x).unwrap(), x);
    assert!(triple_differential(&id).unwrap().is_zero());
}

#[test]
fn glue_after_restrict_recovers_the_module() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for cfg in [ModelConfig::point(1, 2), ModelConfig::disc(1, 1, 2)] {
        let sq = square(cfg);
        for _ in 0..3 {
            let s = random_union_module(&mut rng, &sq, small()).unwrap();
            let eta = unit(&sq, &s).unwrap();
            assert!(eta.is_closed().unwrap());
            assert!(eta.is_homotopy_equivalence().unwrap());
            assert!(eta.target().check_integrability().unwrap());
        }
    }
}

#[test]
fn restrict_after_glue_recovers_the_triple() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for cfg in [ModelConfig::point(1, 2), ModelConfig::disc(1, 1, 2)] {
        let sq = square(cfg);
        for _ in 0..3 {
            let t = Arc::new(random_triple(&mut rng, &sq, small()).unwrap());
            let glued = glue(&t).unwrap();
            assert!(glued.check_integrability().unwrap());
            let eps = counit(&t).unwrap();
            assert!(triple_differential(&eps).unwrap().is_zero());
            assert!(triple_is_homotopy_equivalence(&eps).unwrap());
        }
    }
}

#[test]
fn glue_rejects_non_equivalences() {
    let cfg = ModelConfig::point(1, 2);
    let sq = square(cfg);
    let free = CohesiveModule::free(cfg, 1, 0);
    let m = PatchModule::uniform(sq.b.clone(), &free).unwrap();
    let n = PatchModule::uniform(sq.c.clone(), &free).unwrap();
    let gm = Arc::new(m.pullback(&sq.g).unwrap());
    let ln = Arc::new(n.pullback(&sq.l).unwrap());
    let zero = PatchHom::zero(gm, ln, 0).unwrap();
    let t = TripleObject::new(sq.clone(), m, n, zero).unwrap();
    assert!(!t.validate().unwrap());
    assert_eq!(glue(&t), Err(Error::NotHomotopyEquivalence));
}

#[test]
fn triple_morphism_checks_degree_and_closedness() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let sq = square(ModelConfig::point(1, 2));
    let t = Arc::new(random_triple(&mut rng, &sq, small()).unwrap());
    let x = random_morphism(&mut rng, &t, &t, 1, 0);
    assert!(matches!(
        triple_is_homotopy_equivalence(&x),
        Err(Error::WrongDegree {
            expected: 0,
            got: 1
        })
    ));
    // a degree-0 morphism with a nonzero homotopy but identity maps is not closed
    let id = TripleMorphism::identity(t.clone()).unwrap();
    let mut bent = id.clone();
    bent.mu = id.mu.scale(&2.into());
    if !triple_differential(&bent).unwrap().is_zero() {
        assert_eq!(triple_is_homotopy_equivalence(&bent), Err(Error::NotClosed));
    }
}

#[test]
fn restriction_is_fully_faithful() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let sq = square(ModelConfig::point(1, 2));
    for _ in 0..3 {
        let s = random_union_module(&mut rng, &sq, small()).unwrap();
        let t = random_union_module(&mut rng, &sq, small()).unwrap();
        let rs = Arc::new(restrict(&sq, &s).unwrap());
        let rt = Arc::new(restrict(&sq, &t).unwrap());
        let over_union = patch_ext_dims(&s, &t).unwrap();
        let over_triples = triple_ext_dims(&rs, &rt).unwrap();
        assert_eq!(
            over_union
                .cohomology_dims()
                .into_iter()
                .filter(|(_, d)| *d > 0)
                .collect::<BTreeMap<_, _>>(),
            over_triples
                .cohomology_dims()
                .into_iter()
                .filter(|(_, d)| *d > 0)
                .collect::<BTreeMap<_, _>>()
        );
    }
}

#[test]
fn gluing_is_fully_faithful() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let sq = square(ModelConfig::point(1, 2));
    for _ in 0..2 {
        let t1 = Arc::new(random_triple(&mut rng, &sq, small()).unwrap());
        let t2 = Arc::new(random_triple(&mut rng, &sq, small()).unwrap());
        let glued = patch_ext_dims(&glue(&t1).unwrap(), &glue(&t2).unwrap()).unwrap();
        let triples = triple_ext_dims(&t1, &t2).unwrap();
        let nonzero = |r: &formal_dolbeault::linalg::ComplexReport| {
            r.cohomology_dims()
                .into_iter()
                .filter(|(_, d)| *d > 0)
                .collect::<BTreeMap<_, _>>()
        };
        assert_eq!(nonzero(&glued), nonzero(&triples));
    }
}

#[test]
fn triple_ext_refuses_the_disc_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let sq = square(ModelConfig::disc(1, 1, 2));
    let t = Arc::new(random_triple(&mut rng, &sq, small()).unwrap());
    assert_eq!(
        triple_ext_dims(&t, &t),
        Err(Error::InfiniteDimensionalBackend)
    );
}

#[test]
fn triple_documents_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let sq = square(ModelConfig::disc(1, 1, 2));
    let t = random_triple(&mut rng, &sq, small()).unwrap();
    let json = serde_json::to_string(&t.to_doc()).unwrap();
    let doc: TripleDoc = serde_json::from_str(&json).unwrap();
    assert_eq!(TripleObject::from_doc(sq, &doc).unwrap(), t);
}

#[test]
fn pullback_of_a_hom_restricts_each_patch() {
    let cfg = ModelConfig::point(1, 1);
    let sq = square(cfg);
    let free = CohesiveModule::free(cfg, 1, 0);
    let s = Arc::new(PatchModule::uniform(sq.a.clone(), &free).unwrap());
    let two = FormMatrix::scalar_identity(cfg, 1, &2.into());
    let parts = s
        .parts()
        .iter()
        .map(|(id, m)| {
            (
                *id,
                HomElement::new(m.clone(), m.clone(), 0, [((0, 0), two.clone())]).unwrap(),
            )
        })
        .collect();
    let h = PatchHom::new(s.clone(), s, 0, parts).unwrap();
    let on_s1 = h.pullback(&sq.f).unwrap();
    assert_eq!(
        on_s1.parts().keys().copied().collect::<Vec<_>>(),
        vec![0, 1]
    );
    assert_eq!(
        on_s1.pullback(&sq.g).unwrap(),
        h.pullback(&sq.f.then(&sq.g).unwrap()).unwrap()
    );
}
