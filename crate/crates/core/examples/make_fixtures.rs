//! Regenerates the bundled example documents under `data/examples`.
//!
//! ```text
//! cargo run -p formal-dolbeault --example make_fixtures
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use formal_dolbeault::cli::{ConeInput, Cover, GlueInput, RoundtripInput};
use formal_dolbeault::coeff::MultiIndex;
use formal_dolbeault::cohesive::random::{koszul_module, SplitOptions};
use formal_dolbeault::cohesive::{CohesiveModule, FormMatrix, HomElement};
use formal_dolbeault::descent::{random_triple, random_union_module, DescentSquare, PatchSet};
use formal_dolbeault::gauge::io::save_field;
use formal_dolbeault::gauge::{DiscGrid, GaugeProblem, GridSpec, MatrixField, RhoTerm};
use formal_dolbeault::model::{ModelConfig, Space, TruncatedForm};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

fn write_json(dir: &Path, name: &str, value: &impl Serialize) {
    let mut text = serde_json::to_string_pretty(value).unwrap();
    text.push('\n');
    std::fs::write(dir.join(name), text).unwrap();
}

fn scalar_field(grid: &DiscGrid, f: impl Fn(Complex64) -> Complex64) -> MatrixField {
    MatrixField::scalar((0..grid.cells()).map(|c| f(grid.point(c))).collect())
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/examples");
    std::fs::create_dir_all(&dir).unwrap();
    let point = ModelConfig::point(1, 3);

    let trivial = CohesiveModule::free(point, 1, 0);
    write_json(&dir, "trivial.module.json", &trivial.to_doc());

    let koszul = Arc::new(koszul_module(&ModelConfig::point(2, 2)));
    write_json(&dir, "koszul.module.json", &koszul.to_doc());

    // [A --z1--> A --z1--> A]: the composite z1^2 survives at r = 3
    let z = TruncatedForm::z(point, Space::Quotient, 0);
    let zm = FormMatrix::from_rows(point, 1, 1, vec![vec![z]]).unwrap();
    let curved = CohesiveModule::new(
        point,
        BTreeMap::from([(-1, 1), (0, 1), (1, 1)]),
        [((0, -1), zm.clone()), ((0, 0), zm)],
    )
    .unwrap();
    write_json(&dir, "curved.module.json", &curved.to_doc());

    let id = HomElement::identity(koszul.clone());
    write_json(
        &dir,
        "cone.json",
        &ConeInput {
            source: koszul.to_doc(),
            target: koszul.to_doc(),
            map: id.to_doc(),
        },
    );

    let cover = Cover {
        s1: PatchSet::new([0, 1]),
        s2: PatchSet::new([1, 2]),
    };
    let config = ModelConfig::point(1, 2);
    let square = Arc::new(DescentSquare::new(cover.s1.clone(), cover.s2.clone(), config).unwrap());
    let opts = SplitOptions {
        max_rank: 2,
        lowest: 0,
        span: 1,
        require_free: true,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let triple = random_triple(&mut rng, &square, opts).unwrap();
    write_json(
        &dir,
        "glue.json",
        &GlueInput {
            cover: cover.clone(),
            triple: triple.to_doc(),
        },
    );
    let module = random_union_module(&mut rng, &square, opts).unwrap();
    write_json(
        &dir,
        "roundtrip.json",
        &RoundtripInput {
            cover,
            config,
            module: Some(module.to_doc()),
            samples: 3,
        },
    );

    // two normal directions, scalar coefficients
    let grid = DiscGrid::new(1.0, 128).unwrap();
    let terms: [(&[u32], &str, MatrixField); 3] = [
        (
            &[0, 0],
            "rho.0-0.gmf",
            scalar_field(&grid, |_| Complex64::new(0.3, 0.0)),
        ),
        (
            &[1, 0],
            "rho.1-0.gmf",
            scalar_field(&grid, |w| Complex64::new(0.2 * (-w.norm_sqr()).exp(), 0.0)),
        ),
        (
            &[0, 1],
            "rho.0-1.gmf",
            scalar_field(&grid, |w| 0.1 * w.conj()),
        ),
    ];
    let mut rho = Vec::new();
    for (index, name, field) in terms {
        save_field(&dir.join(name), grid.resolution(), &field).unwrap();
        rho.push(RhoTerm(MultiIndex::new(index.to_vec()), name.into()));
    }
    write_json(
        &dir,
        "gauge.json",
        &GaugeProblem {
            grid: GridSpec {
                radius: 1.0,
                resolution: 128,
            },
            rho,
            order: None,
            tol: None,
            max_iter: None,
            min_det: None,
        },
    );

    // |rho_0| = 1.5 on the unit disc: the fixed point does not contract
    let small = DiscGrid::new(1.0, 16).unwrap();
    save_field(
        &dir.join("strong.0.gmf"),
        16,
        &scalar_field(&small, |_| Complex64::new(1.5, 0.0)),
    )
    .unwrap();
    write_json(
        &dir,
        "gauge-strong.json",
        &GaugeProblem {
            grid: GridSpec {
                radius: 1.0,
                resolution: 16,
            },
            rho: vec![RhoTerm(MultiIndex::new(vec![0]), "strong.0.gmf".into())],
            order: None,
            tol: None,
            max_iter: None,
            min_det: None,
        },
    );
}
