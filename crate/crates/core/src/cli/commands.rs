use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::inputs::{read_json, ConeInput, GlueInput, RoundtripInput, SolutionDoc};
use super::report::{Check, Report};
use super::{Args, Verb, DEFAULT_RESIDUAL_TOL};
use crate::cohesive::random::SplitOptions;
use crate::cohesive::{
    cone, ext_dims, hom_complex, is_homotopy_equivalence, CohesiveModule, HomElement, ModuleDoc,
};
use crate::descent::{
    counit, glue, random_triple, random_union_module, restrict, triple_is_homotopy_equivalence,
    unit, DescentSquare, PatchModule, TripleObject,
};
use crate::error::{Error, Result};
use crate::gauge::io::{load_field, save_field};
use crate::gauge::{
    gauge_family, verify_gauge, DiscGrid, GaugeProblem, GridMatrixFn, OrderResidual, RhoTerm,
};
use crate::linalg::ComplexReport;

pub(super) fn dispatch(args: &Args, report: &mut Report) -> Result<()> {
    match args.verb {
        Verb::Validate => validate(args, report),
        Verb::Ext => ext(args, report),
        Verb::Cone => cone_cmd(args, report),
        Verb::Glue => glue_cmd(args, report),
        Verb::Roundtrip => roundtrip(args, report),
        Verb::GaugeSolve => gauge_solve(args, report),
        Verb::GaugeVerify => gauge_verify(args, report),
    }
}

fn inputs(args: &Args, min: usize, max: usize) -> Result<&[PathBuf]> {
    let n = args.inputs.len();
    if n < min || n > max {
        let expected = if min == max {
            format!("{min}")
        } else {
            format!("{min} to {max}")
        };
        return Err(Error::Invalid(format!(
            "{} takes {expected} --input document(s), got {n}",
            args.verb.name()
        )));
    }
    Ok(&args.inputs)
}

fn load_module(path: &Path) -> Result<CohesiveModule> {
    CohesiveModule::from_doc(&read_json::<ModuleDoc>(path)?)
}

fn complex_summary(r: &ComplexReport) -> Value {
    json!({
        "cohomology": r.cohomology_dims(),
        "euler_characteristic": r.euler_characteristic,
        "euler_cohomology": r.euler_cohomology,
        "degrees": r.degrees,
    })
}

fn validate(args: &Args, report: &mut Report) -> Result<()> {
    let module = load_module(&inputs(args, 1, 1)?[0])?;
    report.config = json!(module.config());
    report.push(Check::exact(
        "leibniz",
        module.check_leibniz(),
        module.check_leibniz(),
    ));
    let flat = module.check_integrability()?;
    report.push(Check::exact("integrability", flat, flat));
    let underlying = module.underlying_complex()?;
    let is_complex = underlying.is_complex();
    report.push(Check::exact("underlying-d2", is_complex, is_complex));
    report.results = json!({
        "ranks": module.ranks(),
        "total_rank": module.total_rank(),
        "underlying": if is_complex { complex_summary(&underlying.report()) } else { Value::Null },
    });
    Ok(())
}

fn ext(args: &Args, report: &mut Report) -> Result<()> {
    let paths = inputs(args, 1, 2)?;
    let e = Arc::new(load_module(&paths[0])?);
    let f = match paths.get(1) {
        Some(p) => Arc::new(load_module(p)?),
        None => e.clone(),
    };
    report.config = json!(e.config());
    let complex = hom_complex(&e, &f)?;
    report.push(Check::exact(
        "hom-d2",
        complex.is_complex(),
        complex.is_complex(),
    ));
    let dims = ext_dims(&e, &f)?;
    report.push(Check::exact(
        "euler-consistency",
        dims.euler_characteristic == dims.euler_cohomology,
        [dims.euler_characteristic, dims.euler_cohomology],
    ));
    report.results = complex_summary(&dims);
    Ok(())
}

fn cone_cmd(args: &Args, report: &mut Report) -> Result<()> {
    let input: ConeInput = read_json(&inputs(args, 1, 1)?[0])?;
    let e = Arc::new(CohesiveModule::from_doc(&input.source)?);
    let f = Arc::new(CohesiveModule::from_doc(&input.target)?);
    report.config = json!(e.config());
    let phi = HomElement::from_doc(&input.map, e.clone(), f.clone())?;
    report.push(Check::exact("degree-zero", phi.degree() == 0, phi.degree()));
    let closed = phi.is_closed()?;
    report.push(Check::exact("closed", closed, closed));
    if phi.degree() != 0 || !closed {
        return Ok(());
    }
    let c = cone(&phi)?;
    let flat = c.check_integrability()?;
    report.push(Check::exact("cone-integrability", flat, flat));
    let chi = |m: &CohesiveModule| -> Result<i64> {
        Ok(m.underlying_complex()?.report().euler_cohomology)
    };
    let (chi_c, chi_e, chi_f) = (chi(&c)?, chi(&e)?, chi(&f)?);
    report.push(Check::exact(
        "euler-relation",
        chi_c == chi_f - chi_e,
        json!({"cone": chi_c, "source": chi_e, "target": chi_f}),
    ));
    report.results = json!({
        "homotopy_equivalence": is_homotopy_equivalence(&phi)?,
        "cone": c.to_doc(),
    });
    Ok(())
}

fn push_assumptions(report: &mut Report, square: &DescentSquare) {
    for a in square.check_assumptions() {
        report.push(Check::exact(
            format!("assumption:{}", a.name),
            a.holds,
            a.detail,
        ));
    }
}

fn glue_cmd(args: &Args, report: &mut Report) -> Result<()> {
    let input: GlueInput = read_json(&inputs(args, 1, 1)?[0])?;
    let config = input.triple.m.config;
    report.config = json!(config);
    let square = Arc::new(DescentSquare::new(input.cover.s1, input.cover.s2, config)?);
    push_assumptions(report, &square);
    let t = Arc::new(TripleObject::from_doc(square.clone(), &input.triple)?);
    let closed = t.phi().is_closed()?;
    report.push(Check::exact("phi-closed", closed, closed));
    if !closed {
        return Ok(());
    }
    let equivalence = t.phi().is_homotopy_equivalence()?;
    report.push(Check::exact("phi-equivalence", equivalence, equivalence));
    if !equivalence {
        return Ok(());
    }
    let glued = glue(&t)?;
    let flat = glued.check_integrability()?;
    report.push(Check::exact("glued-integrability", flat, flat));
    let eps = counit(&t)?;
    let he = triple_is_homotopy_equivalence(&eps)?;
    report.push(Check::exact("restrict-glue-equivalence", he, he));
    report.results = json!({ "glued": glued.to_doc() });
    Ok(())
}

fn unit_holds(square: &Arc<DescentSquare>, s: &PatchModule) -> Result<bool> {
    let eta = unit(square, s)?;
    Ok(eta.is_closed()? && eta.is_homotopy_equivalence()?)
}

fn counit_holds(t: &Arc<TripleObject>) -> Result<bool> {
    triple_is_homotopy_equivalence(&counit(t)?)
}

fn roundtrip(args: &Args, report: &mut Report) -> Result<()> {
    let input: RoundtripInput = read_json(&inputs(args, 1, 1)?[0])?;
    report.config = json!(input.config);
    let square = Arc::new(DescentSquare::new(
        input.cover.s1,
        input.cover.s2,
        input.config,
    )?);
    push_assumptions(report, &square);
    if let Some(doc) = &input.module {
        let s = PatchModule::from_doc(doc)?;
        if *s.dga() != square.a {
            return Err(Error::ModelMismatch(
                "module is not over the union of the cover".into(),
            ));
        }
        let ok = unit_holds(&square, &s)?;
        report.push(Check::exact("input:glue-restrict", ok, ok));
        let t = Arc::new(restrict(&square, &s)?);
        let ok = counit_holds(&t)?;
        report.push(Check::exact("input:restrict-glue", ok, ok));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let opts = SplitOptions {
        max_rank: 2,
        lowest: 0,
        span: 1,
        require_free: false,
    };
    let mut module_passes = 0;
    let mut triple_passes = 0;
    for _ in 0..input.samples {
        let s = random_union_module(&mut rng, &square, opts)?;
        module_passes += usize::from(unit_holds(&square, &s)?);
        let t = Arc::new(random_triple(&mut rng, &square, opts)?);
        triple_passes += usize::from(counit_holds(&t)?);
    }
    report.push(Check::exact(
        "seeded:glue-restrict",
        module_passes == input.samples,
        json!({"passed": module_passes, "total": input.samples}),
    ));
    report.push(Check::exact(
        "seeded:restrict-glue",
        triple_passes == input.samples,
        json!({"passed": triple_passes, "total": input.samples}),
    ));
    Ok(())
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

/// Loads a problem's connection, resampled when `--grid` asks for another
/// resolution.
fn load_connection(args: &Args, path: &Path) -> Result<(GaugeProblem, GridMatrixFn)> {
    let problem = GaugeProblem::load(path)?;
    let rho = problem.connection(&base_dir(path), problem.build_grid()?)?;
    let rho = match args.grid {
        Some(g) if g != problem.grid.resolution => {
            rho.resample(Arc::new(DiscGrid::new(problem.grid.radius, g)?))?
        }
        _ => rho,
    };
    Ok((problem, rho))
}

fn index_label(exps: &[u32]) -> String {
    exps.iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join("-")
}

fn push_residuals(report: &mut Report, residuals: &[OrderResidual], tol: f64) {
    for r in residuals {
        report.push(Check::at_most(
            format!("residual[{}]", index_label(r.index.exponents())),
            r.residual,
            tol,
        ));
    }
}

fn gauge_config(problem: &GaugeProblem, rho: &GridMatrixFn) -> Value {
    let cfg = problem.solver_config();
    json!({
        "grid": {"radius": rho.grid().radius(), "resolution": rho.grid().resolution()},
        "normal_dim": rho.normal_dim(),
        "order": problem.order(),
        "tol": cfg.tol,
        "max_iter": cfg.max_iter,
        "min_det": cfg.min_det,
    })
}

fn gauge_solve(args: &Args, report: &mut Report) -> Result<()> {
    let path = &inputs(args, 1, 1)?[0];
    let (problem, rho) = load_connection(args, path)?;
    let tol = args.tol.unwrap_or(DEFAULT_RESIDUAL_TOL);
    report.config = gauge_config(&problem, &rho);
    let cfg = problem.solver_config();
    let solution = match gauge_family(&rho, problem.order(), &cfg) {
        Ok(s) => s,
        Err(
            e @ (Error::NotContractive(_) | Error::MaxIterExceeded(_) | Error::SingularGauge(_)),
        ) => {
            report.push(Check::exact("solve", false, e.to_string()));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    report.push(Check::exact(
        "contraction-bound",
        solution.norm < 1.0,
        solution.norm,
    ));
    for o in &solution.orders {
        report.push(Check::at_most(
            format!("contraction-ratio[{}]", index_label(o.index.exponents())),
            o.contraction_ratio,
            solution.norm + 0.05,
        ));
    }
    report.push(Check::exact(
        "min-det",
        solution.min_det >= cfg.min_det,
        solution.min_det,
    ));
    let residuals = verify_gauge(&solution.gauge, &rho)?;
    push_residuals(report, &residuals, tol);

    let mut files = Vec::new();
    if let Some(out) = &args.output {
        let stem = out
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "gauge".into());
        let dir = base_dir(out);
        for (index, field) in solution.gauge.terms() {
            let name = format!("{stem}.g{}.gmf", index_label(index.exponents()));
            save_field(&dir.join(&name), rho.grid().resolution(), field)?;
            files.push(RhoTerm(index.clone(), name.into()));
        }
    }
    report.results = json!({
        "norm": solution.norm,
        "min_det": solution.min_det,
        "orders": solution.orders,
        "residuals": residuals,
        "gauge": files,
    });
    Ok(())
}

fn gauge_verify(args: &Args, report: &mut Report) -> Result<()> {
    let paths = inputs(args, 2, 2)?;
    let (problem, rho) = load_connection(args, &paths[0])?;
    let tol = args.tol.unwrap_or(DEFAULT_RESIDUAL_TOL);
    report.config = gauge_config(&problem, &rho);
    let solution = SolutionDoc::from_value(read_json(&paths[1])?)?;
    let dir = base_dir(&paths[1]);
    let (rows, cols) = rho.shape();
    let mut fields = BTreeMap::new();
    for RhoTerm(index, file) in &solution.gauge {
        let (g, field) = load_field(&dir.join(file))?;
        if g != rho.grid().resolution() {
            return Err(Error::Invalid(format!(
                "{} has resolution {g}, connection has {}",
                file.display(),
                rho.grid().resolution()
            )));
        }
        fields.insert(index.clone(), field);
    }
    let mut gauge = GridMatrixFn::new(rho.grid().clone(), rho.normal_dim(), rows, cols);
    for (index, field) in fields {
        gauge.insert(index, field)?;
    }
    let residuals = verify_gauge(&gauge, &rho)?;
    push_residuals(report, &residuals, tol);
    report.results = json!({ "residuals": residuals });
    Ok(())
}
