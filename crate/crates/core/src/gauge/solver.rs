use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cauchy::{dbar_fd_field, CauchyOperator, Evaluation};
use super::grid::{DiscGrid, GridMatrixFn, MatrixField};
use crate::coeff::MultiIndex;
use crate::cohesive::CohesiveModule;
use crate::error::{Error, Result};

/// Relative size below which successive differences are rounding noise and
/// are left out of the measured contraction ratio.
const NOISE_FLOOR: f64 = 1e-11;

/// Part of the disc on which residuals are measured: the outer ring of
/// width `0.2 R` is excluded.
pub const RESIDUAL_FRACTION: f64 = 0.8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Stop once successive iterates differ by less than this (sup norm).
    pub tol: f64,
    pub max_iter: usize,
    /// Smallest admissible `|det g0|` over the disc.
    pub min_det: f64,
    #[serde(skip)]
    pub evaluation: Evaluation,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-12,
            max_iter: 200,
            min_det: 0.1,
            evaluation: Evaluation::Auto,
        }
    }
}

/// Convergence record of one fixed-point solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub index: MultiIndex,
    pub iterations: usize,
    /// Largest `|phi_(k+1) - phi_k| / |phi_k - phi_(k-1)|` over `k >= 2`
    /// above the noise floor; zero when the iteration stops earlier.
    pub contraction_ratio: f64,
    pub final_step: f64,
    pub sup_norm: f64,
    /// Multi-indices whose solutions entered the right-hand side.
    pub depends_on: Vec<MultiIndex>,
}

/// Solution of the gauge equation to a given order.
#[derive(Clone, Debug)]
pub struct GaugeSolution {
    pub gauge: GridMatrixFn,
    /// `sup |rho_0|`.
    pub norm: f64,
    pub orders: Vec<OrderReport>,
    /// Smallest `|det g0|` over the disc.
    pub min_det: f64,
}

/// `sup |rho_0|` over the disc, checked to be below one.
pub fn contraction_bound(grid: &DiscGrid, rho0: &MatrixField) -> Result<f64> {
    let n = rho0.sup_norm(grid.samples());
    if n.is_nan() || n >= 1.0 {
        return Err(Error::NotContractive(n));
    }
    Ok(n)
}

/// Iterates `phi -> L(phi rho0 + a)` from zero.
fn fixed_point(
    op: &CauchyOperator,
    rho0: &MatrixField,
    a: &MatrixField,
    cfg: &SolverConfig,
    index: &MultiIndex,
) -> Result<(MatrixField, OrderReport)> {
    let grid = op.grid();
    let samples: Vec<usize> = grid.samples().collect();
    let mut phi = MatrixField::zeros(a.cells(), a.rows(), a.cols());
    let mut steps: Vec<f64> = Vec::new();
    let mut ratio: f64 = 0.0;
    for it in 1..=cfg.max_iter {
        let next = op.apply(&phi.mul(rho0)?.add(a)?)?;
        let step = next.sub(&phi)?.sup_norm(samples.iter().copied());
        phi = next;
        if !step.is_finite() {
            return Err(Error::MaxIterExceeded(it));
        }
        let scale = phi.sup_norm(samples.iter().copied()).max(1.0);
        if steps.len() >= 2 {
            let prev = steps[steps.len() - 1];
            if prev > NOISE_FLOOR * scale && step > NOISE_FLOOR * scale {
                ratio = ratio.max(step / prev);
            }
        }
        steps.push(step);
        if step <= cfg.tol {
            let sup_norm = phi.sup_norm(samples.iter().copied());
            return Ok((
                phi,
                OrderReport {
                    index: index.clone(),
                    iterations: it,
                    contraction_ratio: ratio,
                    final_step: step,
                    sup_norm,
                    depends_on: Vec::new(),
                },
            ));
        }
    }
    Err(Error::MaxIterExceeded(cfg.max_iter))
}

fn require_square(f: &MatrixField) -> Result<()> {
    if f.rows() != f.cols() {
        return Err(Error::ShapeMismatch(format!(
            "connection matrix is {}x{}",
            f.rows(),
            f.cols()
        )));
    }
    Ok(())
}

fn min_abs_det(grid: &DiscGrid, g: &MatrixField) -> f64 {
    grid.samples()
        .map(|c| g.det_at(c).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Solves `dg0/dwbar = g0 rho0` as `g0 = 1 + f`, `f = L(rho0 + f rho0)`.
pub fn solve_order0(
    op: &CauchyOperator,
    rho0: &MatrixField,
    cfg: &SolverConfig,
) -> Result<(MatrixField, OrderReport)> {
    require_square(rho0)?;
    contraction_bound(op.grid(), rho0)?;
    let index = MultiIndex::new(Vec::new());
    let (f, report) = fixed_point(op, rho0, rho0, cfg, &index)?;
    let g0 = MatrixField::identity(f.cells(), f.rows()).add(&f)?;
    let det = min_abs_det(op.grid(), &g0);
    if det < cfg.min_det {
        return Err(Error::SingularGauge(det));
    }
    Ok((g0, report))
}

/// `A_I = sum over I = J + K, |K| > 0 of g_J rho_K`, with the indices `J`
/// that were used.
fn inhomogeneity(
    index: &MultiIndex,
    lower: &BTreeMap<MultiIndex, MatrixField>,
    rho: &GridMatrixFn,
) -> Result<(MatrixField, Vec<MultiIndex>)> {
    let (rows, cols) = rho.shape();
    let mut acc = MatrixField::zeros(rho.grid().cells(), rows, cols);
    let mut used = Vec::new();
    for (j, k) in index.splittings() {
        if k.order() == 0 {
            continue;
        }
        let g_j = lower
            .get(&j)
            .ok_or_else(|| Error::MissingLowerOrder(j.exponents().to_vec()))?;
        used.push(j.clone());
        if let Some(rho_k) = rho.term(&k) {
            acc = acc.add(&g_j.mul(rho_k)?)?;
        }
    }
    Ok((acc, used))
}

/// Solves `dg_I/dwbar = g_I rho_0 + sum_(I = J + K, |K| > 0) g_J rho_K`
/// given every `g_J` with `|J| < |I|`.
pub fn solve_order(
    op: &CauchyOperator,
    index: &MultiIndex,
    lower: &BTreeMap<MultiIndex, MatrixField>,
    rho: &GridMatrixFn,
    cfg: &SolverConfig,
) -> Result<(MatrixField, OrderReport)> {
    let rho0 = rho.term_or_zero(&MultiIndex::zero(rho.normal_dim()));
    require_square(&rho0)?;
    contraction_bound(op.grid(), &rho0)?;
    let (a, used) = inhomogeneity(index, lower, rho)?;
    let (g, mut report) = fixed_point(op, &rho0, &a, cfg, index)?;
    report.depends_on = used;
    Ok((g, report))
}

/// Solves for every `g_I` with `|I| <= order`, level by level. Indices of
/// one level are independent and solved concurrently.
pub fn gauge_family(rho: &GridMatrixFn, order: u32, cfg: &SolverConfig) -> Result<GaugeSolution> {
    let op = CauchyOperator::with_evaluation(rho.grid().clone(), cfg.evaluation);
    gauge_family_with(&op, rho, order, cfg)
}

/// As [`gauge_family`] with a prepared operator.
pub fn gauge_family_with(
    op: &CauchyOperator,
    rho: &GridMatrixFn,
    order: u32,
    cfg: &SolverConfig,
) -> Result<GaugeSolution> {
    if **op.grid() != **rho.grid() {
        return Err(Error::ShapeMismatch(
            "operator and connection live on different grids".into(),
        ));
    }
    let n = rho.normal_dim();
    let zero = MultiIndex::zero(n);
    let rho0 = rho.term_or_zero(&zero);
    let norm = contraction_bound(rho.grid(), &rho0)?;
    let (g0, mut report0) = solve_order0(op, &rho0, cfg)?;
    report0.index = zero.clone();
    let min_det = min_abs_det(rho.grid(), &g0);
    let mut solved: BTreeMap<MultiIndex, MatrixField> = BTreeMap::from([(zero, g0)]);
    let mut orders = vec![report0];
    for level in 1..=order {
        let indices = MultiIndex::all_of_order(n, level);
        let results: Vec<(MultiIndex, MatrixField, OrderReport)> = indices
            .par_iter()
            .map(|i| {
                let (g, report) = solve_order(op, i, &solved, rho, cfg)?;
                Ok((i.clone(), g, report))
            })
            .collect::<Result<_>>()?;
        for (i, g, report) in results {
            solved.insert(i, g);
            orders.push(report);
        }
    }
    let (rows, cols) = rho.shape();
    let mut gauge = GridMatrixFn::new(rho.grid().clone(), n, rows, cols);
    for (i, g) in solved {
        gauge.insert(i, g)?;
    }
    Ok(GaugeSolution {
        gauge,
        norm,
        orders,
        min_det,
    })
}

/// Residual of the gauge equation at one order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderResidual {
    pub index: MultiIndex,
    pub residual: f64,
}

/// Per-order sup norm of `dg_I/dwbar - sum_(J + K = I) g_J rho_K` on
/// `|w| <= 0.8 R`, derivatives by centred differences.
pub fn verify_gauge(g: &GridMatrixFn, rho: &GridMatrixFn) -> Result<Vec<OrderResidual>> {
    if g.grid().cells() != rho.grid().cells()
        || g.normal_dim() != rho.normal_dim()
        || g.shape() != rho.shape()
    {
        return Err(Error::ShapeMismatch(
            "gauge and connection have different shapes".into(),
        ));
    }
    let grid = g.grid();
    let interior = grid.interior(RESIDUAL_FRACTION);
    MultiIndex::all_up_to(g.normal_dim(), g.max_order())
        .par_iter()
        .map(|i| {
            let lhs = dbar_fd_field(grid, &g.term_or_zero(i), &interior);
            let mut rhs = MatrixField::zeros(grid.cells(), g.shape().0, g.shape().1);
            for (j, k) in i.splittings() {
                if let (Some(gj), Some(rk)) = (g.term(&j), rho.term(&k)) {
                    rhs = rhs.add(&gj.mul(rk)?)?;
                }
            }
            Ok(OrderResidual {
                index: i.clone(),
                residual: lhs.sub(&rhs)?.sup_norm(interior.iter().copied()),
            })
        })
        .collect()
}

/// Flatness `dbar alpha + alpha ^ alpha = 0` of a dbar-connection over an
/// `m`-dimensional base. On a curve there are no (0,2)-forms, so the
/// condition holds automatically; for a cohesive module this is confirmed
/// by computing the form-degree-2 part of its curvature.
pub fn check_flatness(base_dim: usize, module: Option<&CohesiveModule>) -> Result<bool> {
    if base_dim > 1 {
        return Err(Error::UnsupportedDimension(base_dim));
    }
    let Some(module) = module else {
        return Ok(true);
    };
    if module.config().m as usize != base_dim {
        return Err(Error::ModelMismatch(format!(
            "module over a base of dimension {}, expected {base_dim}",
            module.config().m
        )));
    }
    let curvature = module.curvature()?;
    Ok(curvature
        .iter()
        .filter(|((k, _), _)| *k == 2)
        .all(|(_, m)| m.is_zero()))
}

/// Pulls a connection back along `w -> c w`: the same samples on the disc of
/// radius `R / c`, multiplied by `c` (the coefficient of `dwbar` scales with
/// the differential). Shrinks `sup |rho_0|` by `c` for `c < 1`.
pub fn rescale(rho: &GridMatrixFn, c: f64) -> Result<GridMatrixFn> {
    let grid = Arc::new(rho.grid().rescaled(c)?);
    Ok(rho
        .with_grid(grid)?
        .map_terms(|f| f.scale(Complex64::new(c, 0.0))))
}
