//! The solid Cauchy transform
//!
//! ```text
//! (L theta)(w) = -1/pi  integral over the disc of  theta(xi) / (xi - w) dA(xi)
//! ```
//!
//! discretised by treating `theta` as constant on each cell and integrating
//! the kernel over the cell exactly, so the singular cell needs no special
//! treatment. The resulting sum is a discrete convolution, evaluated with
//! zero-padded FFTs on a `2G x 2G` grid or directly for small grids.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::grid::{DiscGrid, MatrixField};
use crate::error::{Error, Result};

/// Antiderivative `F(x, y)` of `1 / (x + iy)` in both variables.
fn primitive(x: f64, y: f64) -> Complex64 {
    let r2 = x * x + y * y;
    let lg = if r2 > 0.0 { r2.ln() } else { 0.0 };
    let p = 0.5 * y * lg + if x != 0.0 { x * (y / x).atan() } else { 0.0 };
    let q = 0.5 * x * lg + if y != 0.0 { y * (x / y).atan() } else { 0.0 };
    Complex64::new(p, -q)
}

/// Exact integral of `1 / xi` over the axis-parallel square of side `h`
/// centred at `(cx, cy)`.
pub fn cell_integral(cx: f64, cy: f64, h: f64) -> Complex64 {
    let (a, b) = (cx - 0.5 * h, cx + 0.5 * h);
    let (c, d) = (cy - 0.5 * h, cy + 0.5 * h);
    primitive(b, d) - primitive(a, d) - primitive(b, c) + primitive(a, c)
}

/// Largest grid evaluated by the direct `O(N^2)` sum under
/// [`Evaluation::Auto`].
pub const DIRECT_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Evaluation {
    /// FFT above [`DIRECT_LIMIT`], direct sum below.
    #[default]
    Auto,
    Fft,
    Direct,
}

/// Precomputed Cauchy transform on one grid.
pub struct CauchyOperator {
    grid: Arc<DiscGrid>,
    /// `K[(oy, ox)] = integral of 1/xi over the cell at offset (ox, oy) h`,
    /// offsets in `-(G-1)..=G-1`.
    kernel: Vec<Complex64>,
    padded: usize,
    kernel_hat: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    evaluation: Evaluation,
}

impl std::fmt::Debug for CauchyOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CauchyOperator")
            .field("resolution", &self.grid.resolution())
            .field("radius", &self.grid.radius())
            .field("evaluation", &self.evaluation)
            .finish()
    }
}

impl CauchyOperator {
    pub fn new(grid: Arc<DiscGrid>) -> Self {
        Self::with_evaluation(grid, Evaluation::Auto)
    }

    pub fn with_evaluation(grid: Arc<DiscGrid>, evaluation: Evaluation) -> Self {
        let g = grid.resolution();
        let h = grid.spacing();
        let span = 2 * g - 1;
        let off = |k: usize| (k as f64 - (g as f64 - 1.0)) * h;
        let kernel: Vec<Complex64> = (0..span * span)
            .into_par_iter()
            .map(|idx| cell_integral(off(idx % span), off(idx / span), h))
            .collect();

        let padded = 2 * g;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(padded);
        let inverse = planner.plan_fft_inverse(padded);
        // circulant embedding: offset o lives at index o mod 2G
        let mut kernel_hat = vec![Complex64::new(0.0, 0.0); padded * padded];
        for oy in 0..span {
            for ox in 0..span {
                let wrap = |o: usize| (o + padded - (g - 1)) % padded;
                kernel_hat[wrap(oy) * padded + wrap(ox)] = kernel[oy * span + ox];
            }
        }
        fft2(&mut kernel_hat, padded, forward.as_ref());
        CauchyOperator {
            grid,
            kernel,
            padded,
            kernel_hat,
            forward,
            inverse,
            evaluation,
        }
    }

    pub fn grid(&self) -> &Arc<DiscGrid> {
        &self.grid
    }

    fn use_fft(&self) -> bool {
        match self.evaluation {
            Evaluation::Auto => self.grid.resolution() > DIRECT_LIMIT,
            Evaluation::Fft => true,
            Evaluation::Direct => false,
        }
    }

    /// `L` applied to a scalar field given by its values at every cell.
    /// Values outside the disc are ignored.
    pub fn apply_scalar(&self, theta: &[Complex64]) -> Result<Vec<Complex64>> {
        let g = self.grid.resolution();
        if theta.len() != g * g {
            return Err(Error::ShapeMismatch(format!(
                "field has {} samples, grid has {}",
                theta.len(),
                g * g
            )));
        }
        let weighted: Vec<Complex64> = theta
            .iter()
            .zip(self.grid.coverage())
            .map(|(t, c)| t * *c)
            .collect();
        let scale = 1.0 / std::f64::consts::PI;
        Ok(if self.use_fft() {
            self.convolve_fft(&weighted)
                .into_iter()
                .map(|v| v * scale)
                .collect()
        } else {
            self.convolve_direct(&weighted)
                .into_iter()
                .map(|v| v * scale)
                .collect()
        })
    }

    /// `sum_k t_k K(c_j - c_k)`, which equals `-sum_k t_k K(c_k - c_j)`
    /// because the kernel is odd.
    fn convolve_direct(&self, t: &[Complex64]) -> Vec<Complex64> {
        let g = self.grid.resolution();
        let span = 2 * g - 1;
        (0..g * g)
            .into_par_iter()
            .map(|j| {
                let (jx, jy) = (j % g, j / g);
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, tk) in t.iter().enumerate() {
                    if tk.re == 0.0 && tk.im == 0.0 {
                        continue;
                    }
                    let (kx, ky) = (k % g, k / g);
                    let ox = jx + g - 1 - kx;
                    let oy = jy + g - 1 - ky;
                    acc += tk * self.kernel[oy * span + ox];
                }
                acc
            })
            .collect()
    }

    fn convolve_fft(&self, t: &[Complex64]) -> Vec<Complex64> {
        let g = self.grid.resolution();
        let m = self.padded;
        let mut buf = vec![Complex64::new(0.0, 0.0); m * m];
        for iy in 0..g {
            buf[iy * m..iy * m + g].copy_from_slice(&t[iy * g..(iy + 1) * g]);
        }
        fft2(&mut buf, m, self.forward.as_ref());
        for (b, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= k;
        }
        fft2(&mut buf, m, self.inverse.as_ref());
        let norm = 1.0 / (m * m) as f64;
        let mut out = Vec::with_capacity(g * g);
        for iy in 0..g {
            out.extend(buf[iy * m..iy * m + g].iter().map(|v| v * norm));
        }
        out
    }

    /// `L` applied entrywise to a matrix field.
    pub fn apply(&self, theta: &MatrixField) -> Result<MatrixField> {
        let mut out = MatrixField::zeros(theta.cells(), theta.rows(), theta.cols());
        let planes: Vec<((usize, usize), Vec<Complex64>)> = (0..theta.rows())
            .flat_map(|i| (0..theta.cols()).map(move |j| (i, j)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(i, j)| Ok(((i, j), self.apply_scalar(&theta.entry_plane(i, j))?)))
            .collect::<Result<_>>()?;
        for ((i, j), plane) in planes {
            out.set_entry_plane(i, j, &plane);
        }
        Ok(out)
    }
}

/// In-place unnormalised 2-D transform of an `m x m` row-major array.
fn fft2(data: &mut [Complex64], m: usize, fft: &dyn Fft<f64>) {
    data.par_chunks_mut(m).for_each(|row| fft.process(row));
    transpose(data, m);
    data.par_chunks_mut(m).for_each(|row| fft.process(row));
    transpose(data, m);
}

fn transpose(data: &mut [Complex64], m: usize) {
    for i in 0..m {
        for j in i + 1..m {
            data.swap(i * m + j, j * m + i);
        }
    }
}

/// One-shot transform of a matrix field.
pub fn cauchy_transform(grid: &Arc<DiscGrid>, theta: &MatrixField) -> Result<MatrixField> {
    CauchyOperator::new(grid.clone()).apply(theta)
}

/// Centred-difference `d/dwbar = (d/dx + i d/dy) / 2` of a scalar field at
/// the given interior cells; other cells are zero.
pub fn dbar_fd(grid: &DiscGrid, f: &[Complex64], cells: &[usize]) -> Vec<Complex64> {
    let g = grid.resolution();
    let h = grid.spacing();
    let mut out = vec![Complex64::new(0.0, 0.0); f.len()];
    for &c in cells {
        let dx = (f[c + 1] - f[c - 1]) / (2.0 * h);
        let dy = (f[c + g] - f[c - g]) / (2.0 * h);
        out[c] = 0.5 * (dx + Complex64::i() * dy);
    }
    out
}

/// Entrywise [`dbar_fd`] of a matrix field.
pub fn dbar_fd_field(grid: &DiscGrid, f: &MatrixField, cells: &[usize]) -> MatrixField {
    let mut out = MatrixField::zeros(f.cells(), f.rows(), f.cols());
    for i in 0..f.rows() {
        for j in 0..f.cols() {
            out.set_entry_plane(i, j, &dbar_fd(grid, &f.entry_plane(i, j), cells));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_integral_is_odd_and_vanishes_at_the_origin() {
        let h = 0.1;
        assert!(cell_integral(0.0, 0.0, h).norm() < 1e-15);
        let a = cell_integral(0.3, -0.2, h);
        let b = cell_integral(-0.3, 0.2, h);
        assert!((a + b).norm() < 1e-14);
    }

    #[test]
    fn cell_integral_matches_midpoint_far_away() {
        let h = 1e-3;
        let (x, y) = (0.7, 0.4);
        let exact = cell_integral(x, y, h);
        let mid = Complex64::new(1.0, 0.0) / Complex64::new(x, y) * h * h;
        assert!((exact - mid).norm() < 1e-10 * mid.norm() + 1e-15);
    }

    #[test]
    fn fft_and_direct_agree() {
        let grid = Arc::new(DiscGrid::new(1.0, 16).unwrap());
        let theta: Vec<Complex64> = (0..grid.cells())
            .map(|c| {
                let w = grid.point(c);
                Complex64::new((3.0 * w.re).sin(), w.im * w.re)
            })
            .collect();
        let fft = CauchyOperator::with_evaluation(grid.clone(), Evaluation::Fft);
        let direct = CauchyOperator::with_evaluation(grid, Evaluation::Direct);
        let a = fft.apply_scalar(&theta).unwrap();
        let b = direct.apply_scalar(&theta).unwrap();
        let err = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }
}
