use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::coeff::MultiIndex;
use crate::error::{Error, Result};

/// Sub-samples per axis used to estimate how much of each cell lies inside
/// the disc.
const COVERAGE_SAMPLES: usize = 8;

/// Uniform `G x G` grid of square cells covering the disc of the given
/// radius. Every cell meeting the disc is a sample point; its quadrature
/// weight is the cell area times the covered fraction.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscGrid {
    radius: f64,
    resolution: usize,
    spacing: f64,
    coverage: Vec<f64>,
}

impl DiscGrid {
    pub fn new(radius: f64, resolution: usize) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Invalid(format!(
                "grid radius must be positive, got {radius}"
            )));
        }
        if resolution < 4 {
            return Err(Error::Invalid(format!(
                "grid resolution must be at least 4, got {resolution}"
            )));
        }
        let spacing = 2.0 * radius / resolution as f64;
        let sub: Vec<f64> = (0..COVERAGE_SAMPLES)
            .map(|s| ((s as f64 + 0.5) / COVERAGE_SAMPLES as f64 - 0.5) * spacing)
            .collect();
        let mut coverage = vec![0.0; resolution * resolution];
        for iy in 0..resolution {
            for ix in 0..resolution {
                let (x, y) = Self::center_of(radius, spacing, ix, iy);
                let hits = sub
                    .iter()
                    .flat_map(|dx| sub.iter().map(move |dy| (x + dx, y + dy)))
                    .filter(|(u, v)| u * u + v * v < radius * radius)
                    .count();
                coverage[iy * resolution + ix] =
                    hits as f64 / (COVERAGE_SAMPLES * COVERAGE_SAMPLES) as f64;
            }
        }
        Ok(DiscGrid {
            radius,
            resolution,
            spacing,
            coverage,
        })
    }

    fn center_of(radius: f64, spacing: f64, ix: usize, iy: usize) -> (f64, f64) {
        (
            -radius + (ix as f64 + 0.5) * spacing,
            -radius + (iy as f64 + 0.5) * spacing,
        )
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Side length `h` of a cell.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn cells(&self) -> usize {
        self.resolution * self.resolution
    }

    /// Cell centre as a complex number; cells are numbered row-major with
    /// `y` varying slowest.
    pub fn point(&self, cell: usize) -> Complex64 {
        let (x, y) = Self::center_of(
            self.radius,
            self.spacing,
            cell % self.resolution,
            cell / self.resolution,
        );
        Complex64::new(x, y)
    }

    /// Fraction of the cell inside the disc.
    pub fn coverage(&self) -> &[f64] {
        &self.coverage
    }

    pub fn weight(&self, cell: usize) -> f64 {
        self.coverage[cell] * self.spacing * self.spacing
    }

    pub fn total_weight(&self) -> f64 {
        (0..self.cells()).map(|c| self.weight(c)).sum()
    }

    /// Cells meeting the disc.
    pub fn samples(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.cells()).filter(|&c| self.coverage[c] > 0.0)
    }

    /// Interior cells usable for centred differences whose centres satisfy
    /// `|w| <= fraction * radius`.
    pub fn interior(&self, fraction: f64) -> Vec<usize> {
        let g = self.resolution;
        let bound = fraction * self.radius;
        (0..self.cells())
            .filter(|&c| {
                let (ix, iy) = (c % g, c / g);
                ix > 0 && iy > 0 && ix + 1 < g && iy + 1 < g && self.point(c).norm() <= bound
            })
            .collect()
    }

    /// Same cells on the disc of radius `radius / c`.
    pub fn rescaled(&self, c: f64) -> Result<DiscGrid> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Invalid(format!(
                "rescaling factor must be positive, got {c}"
            )));
        }
        Ok(DiscGrid {
            radius: self.radius / c,
            spacing: self.spacing / c,
            ..self.clone()
        })
    }
}

/// A `rows x cols` complex matrix at every cell of a grid, stored as
/// `[cell][row][col]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixField {
    rows: usize,
    cols: usize,
    cells: usize,
    data: Vec<Complex64>,
}

impl MatrixField {
    pub fn zeros(cells: usize, rows: usize, cols: usize) -> Self {
        MatrixField {
            rows,
            cols,
            cells,
            data: vec![Complex64::new(0.0, 0.0); cells * rows * cols],
        }
    }

    pub fn identity(cells: usize, d: usize) -> Self {
        let mut out = MatrixField::zeros(cells, d, d);
        for c in 0..cells {
            for i in 0..d {
                out.set(c, i, i, Complex64::new(1.0, 0.0));
            }
        }
        out
    }

    /// Scalar field `f` as a `1 x 1` matrix field.
    pub fn scalar(values: Vec<Complex64>) -> Self {
        MatrixField {
            rows: 1,
            cols: 1,
            cells: values.len(),
            data: values,
        }
    }

    pub fn from_fn(
        cells: usize,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize, usize) -> Complex64,
    ) -> Self {
        let mut out = MatrixField::zeros(cells, rows, cols);
        for c in 0..cells {
            for i in 0..rows {
                for j in 0..cols {
                    out.set(c, i, j, f(c, i, j));
                }
            }
        }
        out
    }

    pub fn from_data(cells: usize, rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != cells * rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "field data has {} values, expected {}",
                data.len(),
                cells * rows * cols
            )));
        }
        Ok(MatrixField {
            rows,
            cols,
            cells,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, cell: usize, i: usize, j: usize) -> Complex64 {
        self.data[(cell * self.rows + i) * self.cols + j]
    }

    pub fn set(&mut self, cell: usize, i: usize, j: usize, v: Complex64) {
        self.data[(cell * self.rows + i) * self.cols + j] = v;
    }

    /// Values of one matrix entry over all cells.
    pub fn entry_plane(&self, i: usize, j: usize) -> Vec<Complex64> {
        (0..self.cells).map(|c| self.get(c, i, j)).collect()
    }

    pub fn set_entry_plane(&mut self, i: usize, j: usize, values: &[Complex64]) {
        for (c, v) in values.iter().enumerate() {
            self.set(c, i, j, *v);
        }
    }

    fn check_same_shape(&self, other: &MatrixField) -> Result<()> {
        if (self.rows, self.cols, self.cells) != (other.rows, other.cols, other.cells) {
            return Err(Error::ShapeMismatch(
                "matrix fields of different shapes".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &MatrixField) -> Result<MatrixField> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(self.with_data(data))
    }

    pub fn sub(&self, other: &MatrixField) -> Result<MatrixField> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(self.with_data(data))
    }

    pub fn scale(&self, s: Complex64) -> MatrixField {
        self.with_data(self.data.iter().map(|a| a * s).collect())
    }

    fn with_data(&self, data: Vec<Complex64>) -> MatrixField {
        MatrixField {
            rows: self.rows,
            cols: self.cols,
            cells: self.cells,
            data,
        }
    }

    /// Pointwise matrix product `self(w) * other(w)`.
    pub fn mul(&self, other: &MatrixField) -> Result<MatrixField> {
        if self.cols != other.rows || self.cells != other.cells {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{} fields",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = MatrixField::zeros(self.cells, self.rows, other.cols);
        for c in 0..self.cells {
            for i in 0..self.rows {
                for j in 0..other.cols {
                    let v = (0..self.cols)
                        .map(|k| self.get(c, i, k) * other.get(c, k, j))
                        .sum();
                    out.set(c, i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Frobenius norm of the matrix at one cell.
    pub fn norm_at(&self, cell: usize) -> f64 {
        let start = cell * self.rows * self.cols;
        self.data[start..start + self.rows * self.cols]
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest pointwise Frobenius norm over the given cells.
    pub fn sup_norm(&self, cells: impl IntoIterator<Item = usize>) -> f64 {
        cells
            .into_iter()
            .map(|c| self.norm_at(c))
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Determinant of the matrix at one cell (square fields only).
    pub fn det_at(&self, cell: usize) -> Complex64 {
        let n = self.rows;
        let mut a: Vec<Complex64> = (0..n * n).map(|k| self.get(cell, k / n, k % n)).collect();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                .expect("nonempty range");
            if a[pivot * n + col].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for row in col + 1..n {
                let factor = a[row * n + col] / p;
                for k in col..n {
                    let v = a[col * n + k];
                    a[row * n + k] -= factor * v;
                }
            }
        }
        det
    }
}

/// Matrix-valued function on a disc grid with a formal expansion in normal
/// variables: `f(w, z) = sum_I f_I(w) z^I` over multi-indices `|I| <= order`.
/// Missing coefficients are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct GridMatrixFn {
    grid: Arc<DiscGrid>,
    n: usize,
    rows: usize,
    cols: usize,
    terms: BTreeMap<MultiIndex, MatrixField>,
}

impl GridMatrixFn {
    pub fn new(grid: Arc<DiscGrid>, n: usize, rows: usize, cols: usize) -> Self {
        GridMatrixFn {
            grid,
            n,
            rows,
            cols,
            terms: BTreeMap::new(),
        }
    }

    /// The constant-in-`z` function with coefficient `field`.
    pub fn constant(grid: Arc<DiscGrid>, n: usize, field: MatrixField) -> Result<Self> {
        let mut out = GridMatrixFn::new(grid, n, field.rows, field.cols);
        out.insert(MultiIndex::zero(n), field)?;
        Ok(out)
    }

    pub fn grid(&self) -> &Arc<DiscGrid> {
        &self.grid
    }

    /// Number of normal variables.
    pub fn normal_dim(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn insert(&mut self, index: MultiIndex, field: MatrixField) -> Result<()> {
        if index.len() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "multi-index of length {} for {} normal variables",
                index.len(),
                self.n
            )));
        }
        if (field.rows, field.cols, field.cells) != (self.rows, self.cols, self.grid.cells()) {
            return Err(Error::ShapeMismatch(
                "coefficient field has the wrong shape".into(),
            ));
        }
        if !field.is_finite() {
            return Err(Error::Invalid(format!(
                "coefficient {:?} has non-finite entries",
                index.exponents()
            )));
        }
        self.terms.insert(index, field);
        Ok(())
    }

    pub fn term(&self, index: &MultiIndex) -> Option<&MatrixField> {
        self.terms.get(index)
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, MatrixField> {
        &self.terms
    }

    /// Coefficient `f_I`, zero if absent.
    pub fn term_or_zero(&self, index: &MultiIndex) -> MatrixField {
        self.terms
            .get(index)
            .cloned()
            .unwrap_or_else(|| MatrixField::zeros(self.grid.cells(), self.rows, self.cols))
    }

    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    /// Sup over the disc of the pointwise Frobenius norm of `f_I`.
    pub fn sup_norm(&self, index: &MultiIndex) -> f64 {
        self.terms
            .get(index)
            .map_or(0.0, |f| f.sup_norm(self.grid.samples()))
    }

    /// Same samples viewed on the disc of radius `R / c`.
    pub fn with_grid(&self, grid: Arc<DiscGrid>) -> Result<Self> {
        if grid.cells() != self.grid.cells() {
            return Err(Error::ShapeMismatch(
                "grids with different cell counts".into(),
            ));
        }
        Ok(GridMatrixFn {
            grid,
            ..self.clone()
        })
    }

    /// Bilinear interpolation between cell centres onto another grid over
    /// the same disc; points beyond the outermost centres are clamped.
    pub fn resample(&self, target: Arc<DiscGrid>) -> Result<Self> {
        if (target.radius() - self.grid.radius()).abs() > 1e-12 * self.grid.radius() {
            return Err(Error::ShapeMismatch(
                "resampling between discs of different radii".into(),
            ));
        }
        let g = self.grid.resolution();
        let h = self.grid.spacing();
        let r = self.grid.radius();
        let locate = |t: f64| -> (usize, f64) {
            let s = ((t + r) / h - 0.5).clamp(0.0, (g - 1) as f64);
            let i = (s.floor() as usize).min(g - 2);
            (i, s - i as f64)
        };
        let stencil: Vec<[(usize, f64); 4]> = (0..target.cells())
            .map(|c| {
                let p = target.point(c);
                let ((ix, fx), (iy, fy)) = (locate(p.re), locate(p.im));
                let at = |x: usize, y: usize| y * g + x;
                [
                    (at(ix, iy), (1.0 - fx) * (1.0 - fy)),
                    (at(ix + 1, iy), fx * (1.0 - fy)),
                    (at(ix, iy + 1), (1.0 - fx) * fy),
                    (at(ix + 1, iy + 1), fx * fy),
                ]
            })
            .collect();
        let mut out = GridMatrixFn::new(target.clone(), self.n, self.rows, self.cols);
        for (index, f) in &self.terms {
            let resampled =
                MatrixField::from_fn(target.cells(), self.rows, self.cols, |c, i, j| {
                    stencil[c]
                        .iter()
                        .map(|&(k, wgt)| f.get(k, i, j) * wgt)
                        .sum()
                });
            out.insert(index.clone(), resampled)?;
        }
        Ok(out)
    }

    pub fn map_terms(&self, f: impl Fn(&MatrixField) -> MatrixField) -> Self {
        GridMatrixFn {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
            ..self.clone()
        }
    }
}
