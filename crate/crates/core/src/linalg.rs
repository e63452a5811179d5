//! Exact sparse linear algebra over Q(i): ranks and cohomology dimensions
//! of finite cochain complexes.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::coeff::Scalar;
use crate::error::{Error, Result};

/// Sparse vector with strictly increasing indices and no explicit zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    /// Collects arbitrary `(index, value)` pairs, summing duplicates.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Scalar)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, v) in pairs {
            *acc.entry(i).or_default() += &v;
        }
        SparseVec {
            entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn leading(&self) -> Option<&(usize, Scalar)> {
        self.entries.first()
    }

    /// `self - factor * other`.
    fn axpy_neg(&self, factor: &Scalar, other: &SparseVec) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                out.push((b[j].0, -(factor * &b[j].1)));
                j += 1;
            } else {
                let v = &a[i].1 - &(factor * &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    fn normalized(&self) -> SparseVec {
        let lead = self.entries[0].1.inv().expect("leading entry is nonzero");
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v * &lead)).collect(),
        }
    }
}

/// Incremental row-echelon basis; `rank()` is the dimension of the span of
/// everything inserted so far.
#[derive(Default)]
pub struct Echelon {
    pivots: HashMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    /// Reduces `v` against the current pivots; returns true when `v` was
    /// independent and has been added.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = v;
        loop {
            let Some((lead, coeff)) = v.leading().cloned() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(p) => v = v.axpy_neg(&coeff, p),
                None => {
                    self.pivots.insert(lead, v.normalized());
                    return true;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Column-major sparse matrix: `cols[j]` is the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols: vec![SparseVec::new(); cols],
        }
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Result<Self> {
        for c in &cols {
            if c.entries.last().is_some_and(|(i, _)| *i >= rows) {
                return Err(Error::ShapeMismatch(format!(
                    "column entry outside {rows} rows"
                )));
            }
        }
        Ok(SparseMatrix { rows, cols })
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let cols = (0..ncols)
            .map(|j| SparseVec::from_pairs((0..nrows).map(|i| (i, rows[i][j].clone()))))
            .collect();
        SparseMatrix { rows: nrows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new();
        for c in &self.cols {
            e.insert(c.clone());
        }
        e.rank()
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_pairs(
            v.entries
                .iter()
                .flat_map(|(j, x)| self.cols[*j].entries.iter().map(move |(i, y)| (*i, x * y))),
        )
    }

    /// `self * other`.
    pub fn compose(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols() != other.nrows() {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows,
                self.ncols(),
                other.rows,
                other.ncols()
            )));
        }
        Ok(SparseMatrix {
            rows: self.rows,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        })
    }
}

/// Finite cochain complex of Q(i)-vector spaces; `differentials[k]` maps
/// degree `k` to degree `k + 1`.
#[derive(Clone, Debug, Default)]
pub struct CochainComplex {
    dims: BTreeMap<i32, usize>,
    differentials: BTreeMap<i32, SparseMatrix>,
}

impl CochainComplex {
    pub fn new() -> Self {
        CochainComplex::default()
    }

    pub fn set_space(&mut self, degree: i32, dim: usize) {
        self.dims.insert(degree, dim);
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn set_differential(&mut self, degree: i32, d: SparseMatrix) -> Result<()> {
        if d.ncols() != self.dim(degree) || d.nrows() != self.dim(degree + 1) {
            return Err(Error::ShapeMismatch(format!(
                "differential in degree {degree} is {}x{}, spaces have dims {} -> {}",
                d.nrows(),
                d.ncols(),
                self.dim(degree),
                self.dim(degree + 1)
            )));
        }
        self.differentials.insert(degree, d);
        Ok(())
    }

    /// True when every composite `d^{k+1} d^k` vanishes.
    pub fn is_complex(&self) -> bool {
        self.differentials
            .iter()
            .all(|(k, d)| match self.differentials.get(&(k + 1)) {
                Some(d2) => d2.compose(d).map(|m| m.is_zero()).unwrap_or(false),
                None => true,
            })
    }

    /// Kernel, image and cohomology dimensions per degree. The numbers are
    /// only meaningful when [`is_complex`](Self::is_complex) holds; otherwise
    /// they saturate at zero instead of underflowing.
    pub fn report(&self) -> ComplexReport {
        let ranks: BTreeMap<i32, usize> = self
            .differentials
            .iter()
            .map(|(k, d)| (*k, d.rank()))
            .collect();
        let degrees = self
            .dims
            .iter()
            .map(|(&k, &dim)| {
                let out = ranks.get(&k).copied().unwrap_or(0);
                let image = ranks.get(&(k - 1)).copied().unwrap_or(0);
                DegreeReport {
                    degree: k,
                    dim,
                    kernel: dim.saturating_sub(out),
                    image,
                    cohomology: dim.saturating_sub(out + image),
                }
            })
            .collect();
        ComplexReport::from_degrees(degrees)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degree: i32,
    pub dim: usize,
    pub kernel: usize,
    pub image: usize,
    pub cohomology: usize,
}

/// Per-degree kernel, image and cohomology dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexReport {
    pub degrees: Vec<DegreeReport>,
    pub euler_characteristic: i64,
    pub euler_cohomology: i64,
}

impl ComplexReport {
    pub fn from_degrees(degrees: Vec<DegreeReport>) -> Self {
        let sign = |k: i32| if k.rem_euclid(2) == 0 { 1i64 } else { -1 };
        let euler_characteristic = degrees.iter().map(|d| sign(d.degree) * d.dim as i64).sum();
        let euler_cohomology = degrees
            .iter()
            .map(|d| sign(d.degree) * d.cohomology as i64)
            .sum();
        ComplexReport {
            degrees,
            euler_characteristic,
            euler_cohomology,
        }
    }

    pub fn cohomology(&self, degree: i32) -> usize {
        self.degrees
            .iter()
            .find(|d| d.degree == degree)
            .map_or(0, |d| d.cohomology)
    }

    /// Nonzero cohomology dimensions by degree.
    pub fn cohomology_dims(&self) -> BTreeMap<i32, usize> {
        self.degrees
            .iter()
            .filter(|d| d.cohomology > 0)
            .map(|d| (d.degree, d.cohomology))
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees.iter().all(|d| d.cohomology == 0)
    }

    /// Degree-wise sum of two reports (direct sum of complexes).
    pub fn direct_sum(&self, other: &ComplexReport) -> ComplexReport {
        let mut acc: BTreeMap<i32, DegreeReport> = BTreeMap::new();
        for d in self.degrees.iter().chain(&other.degrees) {
            let e = acc.entry(d.degree).or_insert(DegreeReport {
                degree: d.degree,
                dim: 0,
                kernel: 0,
                image: 0,
                cohomology: 0,
            });
            e.dim += d.dim;
            e.kernel += d.kernel;
            e.image += d.image;
            e.cohomology += d.cohomology;
        }
        ComplexReport::from_degrees(acc.into_values().collect())
    }
}
