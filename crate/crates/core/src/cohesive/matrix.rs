use crate::coeff::Scalar;
use crate::error::{Error, Result};
use crate::model::{dbar, wedge, FormDoc, ModelConfig, Space, TruncatedForm};

/// Dense matrix of quotient-model forms. Products multiply entries in order
/// (`(AB)_ij = sum_k A_ik ^ B_kj`), matching the right-module convention.
#[derive(Clone, PartialEq, Eq)]
pub struct FormMatrix {
    config: ModelConfig,
    rows: usize,
    cols: usize,
    entries: Vec<TruncatedForm>,
}

impl FormMatrix {
    pub fn zeros(config: ModelConfig, rows: usize, cols: usize) -> Self {
        FormMatrix {
            config,
            rows,
            cols,
            entries: vec![TruncatedForm::zero(config, Space::Quotient); rows * cols],
        }
    }

    pub fn identity(config: ModelConfig, n: usize) -> Self {
        let mut m = Self::zeros(config, n, n);
        for i in 0..n {
            m.set(i, i, TruncatedForm::one(config, Space::Quotient));
        }
        m
    }

    /// Builds a matrix from rows; every entry must live in the quotient model
    /// of `config`.
    pub fn from_rows(
        config: ModelConfig,
        rows: usize,
        cols: usize,
        data: Vec<Vec<TruncatedForm>>,
    ) -> Result<Self> {
        if data.len() != rows || data.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch(format!(
                "expected a {rows}x{cols} matrix"
            )));
        }
        let entries: Vec<TruncatedForm> = data.into_iter().flatten().collect();
        for e in &entries {
            if *e.config() != config || e.space() != Space::Quotient {
                return Err(Error::ModelMismatch(
                    "matrix entries must be quotient-model forms".into(),
                ));
            }
        }
        Ok(FormMatrix {
            config,
            rows,
            cols,
            entries,
        })
    }

    pub fn scalar_identity(config: ModelConfig, n: usize, s: &Scalar) -> Self {
        Self::identity(config, n).scale(s)
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncatedForm {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: TruncatedForm) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[TruncatedForm] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(TruncatedForm::is_zero)
    }

    /// True when every nonzero entry is homogeneous of form degree `k`.
    pub fn is_homogeneous(&self, k: usize) -> bool {
        self.entries
            .iter()
            .all(|e| e.is_zero() || e.homogeneous_degree() == Some(k))
    }

    pub fn mul(&self, other: &FormMatrix) -> Result<FormMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.config != other.config {
            return Err(Error::ModelMismatch(
                "matrices over different models".into(),
            ));
        }
        let mut out = Self::zeros(self.config, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx] = out.entries[idx].add(&wedge(a, b)?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &FormMatrix) -> Result<FormMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(FormMatrix {
            entries,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &FormMatrix) -> Result<FormMatrix> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FormMatrix {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> FormMatrix {
        FormMatrix {
            entries: self.entries.iter().map(|e| e.scale(s)).collect(),
            ..self.clone()
        }
    }

    /// `(-1)^e * self`.
    pub fn signed(&self, exponent: i64) -> FormMatrix {
        if exponent.rem_euclid(2) == 0 {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// Entrywise left multiplication by a form: `(f A)_ij = f ^ A_ij`.
    pub fn left_mul_form(&self, f: &TruncatedForm) -> Result<FormMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| wedge(f, e))
            .collect::<Result<_>>()?;
        Ok(FormMatrix {
            entries,
            ..self.clone()
        })
    }

    /// Entrywise right multiplication by a form: `(A f)_ij = A_ij ^ f`.
    pub fn scale_form(&self, f: &TruncatedForm) -> Result<FormMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| wedge(e, f))
            .collect::<Result<_>>()?;
        Ok(FormMatrix {
            entries,
            ..self.clone()
        })
    }

    pub fn dbar(&self) -> FormMatrix {
        FormMatrix {
            entries: self.entries.iter().map(dbar).collect(),
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> FormMatrix {
        let mut out = Self::zeros(self.config, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Copies `block` into position `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &FormMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> FormMatrix {
        let mut out = Self::zeros(self.config, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    /// Inverse of a degree-0 matrix whose constant part is invertible, by
    /// Gauss-Jordan elimination with unit pivots.
    pub fn inverse(&self) -> Result<FormMatrix> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(
                "only square matrices can be inverted".into(),
            ));
        }
        if !self.is_homogeneous(0) {
            return Err(Error::Invalid(
                "only degree-0 matrices can be inverted".into(),
            ));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(self.config, n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).constant_term().is_zero())
                .ok_or(Error::DivisionByZero)?;
            if pivot != col {
                for j in 0..n {
                    a.entries.swap(pivot * n + j, col * n + j);
                    inv.entries.swap(pivot * n + j, col * n + j);
                }
            }
            let p_inv = a.get(col, col).inverse()?;
            for j in 0..n {
                a.set(col, j, wedge(&p_inv, a.get(col, j))?);
                inv.set(col, j, wedge(&p_inv, inv.get(col, j))?);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let na = a.get(r, j).sub(&wedge(&factor, a.get(col, j))?)?;
                    let ni = inv.get(r, j).sub(&wedge(&factor, inv.get(col, j))?)?;
                    a.set(r, j, na);
                    inv.set(r, j, ni);
                }
            }
        }
        Ok(inv)
    }

    pub fn to_doc(&self) -> MatrixDoc {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).to_doc(false))
                    .collect()
            })
            .collect()
    }

    pub fn from_doc(
        config: ModelConfig,
        rows: usize,
        cols: usize,
        doc: &MatrixDoc,
    ) -> Result<Self> {
        let data = doc
            .iter()
            .map(|row| {
                row.iter()
                    .map(|f| TruncatedForm::from_doc(f, Some(config)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(config, rows, cols, data)
    }
}

impl std::fmt::Debug for FormMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list()
            .entries(
                (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect::<Vec<_>>()),
            )
            .finish()
    }
}

/// Wire form of a matrix: nested rows of forms without embedded config.
pub type MatrixDoc = Vec<Vec<FormDoc>>;

#[cfg(test)]
mod tests {
    use super::*;

    fn z(c: ModelConfig) -> TruncatedForm {
        TruncatedForm::z(c, Space::Quotient, 0)
    }

    #[test]
    fn inverse_of_unipotent() {
        let c = ModelConfig::point(1, 3);
        let one = TruncatedForm::one(c, Space::Quotient);
        let m = FormMatrix::from_rows(
            c,
            2,
            2,
            vec![
                vec![one.add(&z(c)).unwrap(), z(c)],
                vec![TruncatedForm::zero(c, Space::Quotient), one.clone()],
            ],
        )
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FormMatrix::identity(c, 2));
        assert_eq!(inv.mul(&m).unwrap(), FormMatrix::identity(c, 2));
    }

    #[test]
    fn singular_matrix_rejected() {
        let c = ModelConfig::point(1, 2);
        let m = FormMatrix::from_rows(c, 1, 1, vec![vec![z(c)]]).unwrap();
        assert_eq!(m.inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn shape_errors() {
        let c = ModelConfig::point(1, 1);
        let a = FormMatrix::zeros(c, 2, 3);
        assert!(matches!(a.mul(&a), Err(Error::ShapeMismatch(_))));
        assert!(a.add(&FormMatrix::zeros(c, 3, 2)).is_err());
    }
}
