use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::grid::{DiscGrid, GridMatrixFn};
use super::io::load_field;
use super::solver::SolverConfig;
use crate::coeff::MultiIndex;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub radius: f64,
    pub resolution: usize,
}

/// `[multi-index, field file]`; relative paths are resolved against the
/// directory of the problem document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoTerm(pub MultiIndex, pub PathBuf);

/// A gauge-fixing job as read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeProblem {
    pub grid: GridSpec,
    pub rho: Vec<RhoTerm>,
    /// Highest order `|I|` to solve; defaults to the highest order in `rho`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_det: Option<f64>,
}

impl GaugeProblem {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn solver_config(&self) -> SolverConfig {
        let d = SolverConfig::default();
        SolverConfig {
            tol: self.tol.unwrap_or(d.tol),
            max_iter: self.max_iter.unwrap_or(d.max_iter),
            min_det: self.min_det.unwrap_or(d.min_det),
            evaluation: d.evaluation,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
            .unwrap_or_else(|| self.rho.iter().map(|t| t.0.order()).max().unwrap_or(0))
    }

    /// Number of normal variables, read off the multi-indices.
    pub fn normal_dim(&self) -> Result<usize> {
        let Some(first) = self.rho.first() else {
            return Err(Error::Invalid("rho needs at least one term".into()));
        };
        let n = first.0.len();
        if self.rho.iter().any(|t| t.0.len() != n) {
            return Err(Error::Invalid(
                "rho multi-indices have different lengths".into(),
            ));
        }
        Ok(n)
    }

    pub fn build_grid(&self) -> Result<Arc<DiscGrid>> {
        Ok(Arc::new(DiscGrid::new(
            self.grid.radius,
            self.grid.resolution,
        )?))
    }

    /// Loads every field file and assembles the connection.
    pub fn connection(&self, base_dir: &Path, grid: Arc<DiscGrid>) -> Result<GridMatrixFn> {
        let n = self.normal_dim()?;
        let mut fields = Vec::new();
        for RhoTerm(index, file) in &self.rho {
            let path = base_dir.join(file);
            let (g, field) = load_field(&path)?;
            if g != grid.resolution() {
                return Err(Error::Invalid(format!(
                    "{} has resolution {g}, grid has {}",
                    path.display(),
                    grid.resolution()
                )));
            }
            fields.push((index.clone(), field));
        }
        let (rows, cols) = (fields[0].1.rows(), fields[0].1.cols());
        let mut rho = GridMatrixFn::new(grid, n, rows, cols);
        for (index, field) in fields {
            if rho.term(&index).is_some() {
                return Err(Error::Invalid(format!(
                    "rho term {:?} given twice",
                    index.exponents()
                )));
            }
            rho.insert(index, field)?;
        }
        Ok(rho)
    }
}
