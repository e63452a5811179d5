use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cohesive::{HomDoc, ModuleDoc};
use crate::descent::{PatchModuleDoc, PatchSet, TripleDoc};
use crate::error::{Error, Result};
use crate::gauge::RhoTerm;
use crate::model::ModelConfig;

/// Input of `cone`: a map and its endpoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeInput {
    pub source: ModuleDoc,
    pub target: ModuleDoc,
    pub map: HomDoc,
}

/// A two-set cover of patch identifiers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cover {
    pub s1: PatchSet,
    pub s2: PatchSet,
}

/// Input of `glue`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlueInput {
    pub cover: Cover,
    pub triple: TripleDoc,
}

/// Input of `roundtrip`: a cover, the model, an optional module over the
/// union and the number of seeded samples of each kind.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundtripInput {
    pub cover: Cover,
    pub config: ModelConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<PatchModuleDoc>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    5
}

/// Stored gauge: `[multi-index, field file]` pairs, paths relative to the
/// document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub gauge: Vec<RhoTerm>,
}

impl SolutionDoc {
    /// Accepts either `{gauge: [...]}` or a `gauge-solve` report, whose
    /// `results.gauge` has the same shape.
    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        let gauge = value
            .get("gauge")
            .or_else(|| value.get("results").and_then(|r| r.get("gauge")))
            .ok_or_else(|| Error::Invalid("solution document has no gauge list".into()))?;
        Ok(SolutionDoc {
            gauge: serde_json::from_value(gauge.clone())?,
        })
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}
