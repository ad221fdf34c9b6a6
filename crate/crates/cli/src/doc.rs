use std::path::Path;

use serde::{Deserialize, Serialize};
use spkl_core::sparse_paving::SparsePavingMatroid;

use crate::report::Failure;

/// On-disk form of a sparse paving matroid: `{"m": 3, "d": 3, "ch": [[1,2,3],[4,5,6]]}`,
/// elements 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChDocument {
    pub m: u32,
    pub d: u32,
    pub ch: Vec<Vec<u32>>,
}

impl ChDocument {
    pub fn read(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, Failure> {
        serde_json::from_str(text).map_err(|e| Failure::Input(format!("malformed CH document: {e}")))
    }

    pub fn to_matroid(&self) -> Result<SparsePavingMatroid, Failure> {
        Ok(SparsePavingMatroid::from_one_based(self.m, self.d, &self.ch)?)
    }

    /// Canonical form: members sorted, elements sorted within members.
    pub fn from_matroid(matroid: &SparsePavingMatroid) -> Self {
        Self {
            m: matroid.m(),
            d: matroid.d(),
            ch: matroid.ch().iter().map(|c| c.to_one_based()).collect(),
        }
    }
}
