//! On-disk JSON formats.  Scalars are serialized as strings: `num/den` in
//! lowest terms (integer shorthand allowed) over the rationals, decimal
//! residues over a prime field.  Serialization is canonical so identical
//! runs produce byte-identical files.

use serde::{Deserialize, Serialize};

use crate::cover::{CompatibleSet, EqualityReport, GeneratingSet};
use crate::certificate::CostReport;
use crate::error::{Error, Result};
use crate::flag::{Flag, FlagTuple};
use crate::matrix::Matrix;
use crate::prism::{LayerRef, FLAG_NAMES};
use crate::scalar::{FieldSpec, Scalar};

/// Flag-tuple file: `{"field": ..., "d": n, "flags": [matrix, ...]}` where
/// a matrix is a list of d columns of d scalar strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlagFile {
    pub field: FieldSpec,
    pub d: usize,
    pub flags: Vec<Vec<Vec<String>>>,
}

impl FlagFile {
    pub fn from_tuple(t: &FlagTuple) -> Self {
        let d = t.d();
        let flags = t
            .flags()
            .iter()
            .map(|f| {
                (0..d)
                    .map(|j| (0..d).map(|i| f.basis().get(i, j).to_string()).collect())
                    .collect()
            })
            .collect();
        FlagFile { field: t.field(), d, flags }
    }

    pub fn to_tuple(&self) -> Result<FlagTuple> {
        let d = self.d;
        let flags = self
            .flags
            .iter()
            .map(|cols| {
                if cols.len() != d {
                    return Err(Error::Parse(format!(
                        "expected {d} columns, found {}",
                        cols.len()
                    )));
                }
                let mut m = Matrix::zeros(self.field, d, d);
                for (j, col) in cols.iter().enumerate() {
                    if col.len() != d {
                        return Err(Error::Parse(format!(
                            "column {j} has {} entries, expected {d}",
                            col.len()
                        )));
                    }
                    for (i, s) in col.iter().enumerate() {
                        m.set(i, j, self.field.parse(s)?);
                    }
                }
                Flag::new(m)
            })
            .collect::<Result<Vec<_>>>()?;
        FlagTuple::new(flags)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LayerEntry {
    pub flag: String,
    pub level: usize,
}

impl LayerEntry {
    pub fn from_ref(l: LayerRef) -> Self {
        LayerEntry { flag: l.flag_name(), level: l.level }
    }

    pub fn to_ref(&self) -> Result<LayerRef> {
        let flag = match FLAG_NAMES.iter().position(|&n| n == self.flag) {
            Some(i) => i,
            None => self
                .flag
                .strip_prefix('F')
                .and_then(|rest| rest.parse().ok())
                .ok_or_else(|| Error::Parse(format!("unknown flag name `{}`", self.flag)))?,
        };
        Ok(LayerRef::new(flag, self.level))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenSetEntry {
    pub layers: Vec<LayerEntry>,
    pub witness: Vec<String>,
}

/// Generating-set file: `{"size": n, "sets": [{"layers": [...], "witness":
/// [...]}, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenSetFile {
    pub size: usize,
    pub sets: Vec<GenSetEntry>,
}

impl GenSetFile {
    pub fn from_generating_set(gs: &GeneratingSet) -> Self {
        let sets = gs
            .sets
            .iter()
            .map(|s| GenSetEntry {
                layers: s.layers.iter().copied().map(LayerEntry::from_ref).collect(),
                witness: s.witness.iter().map(Scalar::to_string).collect(),
            })
            .collect();
        GenSetFile { size: gs.size(), sets }
    }

    pub fn to_generating_set(&self, field: FieldSpec) -> Result<GeneratingSet> {
        let sets = self
            .sets
            .iter()
            .map(|e| {
                Ok(CompatibleSet {
                    layers: e.layers.iter().map(LayerEntry::to_ref).collect::<Result<_>>()?,
                    witness: e
                        .witness
                        .iter()
                        .map(|s| field.parse(s))
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratingSet { sets })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleEntry {
    pub length: usize,
    pub vertices: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassSizes {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

/// Full analysis of a triple: pairing permutations, cycle list, class
/// sizes, extremality verdict, and the cost certificate.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisFile {
    pub d: usize,
    pub field: FieldSpec,
    pub sigma_uv: Vec<usize>,
    pub sigma_vw: Vec<usize>,
    pub sigma_wu: Vec<usize>,
    pub cycles: Vec<CycleEntry>,
    pub classification: ClassSizes,
    pub equality_candidate: EqualityReport,
    pub certificate: CostReport,
}

impl AnalysisFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}
