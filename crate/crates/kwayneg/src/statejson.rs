//! JSON schema for states shared with the CLI. Pure states list sparse
//! amplitude entries; mixed states list lower-triangle matrix entries with
//! Hermitian completion implied. Omitted entries are zero.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::multistate::{DensityOperator, MultiIndex, PureState, SubsystemDims};
use crate::ptranspose::{TransposeKind, TransposedOperator};
use crate::types::{c, CMatrix, CVector};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pure: Option<PureJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixed: Option<MixedJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PureJson {
    pub amplitudes: Vec<AmplitudeEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmplitudeEntry {
    pub index: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixedJson {
    pub entries: Vec<MatrixEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixEntry {
    pub row: Vec<usize>,
    pub col: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

/// Transpose provenance attached to serialized transposed operators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProvenanceJson {
    /// 1-based transposed subsystem.
    pub subsystem: usize,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<usize>>,
}

/// A state loaded from JSON: pure or mixed.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Pure(PureState),
    Mixed(DensityOperator),
}

impl LoadedState {
    pub fn density(&self) -> DensityOperator {
        match self {
            LoadedState::Pure(psi) => crate::multistate::pure_to_density(psi),
            LoadedState::Mixed(rho) => rho.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            LoadedState::Pure(psi) => Some(psi),
            LoadedState::Mixed(_) => None,
        }
    }
}

pub fn from_json(doc: &StateJson) -> Result<LoadedState> {
    let dims = SubsystemDims::new(doc.dims.clone())?;
    match (&doc.pure, &doc.mixed) {
        (Some(pure), None) => {
            let mut amps = CVector::zeros(dims.total_dim());
            for entry in &pure.amplitudes {
                let flat = dims.encode(&MultiIndex::new(entry.index.clone()))?;
                amps[flat] = c(entry.re, entry.im);
            }
            Ok(LoadedState::Pure(PureState::new(dims, amps)?))
        }
        (None, Some(mixed)) => {
            let d = dims.total_dim();
            let mut m = CMatrix::zeros(d, d);
            for entry in &mixed.entries {
                let r = dims.encode(&MultiIndex::new(entry.row.clone()))?;
                let col = dims.encode(&MultiIndex::new(entry.col.clone()))?;
                let v = c(entry.re, entry.im);
                m[(r, col)] = v;
                if r != col {
                    m[(col, r)] = v.conj();
                }
            }
            Ok(LoadedState::Mixed(DensityOperator::new(dims, m)?))
        }
        _ => Err(Error::InvalidParameter(
            "state JSON must carry exactly one of \"pure\" or \"mixed\"".into(),
        )),
    }
}

pub fn pure_to_json(psi: &PureState) -> StateJson {
    let dims = psi.dims();
    let amplitudes = (0..dims.total_dim())
        .filter(|&f| psi.amplitude(f).norm() > 0.0)
        .map(|f| AmplitudeEntry {
            index: dims.decode(f).indices().to_vec(),
            re: psi.amplitude(f).re,
            im: psi.amplitude(f).im,
        })
        .collect();
    StateJson {
        dims: dims.dims().to_vec(),
        pure: Some(PureJson { amplitudes }),
        mixed: None,
        provenance: None,
    }
}

fn matrix_entries(dims: &SubsystemDims, m: &CMatrix) -> Vec<MatrixEntry> {
    let d = dims.total_dim();
    let mut entries = Vec::new();
    for r in 0..d {
        for col in 0..=r {
            let v = m[(r, col)];
            if v.norm() > 0.0 {
                entries.push(MatrixEntry {
                    row: dims.decode(r).indices().to_vec(),
                    col: dims.decode(col).indices().to_vec(),
                    re: v.re,
                    im: v.im,
                });
            }
        }
    }
    entries
}

pub fn mixed_to_json(rho: &DensityOperator) -> StateJson {
    StateJson {
        dims: rho.dims().dims().to_vec(),
        pure: None,
        mixed: Some(MixedJson { entries: matrix_entries(rho.dims(), rho.matrix()) }),
        provenance: None,
    }
}

pub fn transposed_to_json(t: &TransposedOperator) -> StateJson {
    let provenance = match t.kind() {
        TransposeKind::Global => ProvenanceJson {
            subsystem: t.subsystem() + 1,
            kind: "global".into(),
            k: None,
            subset: None,
        },
        TransposeKind::KWay(k) => ProvenanceJson {
            subsystem: t.subsystem() + 1,
            kind: "kway".into(),
            k: Some(*k),
            subset: None,
        },
        TransposeKind::Subset(s) => ProvenanceJson {
            subsystem: t.subsystem() + 1,
            kind: "subset".into(),
            k: None,
            subset: Some(s.iter().map(|&m| m + 1).collect::<Vec<_>>()),
        },
    };
    StateJson {
        dims: t.dims().dims().to_vec(),
        pure: None,
        mixed: Some(MixedJson { entries: matrix_entries(t.dims(), t.matrix()) }),
        provenance: Some(provenance),
    }
}

/// Subset kinds round-trip through provenance for display; reconstruction
/// helper used by tests.
pub fn provenance_subset(p: &ProvenanceJson) -> Option<BTreeSet<usize>> {
    p.subset.as_ref().map(|s| s.iter().map(|&m| m - 1).collect())
}
