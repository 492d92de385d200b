//! JSON state files: `{"dims": [...], "kind": "pure"|"mixed", "data": [[re, im], ...]}`
//! with mixed states flattened row-major.
//!
//! Floats are written in shortest round-trip form, so a save/load cycle
//! reproduces every amplitude bit for bit.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GefError, Result};
use crate::qmat::{ComplexMatrix, DensityMatrix, PartyDims, PureState, State};

/// Tolerance applied when validating a loaded state.
pub const LOAD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub kind: StateKind,
    pub data: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &State) -> Self {
        let (kind, data) = match state {
            State::Pure(p) => (StateKind::Pure, p.amplitudes()),
            State::Mixed(m) => (StateKind::Mixed, m.matrix().as_slice()),
        };
        Self {
            dims: state.dims().as_slice().to_vec(),
            kind,
            data: data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    /// Validates the file against the pure-state or density-matrix invariants.
    pub fn to_state(&self) -> Result<State> {
        let dims = PartyDims::new(self.dims.clone())?;
        let data: Vec<Complex64> = self
            .data
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        match self.kind {
            StateKind::Pure => Ok(State::Pure(PureState::with_tolerance(data, dims, LOAD_TOL)?)),
            StateKind::Mixed => {
                let d = dims.total();
                if data.len() != d * d {
                    return Err(GefError::Shape(format!(
                        "mixed state over dims {dims} needs {} entries, got {}",
                        d * d,
                        data.len()
                    )));
                }
                let m = ComplexMatrix::from_vec(d, d, data)?;
                Ok(State::Mixed(DensityMatrix::with_tolerance(m, dims, LOAD_TOL)?))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GefError::Config(format!("bad state file: {e}")))
    }
}

pub fn load(path: &Path) -> Result<State> {
    let text = fs::read_to_string(path)
        .map_err(|e| GefError::Config(format!("cannot read {}: {e}", path.display())))?;
    StateFile::from_json(&text)?.to_state()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::catalog::{ghz, werner};
    use crate::qmat::{random_density, random_haar_pure, RandomSource};
    use proptest::prelude::*;

    #[test]
    fn rejects_unnormalized_and_wrong_shapes() {
        let f = StateFile {
            dims: vec![2],
            kind: StateKind::Pure,
            data: vec![[1.0, 0.0], [1.0, 0.0]],
        };
        assert!(matches!(f.to_state(), Err(GefError::NotNormalized(_))));
        let f = StateFile {
            dims: vec![2, 2],
            kind: StateKind::Mixed,
            data: vec![[0.25, 0.0]; 4],
        };
        assert!(matches!(f.to_state(), Err(GefError::Shape(_))));
        assert!(StateFile::from_json(r#"{"dims":[2],"kind":"pure"}"#).is_err());
        assert!(StateFile::from_json(r#"{"dims":[2],"kind":"odd","data":[]}"#).is_err());
    }

    #[test]
    fn json_layout() {
        let f = StateFile::from_state(&State::Pure(ghz(2).unwrap()));
        let v: serde_json::Value = serde_json::from_str(&f.to_json()).unwrap();
        assert_eq!(v["kind"], "pure");
        assert_eq!(v["dims"], serde_json::json!([2, 2]));
        assert_eq!(v["data"].as_array().unwrap().len(), 4);
        let w = StateFile::from_state(&State::Mixed(werner(0.5).unwrap()));
        assert_eq!(w.data.len(), 16);
        assert_eq!(w.kind, StateKind::Mixed);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn round_trip_is_bit_exact(seed in any::<u64>(), mixed in any::<bool>()) {
            let mut rng = RandomSource::new(seed);
            let dims = PartyDims::qubits(3);
            let state = if mixed {
                State::Mixed(random_density(&dims, 3, &mut rng).unwrap())
            } else {
                State::Pure(random_haar_pure(&dims, &mut rng))
            };
            let file = StateFile::from_state(&state);
            let back = StateFile::from_json(&file.to_json()).unwrap();
            prop_assert_eq!(&back, &file);
            let loaded = back.to_state().unwrap();
            prop_assert_eq!(StateFile::from_state(&loaded), file);
        }
    }
}
