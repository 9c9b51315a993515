//! JSON documents for matrices, effects, states, observables, instruments,
//! measurement models and additivity witnesses.
//!
//! A matrix is `{"dim": n, "entries": [[re, im], ...]}` in row-major order.

use serde::{Deserialize, Serialize};

use crate::effect::Effect;
use crate::error::{Error, Result};
use crate::instrument::{AdditivityWitness, Instrument, QuantumOperation};
use crate::linalg::{ComplexMatrix, Tolerance, C64};
use crate::model::MeasurementModel;
use crate::observable::Observable;
use crate::qubit::bloch_state;
use crate::state::State;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.rows(),
            entries: m.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.dim == 0 || self.entries.len() != self.dim * self.dim {
            return Err(Error::Parse(format!(
                "matrix of dim {} needs {} entries, found {}",
                self.dim,
                self.dim * self.dim,
                self.entries.len()
            )));
        }
        let data = self.entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::from_vec(self.dim, self.dim, data)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EffectDoc {
    #[serde(flatten)]
    pub matrix: MatrixDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl EffectDoc {
    pub fn from_effect(e: &Effect, label: Option<&str>) -> Self {
        Self {
            matrix: MatrixDoc::from_matrix(e.matrix()),
            label: label.map(str::to_string),
        }
    }

    pub fn to_effect(&self, tol: &Tolerance) -> Result<Effect> {
        Effect::new(self.matrix.to_matrix()?, tol)
    }
}

/// Either a density matrix or, for a qubit, a Bloch vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateDoc {
    Bloch { bloch: [f64; 3] },
    Matrix(MatrixDoc),
}

impl StateDoc {
    pub fn from_state(s: &State) -> Self {
        StateDoc::Matrix(MatrixDoc::from_matrix(s.matrix()))
    }

    pub fn to_state(&self, tol: &Tolerance) -> Result<State> {
        match self {
            StateDoc::Bloch { bloch } => bloch_state(*bloch, tol),
            StateDoc::Matrix(m) => State::new(m.to_matrix()?, tol),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObservableDoc {
    pub labels: Vec<String>,
    pub effects: Vec<MatrixDoc>,
}

impl ObservableDoc {
    pub fn from_observable(o: &Observable) -> Self {
        Self {
            labels: o.labels().to_vec(),
            effects: o.effects().iter().map(|e| MatrixDoc::from_matrix(e.matrix())).collect(),
        }
    }

    pub fn to_observable(&self, tol: &Tolerance) -> Result<Observable> {
        let mats = self.effects.iter().map(MatrixDoc::to_matrix).collect::<Result<Vec<_>>>()?;
        Observable::from_matrices(self.labels.clone(), mats, tol)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstrumentDoc {
    pub labels: Vec<String>,
    pub kraus: Vec<Vec<MatrixDoc>>,
}

impl InstrumentDoc {
    pub fn from_instrument(inst: &Instrument) -> Self {
        Self {
            labels: inst.labels().to_vec(),
            kraus: inst
                .operations()
                .iter()
                .map(|op| op.kraus().iter().map(MatrixDoc::from_matrix).collect())
                .collect(),
        }
    }

    pub fn to_instrument(&self, tol: &Tolerance) -> Result<Instrument> {
        if self.labels.len() != self.kraus.len() {
            return Err(Error::LabelMismatch);
        }
        let ops = self
            .kraus
            .iter()
            .map(|ks| {
                let mats = ks.iter().map(MatrixDoc::to_matrix).collect::<Result<Vec<_>>>()?;
                QuantumOperation::new(mats, tol)
            })
            .collect::<Result<Vec<_>>>()
            .map_err(|e| match e {
                Error::DimensionMismatch { .. } | Error::Empty(_) => Error::InvalidInstrument(e.to_string()),
                other => other,
            })?;
        Instrument::new(self.labels.clone(), ops, tol)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDoc {
    #[serde(rename = "dimH")]
    pub dim_h: usize,
    #[serde(rename = "dimK")]
    pub dim_k: usize,
    pub eta: MatrixDoc,
    pub unitary: MatrixDoc,
    pub pointer: ObservableDoc,
}

impl ModelDoc {
    pub fn from_model(m: &MeasurementModel) -> Self {
        Self {
            dim_h: m.dim_h(),
            dim_k: m.dim_k(),
            eta: MatrixDoc::from_matrix(m.eta().matrix()),
            unitary: MatrixDoc::from_matrix(m.unitary()),
            pointer: ObservableDoc::from_observable(m.pointer()),
        }
    }

    pub fn to_model(&self, tol: &Tolerance) -> Result<MeasurementModel> {
        let eta = State::new(self.eta.to_matrix()?, tol)?;
        if eta.dim() != self.dim_k {
            return Err(Error::DimensionMismatch {
                expected: self.dim_k,
                found: eta.dim(),
            });
        }
        MeasurementModel::new(self.dim_h, eta, self.unitary.to_matrix()?, self.pointer.to_observable(tol)?, tol)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub restart: usize,
    pub seed: u64,
    pub restarts: usize,
    pub state: MatrixDoc,
    pub a: ObservableDoc,
    pub b: ObservableDoc,
    pub x1: Vec<String>,
    pub x2: Vec<String>,
    pub y: Vec<String>,
    pub gap: f64,
}

impl WitnessDoc {
    pub fn from_witness(w: &AdditivityWitness, seed: u64, restarts: usize) -> Self {
        Self {
            restart: w.restart,
            seed,
            restarts,
            state: MatrixDoc::from_matrix(w.state.matrix()),
            a: ObservableDoc::from_observable(&w.a),
            b: ObservableDoc::from_observable(&w.b),
            x1: w.x1.clone(),
            x2: w.x2.clone(),
            y: w.y.clone(),
            gap: w.gap,
        }
    }

    pub fn to_witness(&self, tol: &Tolerance) -> Result<AdditivityWitness> {
        Ok(AdditivityWitness {
            restart: self.restart,
            state: State::new(self.state.to_matrix()?, tol)?,
            a: self.a.to_observable(tol)?,
            b: self.b.to_observable(tol)?,
            x1: self.x1.clone(),
            x2: self.x2.clone(),
            y: self.y.clone(),
            gap: self.gap,
        })
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

pub fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn matrix_entry_count_checked() {
        let doc: MatrixDoc = from_json(r#"{"dim": 2, "entries": [[1,0],[0,0],[0,0]]}"#).unwrap();
        assert!(matches!(doc.to_matrix(), Err(Error::Parse(_))));
    }

    #[test]
    fn full_precision_read() {
        let x = 0.1_f64 + 0.2;
        let doc = MatrixDoc::from_matrix(&ComplexMatrix::diag_real(&[x]));
        let back: MatrixDoc = from_json(&to_json(&doc)).unwrap();
        assert_eq!(back.to_matrix().unwrap()[(0, 0)].re, x);
    }

    #[test]
    fn state_forms() {
        let s: StateDoc = from_json(r#"{"bloch": [0, 0, 1]}"#).unwrap();
        let s = s.to_state(&tol()).unwrap();
        assert!(s.matrix().distance(&ComplexMatrix::diag_real(&[1.0, 0.0])) < 1e-15);
        let s: StateDoc = from_json(r#"{"dim": 2, "entries": [[0.5,0],[0,0],[0,0],[0.5,0]]}"#).unwrap();
        assert!(s.to_state(&tol()).is_ok());
    }

    #[test]
    fn effect_label_optional() {
        let e: EffectDoc = from_json(r#"{"dim": 1, "entries": [[0.5, 0]], "label": "half"}"#).unwrap();
        assert_eq!(e.label.as_deref(), Some("half"));
        assert!(e.to_effect(&tol()).is_ok());
        let e: EffectDoc = from_json(r#"{"dim": 1, "entries": [[0.5, 0]]}"#).unwrap();
        assert!(e.label.is_none());
    }

    #[test]
    fn model_field_names() {
        let m = crate::model::dilation_for_observable(&Observable::trivial(2, "u"), &tol()).unwrap();
        let text = to_json(&ModelDoc::from_model(&m));
        assert!(text.contains("\"dimH\"") && text.contains("\"dimK\""));
        let back: ModelDoc = from_json(&text).unwrap();
        assert!(back.to_model(&tol()).is_ok());
    }
}
