//! States, partial states and the conditioning operations on them.

use crate::effect::{sandwich, Effect};
use crate::error::{Error, Result};
use crate::linalg::{psd_eigh, vector_norm, ComplexMatrix, Tolerance, C64};
use crate::observable::Observable;

/// Positive operator with `tr ρ ≤ 1`.
#[derive(Debug, Clone)]
pub struct PartialState {
    matrix: ComplexMatrix,
    trace: f64,
}

/// Positive operator with unit trace.
#[derive(Debug, Clone)]
pub struct State {
    matrix: ComplexMatrix,
}

fn validate_positive(m: &ComplexMatrix, tol: &Tolerance) -> Result<(ComplexMatrix, f64)> {
    psd_eigh(m, tol)?;
    let h = m.hermitian_part();
    let tr = h.trace().re;
    Ok((h, tr))
}

impl PartialState {
    pub fn new(m: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let (matrix, trace) = validate_positive(&m, tol)?;
        if trace > 1.0 + tol.eq_tol {
            return Err(Error::BadTrace(trace));
        }
        Ok(Self { matrix, trace })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `ρ / tr ρ`.
    pub fn normalized(&self, tol: &Tolerance) -> Result<State> {
        if self.trace <= tol.psd_tol {
            return Err(Error::ConditioningOnNull(self.trace));
        }
        State::new(self.matrix.scale_real(1.0 / self.trace), tol)
    }
}

impl State {
    pub fn new(m: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let (matrix, trace) = validate_positive(&m, tol)?;
        if (trace - 1.0).abs() > tol.eq_tol * (1.0 + (m.dim() as f64).sqrt()) {
            return Err(Error::BadTrace(trace));
        }
        Ok(Self { matrix })
    }

    /// `I / d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// The pure state `P_φ̂`.
    pub fn pure(phi: &[C64]) -> Result<Self> {
        let norm = vector_norm(phi);
        if norm == 0.0 {
            return Err(Error::Empty("vector"));
        }
        let unit: Vec<C64> = phi.iter().map(|z| z / norm).collect();
        Ok(Self {
            matrix: ComplexMatrix::ket_bra(&unit, &unit),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Rank one, i.e. `tr ρ² = 1`.
    pub fn is_pure(&self, tol: &Tolerance) -> bool {
        (self.matrix.trace_product(&self.matrix) - 1.0).abs() <= tol.eq_tol * 10.0
    }

    pub fn as_partial(&self) -> PartialState {
        PartialState {
            matrix: self.matrix.clone(),
            trace: self.trace(),
        }
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Clamps a probability that may carry roundoff; anything further than
/// `eq_tol` outside `[0, 1]` signals a bug upstream.
pub(crate) fn clamp_probability(p: f64, tol: &Tolerance) -> Result<f64> {
    if p < -tol.eq_tol || p > 1.0 + tol.eq_tol || p.is_nan() {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// `𝓟_ρ(a) = tr(ρa)`.
pub fn prob_of_effect(rho: &State, a: &Effect, tol: &Tolerance) -> Result<f64> {
    check_dim(rho.dim(), a.dim())?;
    clamp_probability(rho.matrix().trace_product(a.matrix()), tol)
}

/// `(ρ | a) = a^{1/2} ρ a^{1/2}`.
pub fn condition_state_effect(rho: &State, a: &Effect, tol: &Tolerance) -> Result<PartialState> {
    check_dim(rho.dim(), a.dim())?;
    PartialState::new(sandwich(a, rho.matrix()).hermitian_part(), tol)
}

/// `tr[ρ (a∘b)] / tr(ρa)`.
pub fn conditional_probability(rho: &State, b: &Effect, a: &Effect, tol: &Tolerance) -> Result<f64> {
    check_dim(rho.dim(), a.dim())?;
    check_dim(rho.dim(), b.dim())?;
    let pa = rho.matrix().trace_product(a.matrix());
    if pa <= tol.psd_tol {
        return Err(Error::ConditioningOnNull(pa));
    }
    let pab = rho.matrix().trace_product(&sandwich(a, b.matrix()));
    clamp_probability(pab / pa, tol)
}

/// `(ρ | A) = Σ_x A_x^{1/2} ρ A_x^{1/2}`.
pub fn condition_state_observable(rho: &State, a: &Observable, tol: &Tolerance) -> Result<State> {
    check_dim(rho.dim(), a.dim())?;
    let out: ComplexMatrix = a
        .effects()
        .iter()
        .map(|e| sandwich(e, rho.matrix()))
        .sum();
    State::new(out.hermitian_part(), tol)
}
