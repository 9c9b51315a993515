//! Measurement models `(H, K, η, U, F)` with a unitary interaction, their
//! model instruments and observables, and the dilation of an instrument into
//! such a model.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instrument::{luders_instrument, Instrument, QuantumOperation};
use crate::linalg::{complete_isometry_to_unitary, partial_trace_probe, tensor_product, ComplexMatrix, Tolerance, C64, ZERO};
use crate::observable::{max_commutator, parse_pair_label, Observable};
use crate::random;
use crate::state::{PartialState, State};

#[derive(Debug, Clone)]
pub struct MeasurementModel {
    dim_h: usize,
    dim_k: usize,
    eta: State,
    unitary: ComplexMatrix,
    pointer: Observable,
}

impl MeasurementModel {
    /// Checks that `eta` and `pointer` live on the same probe space and that
    /// `unitary` is a unitary on `H ⊗ K`.
    pub fn new(dim_h: usize, eta: State, unitary: ComplexMatrix, pointer: Observable, tol: &Tolerance) -> Result<Self> {
        let model = Self::from_parts_unchecked(dim_h, eta, unitary, pointer)?;
        let n = dim_h * model.dim_k;
        let defect = model.unitary.unitarity_defect();
        if defect > tol.eq_tol * (1.0 + (n as f64).sqrt()) {
            return Err(Error::NotIsometry(defect));
        }
        Ok(model)
    }

    /// Checks shapes only. The interaction may be any square matrix, which is
    /// how perturbed models are probed.
    pub fn from_parts_unchecked(dim_h: usize, eta: State, unitary: ComplexMatrix, pointer: Observable) -> Result<Self> {
        if dim_h == 0 {
            return Err(Error::BadDimension(0));
        }
        let dim_k = eta.dim();
        if pointer.dim() != dim_k {
            return Err(Error::DimensionMismatch {
                expected: dim_k,
                found: pointer.dim(),
            });
        }
        let n = dim_h * dim_k;
        if !unitary.is_square() || unitary.rows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: unitary.rows(),
            });
        }
        Ok(Self {
            dim_h,
            dim_k,
            eta,
            unitary,
            pointer,
        })
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn dim_k(&self) -> usize {
        self.dim_k
    }

    pub fn eta(&self) -> &State {
        &self.eta
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn pointer(&self) -> &Observable {
        &self.pointer
    }

    fn pointer_projector<S: AsRef<str>>(&self, subset: &[S]) -> Result<ComplexMatrix> {
        let idx = self.pointer.subset_indices(subset)?;
        let mut f = ComplexMatrix::zeros(self.dim_k, self.dim_k);
        for i in idx {
            f = &f + self.pointer.effects()[i].matrix();
        }
        Ok(tensor_product(&ComplexMatrix::identity(self.dim_h), &f))
    }

    /// `tr_K[U(m ⊗ η)U† (I ⊗ F_X)]` for an arbitrary `m` on `H`.
    pub fn model_map<S: AsRef<str>>(&self, subset: &[S], m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.dim() != self.dim_h || !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.dim_h,
                found: m.rows(),
            });
        }
        let f = self.pointer_projector(subset)?;
        let evolved = &(&self.unitary * &tensor_product(m, self.eta.matrix())) * &self.unitary.adjoint();
        partial_trace_probe(&(&evolved * &f), self.dim_h, self.dim_k)
    }

    /// Model instrument applied to a state.
    pub fn model_instrument<S: AsRef<str>>(&self, rho: &State, subset: &[S], tol: &Tolerance) -> Result<PartialState> {
        PartialState::new(self.model_map(subset, rho.matrix())?.hermitian_part(), tol)
    }

    /// `tr[U(ρ ⊗ η)U† (I ⊗ F_Z)]`, the pointer statistics on the probe side.
    pub fn pointer_probability<S: AsRef<str>>(&self, rho: &State, subset: &[S]) -> Result<f64> {
        Ok(self.model_map(subset, rho.matrix())?.trace().re)
    }

    /// `B_x = tr_K[(I ⊗ η) U† (I ⊗ F_x) U]`, computed in the Heisenberg picture.
    pub fn model_observable(&self, tol: &Tolerance) -> Result<Observable> {
        let lifted_eta = tensor_product(&ComplexMatrix::identity(self.dim_h), self.eta.matrix());
        let mats = self
            .pointer
            .labels()
            .iter()
            .map(|x| {
                let f = self.pointer_projector(&[x])?;
                let heis = &(&self.unitary.adjoint() * &f) * &self.unitary;
                Ok(partial_trace_probe(&(&lifted_eta * &heis), self.dim_h, self.dim_k)?.hermitian_part())
            })
            .collect::<Result<Vec<_>>>()?;
        Observable::from_matrices(self.pointer.labels().to_vec(), mats, tol)
    }

    /// The model instrument in Kraus form, recovered from its Choi matrices.
    pub fn to_instrument(&self, tol: &Tolerance) -> Result<Instrument> {
        let ops = self
            .pointer
            .labels()
            .iter()
            .map(|x| {
                let f = self.pointer_projector(&[x])?;
                let u = &self.unitary;
                let ud = u.adjoint();
                let (dh, dk) = (self.dim_h, self.dim_k);
                let eta = self.eta.matrix();
                QuantumOperation::from_linear_map(
                    dh,
                    |m| {
                        let evolved = &(&(u * &tensor_product(m, eta)) * &ud) * &f;
                        partial_trace_probe(&evolved, dh, dk).expect("shape checked at construction")
                    },
                    tol,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Instrument::new(self.pointer.labels().to_vec(), ops, tol)
    }
}

/// Worst `|tr(ρ B_x) − tr 𝓘_x(ρ)|` over `trials` seeded random states and
/// every singleton outcome, together with `|tr 𝓘_Ω(ρ) − 1|`.
///
/// The singleton terms agree for any interaction by cyclicity of the trace;
/// the normalization term is what exposes a non-unitary interaction.
pub fn verify_reproducing(model: &MeasurementModel, trials: usize, seed: u64, tol: &Tolerance) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = model.dim_h();
    let lifted_eta = tensor_product(&ComplexMatrix::identity(h), model.eta().matrix());
    let heisenberg: Vec<ComplexMatrix> = model
        .pointer()
        .labels()
        .iter()
        .map(|x| {
            let f = model.pointer_projector(&[x])?;
            let heis = &(&model.unitary().adjoint() * &f) * model.unitary();
            partial_trace_probe(&(&lifted_eta * &heis), h, model.dim_k())
        })
        .collect::<Result<_>>()?;
    let labels = model.pointer().labels();
    let mut worst = 0.0f64;
    for _ in 0..trials.max(1) {
        let rho = random::state(&mut rng, h, tol)?;
        let mut total = 0.0;
        for (x, b) in labels.iter().zip(&heisenberg) {
            let via_observable = rho.matrix().trace_product(b);
            let via_instrument = model.model_map(&[x], rho.matrix())?.trace().re;
            total += via_instrument;
            worst = worst.max((via_observable - via_instrument).abs());
        }
        worst = worst.max((total - 1.0).abs());
    }
    Ok(worst)
}

/// Unitary dilation of an instrument with Kraus operators `K_{x,i}`.
///
/// The probe has one basis vector `e_{x,i}` per Kraus operator, ordered by
/// label and then Kraus index, `η = |e_0⟩⟨e_0|`, and `F_x` projects onto the
/// span of `{e_{x,i}}`. The isometry `φ ↦ Σ (K_{x,i} φ) ⊗ e_{x,i}` fills the
/// columns `j·dim_k` of `U`; the canonical completion fills the rest in order.
pub fn ozawa_dilation(inst: &Instrument, tol: &Tolerance) -> Result<MeasurementModel> {
    let d = inst.dim();
    let kraus: Vec<(usize, &ComplexMatrix)> = inst
        .operations()
        .iter()
        .enumerate()
        .flat_map(|(x, op)| op.kraus().iter().map(move |k| (x, k)))
        .collect();
    let dk = kraus.len();
    if dk == 0 {
        return Err(Error::InvalidInstrument("no Kraus operators".into()));
    }
    let n = d * dk;
    let mut v = ComplexMatrix::zeros(n, d);
    for (k, (_, km)) in kraus.iter().enumerate() {
        for h in 0..d {
            for j in 0..d {
                v[(h * dk + k, j)] = km[(h, j)];
            }
        }
    }
    let full = complete_isometry_to_unitary(&v, tol).map_err(|e| match e {
        Error::NotIsometry(def) => Error::InvalidInstrument(format!("Kraus isometry defect {def:.3e}")),
        other => other,
    })?;
    let mut u = ComplexMatrix::zeros(n, n);
    let mut next_completion = d;
    for pos in 0..n {
        let src = if pos % dk == 0 {
            pos / dk
        } else {
            let s = next_completion;
            next_completion += 1;
            s
        };
        for r in 0..n {
            u[(r, pos)] = full[(r, src)];
        }
    }

    let mut anchor = vec![ZERO; dk];
    anchor[0] = C64::new(1.0, 0.0);
    let eta = State::pure(&anchor)?;
    let pointer_mats = (0..inst.labels().len())
        .map(|x| {
            let vals: Vec<f64> = kraus.iter().map(|&(owner, _)| if owner == x { 1.0 } else { 0.0 }).collect();
            ComplexMatrix::diag_real(&vals)
        })
        .collect();
    let pointer = Observable::from_matrices(inst.labels().to_vec(), pointer_mats, tol)?;
    MeasurementModel::new(d, eta, u, pointer, tol)
}

/// A model whose model observable is `b`, by dilating its Lüders instrument.
pub fn dilation_for_observable(b: &Observable, tol: &Tolerance) -> Result<MeasurementModel> {
    ozawa_dilation(&luders_instrument(b, tol)?, tol)
}

/// Coarse-grains a pointer on pair labels `(x,y)` into
/// `FA_x = Σ_y F_(x,y)` and `FB_y = Σ_x F_(x,y)`, labels in first-appearance order.
pub fn coarse_grained_pointers(model: &MeasurementModel, tol: &Tolerance) -> Result<(Observable, Observable)> {
    let f = model.pointer();
    let dk = model.dim_k();
    let mut xs: Vec<String> = Vec::new();
    let mut ys: Vec<String> = Vec::new();
    let mut fa: Vec<ComplexMatrix> = Vec::new();
    let mut fb: Vec<ComplexMatrix> = Vec::new();
    for (label, e) in f.labels().iter().zip(f.effects()) {
        let (x, y) = parse_pair_label(label)?;
        let ix = match xs.iter().position(|s| s == x) {
            Some(i) => i,
            None => {
                xs.push(x.to_string());
                fa.push(ComplexMatrix::zeros(dk, dk));
                xs.len() - 1
            }
        };
        let iy = match ys.iter().position(|s| s == y) {
            Some(i) => i,
            None => {
                ys.push(y.to_string());
                fb.push(ComplexMatrix::zeros(dk, dk));
                ys.len() - 1
            }
        };
        fa[ix] = &fa[ix] + e.matrix();
        fb[iy] = &fb[iy] + e.matrix();
    }
    Ok((Observable::from_matrices(xs, fa, tol)?, Observable::from_matrices(ys, fb, tol)?))
}

/// `max ‖[FA_x, FB_y]‖_F`.
pub fn max_cross_commutator(fa: &Observable, fb: &Observable) -> Result<f64> {
    max_commutator(fa, fb)
}
