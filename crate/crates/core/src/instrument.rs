//! Quantum operations in Kraus form, instruments, and the three competing
//! definitions of the joint probability "`A_X` then `B_Y`".

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::effect::{sandwich, Effect};
use crate::error::{Error, Result};
use crate::linalg::{psd_eigh, ComplexMatrix, Tolerance, C64};
use crate::observable::{index_labels, Observable};
use crate::qubit::bloch_effect_matrix;
use crate::state::{clamp_probability, PartialState, State};

/// Eigen-weights below this are dropped when turning spectra into Kraus sets.
const KRAUS_CUTOFF: f64 = 1e-14;

/// Completely positive trace-nonincreasing map `ρ ↦ Σ_i K_i ρ K_i†`.
#[derive(Debug, Clone)]
pub struct QuantumOperation {
    kraus: Vec<ComplexMatrix>,
    sum_kk: ComplexMatrix,
}

impl QuantumOperation {
    pub fn new(kraus: Vec<ComplexMatrix>, tol: &Tolerance) -> Result<Self> {
        let first = kraus.first().ok_or(Error::Empty("Kraus list"))?;
        let d = first.rows();
        for k in &kraus {
            if !k.is_square() || k.rows() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: if k.rows() != d { k.rows() } else { k.cols() },
                });
            }
        }
        let sum_kk: ComplexMatrix = kraus.iter().map(|k| &k.adjoint() * k).sum();
        let sum_kk = sum_kk.hermitian_part();
        let eig = psd_eigh(&sum_kk, tol)?;
        if eig.max() > 1.0 + tol.psd_tol {
            return Err(Error::TraceIncreasing(eig.max() - 1.0));
        }
        Ok(Self { kraus, sum_kk })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(d)],
            sum_kk: ComplexMatrix::identity(d),
        }
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `Σ K_i† K_i`.
    pub fn sum_kk(&self) -> &ComplexMatrix {
        &self.sum_kk
    }

    pub fn dim(&self) -> usize {
        self.sum_kk.dim()
    }

    pub fn is_channel(&self, tol: &Tolerance) -> bool {
        tol.matrices_close(&self.sum_kk, &ComplexMatrix::identity(self.dim()))
    }

    /// Linear action on an arbitrary square matrix.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        self.kraus
            .iter()
            .map(|k| &(k * m) * &k.adjoint())
            .sum()
    }

    /// `Σ_{ij} |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)`, input index major.
    pub fn choi(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut out = ComplexMatrix::zeros(d * d, d * d);
        for k in &self.kraus {
            // w[i*d + o] = K[o][i]
            let w: Vec<C64> = (0..d * d).map(|idx| k[(idx % d, idx / d)]).collect();
            out = &out + &ComplexMatrix::ket_bra(&w, &w);
        }
        out
    }

    /// Recovers a Kraus form from a Choi matrix, which must be PSD.
    pub fn from_choi(choi: &ComplexMatrix, d: usize, tol: &Tolerance) -> Result<Self> {
        if choi.rows() != d * d || !choi.is_square() {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: choi.rows(),
            });
        }
        let eig = psd_eigh(choi, tol)?;
        let mut kraus = Vec::new();
        for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda <= KRAUS_CUTOFF {
                continue;
            }
            let v = eig.eigenvector(idx);
            let s = lambda.sqrt();
            let mut k = ComplexMatrix::zeros(d, d);
            for i in 0..d {
                for o in 0..d {
                    k[(o, i)] = v[i * d + o] * s;
                }
            }
            kraus.push(k);
        }
        if kraus.is_empty() {
            kraus.push(ComplexMatrix::zeros(d, d));
        }
        Self::new(kraus, tol)
    }

    /// Admits a map given only by its linear action, via its Choi matrix.
    pub fn from_linear_map(
        d: usize,
        map: impl Fn(&ComplexMatrix) -> ComplexMatrix,
        tol: &Tolerance,
    ) -> Result<Self> {
        Self::from_choi(&choi_of_map(d, map), d, tol)
    }

    /// `post ∘ self`.
    pub fn then(&self, post: &QuantumOperation, tol: &Tolerance) -> Result<Self> {
        if post.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: post.dim(),
            });
        }
        let kraus = post
            .kraus
            .iter()
            .flat_map(|e| self.kraus.iter().map(move |k| e * k))
            .collect();
        Self::new(kraus, tol)
    }
}

/// Choi matrix of an arbitrary linear map on `d × d` matrices.
pub fn choi_of_map(d: usize, map: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let img = map(&ComplexMatrix::unit(d, i, j));
            for o in 0..d {
                for p in 0..d {
                    out[(i * d + o, j * d + p)] = img[(o, p)];
                }
            }
        }
    }
    out
}

/// `Σ_i K_i ρ K_i†` on a partial state.
pub fn apply_operation(op: &QuantumOperation, rho: &PartialState, tol: &Tolerance) -> Result<PartialState> {
    if rho.dim() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            found: rho.dim(),
        });
    }
    PartialState::new(op.apply_matrix(rho.matrix()).hermitian_part(), tol)
}

/// Label-indexed operations whose sum is a channel.
#[derive(Debug, Clone)]
pub struct Instrument {
    labels: Vec<String>,
    operations: Vec<QuantumOperation>,
}

impl Instrument {
    pub fn new(labels: Vec<String>, operations: Vec<QuantumOperation>, tol: &Tolerance) -> Result<Self> {
        if operations.is_empty() {
            return Err(Error::Empty("instrument"));
        }
        if labels.len() != operations.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: operations.len(),
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::LabelCollision(l.clone()));
            }
        }
        let d = operations[0].dim();
        if let Some(op) = operations.iter().find(|o| o.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: op.dim(),
            });
        }
        let total: ComplexMatrix = operations.iter().map(|o| o.sum_kk.clone()).sum();
        let id = ComplexMatrix::identity(d);
        if !tol.matrices_close(&total, &id) {
            return Err(Error::InvalidInstrument(format!(
                "total operation is not trace preserving (defect {:.3e})",
                total.distance(&id)
            )));
        }
        Ok(Self { labels, operations })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn operations(&self) -> &[QuantumOperation] {
        &self.operations
    }

    pub fn dim(&self) -> usize {
        self.operations[0].dim()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn operation(&self, label: &str) -> Result<&QuantumOperation> {
        Ok(&self.operations[self.index_of(label)?])
    }

    fn subset_indices<S: AsRef<str>>(&self, subset: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for s in subset {
            let i = self.index_of(s.as_ref())?;
            if out.contains(&i) {
                return Err(Error::LabelCollision(s.as_ref().to_string()));
            }
            out.push(i);
        }
        Ok(out)
    }

    /// `𝓘_X(m) = Σ_{x ∈ X} 𝓘_x(m)` on an arbitrary square matrix.
    pub fn apply_subset<S: AsRef<str>>(&self, subset: &[S], m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.dim(),
            });
        }
        let idx = self.subset_indices(subset)?;
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for i in idx {
            out = &out + &self.operations[i].apply_matrix(m);
        }
        Ok(out)
    }

    pub fn apply_to_state<S: AsRef<str>>(&self, subset: &[S], rho: &State, tol: &Tolerance) -> Result<PartialState> {
        PartialState::new(self.apply_subset(subset, rho.matrix())?.hermitian_part(), tol)
    }

    pub fn choi_matrices(&self) -> Vec<ComplexMatrix> {
        self.operations.iter().map(QuantumOperation::choi).collect()
    }

    /// Largest per-label Choi distance; infinite when labels differ.
    pub fn choi_distance(&self, other: &Self) -> f64 {
        if self.labels != other.labels || self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.operations
            .iter()
            .zip(&other.operations)
            .map(|(a, b)| a.choi().distance(&b.choi()))
            .fold(0.0, f64::max)
    }

    /// Equality of the induced maps, compared through Choi matrices.
    pub fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        self.labels == other.labels
            && self
                .operations
                .iter()
                .zip(&other.operations)
                .all(|(a, b)| tol.matrices_close(&a.choi(), &b.choi()))
    }

    /// `𝓔_x ∘ 𝓘_x` for a list of post-processing channels, one per label.
    pub fn post_process(&self, channels: &[QuantumOperation], tol: &Tolerance) -> Result<Self> {
        if channels.len() != self.operations.len() {
            return Err(Error::DimensionMismatch {
                expected: self.operations.len(),
                found: channels.len(),
            });
        }
        let ops = self
            .operations
            .iter()
            .zip(channels)
            .map(|(op, ch)| op.then(ch, tol))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.labels.clone(), ops, tol)
    }
}

/// `𝓛_x^A(ρ) = A_x^{1/2} ρ A_x^{1/2}`.
pub fn luders_instrument(a: &Observable, tol: &Tolerance) -> Result<Instrument> {
    let ops = a
        .effects()
        .iter()
        .map(|e| QuantumOperation::new(vec![e.sqrt().clone()], tol))
        .collect::<Result<Vec<_>>>()?;
    Instrument::new(a.labels().to_vec(), ops, tol)
}

/// `𝓘_x(ρ) = tr(ρ A_x) η`, realized by Kraus operators `√(α_i β_j) |v_j⟩⟨w_i|`
/// from the spectral decompositions of `A_x` and `η`.
pub fn trivial_instrument(a: &Observable, eta: &State, tol: &Tolerance) -> Result<Instrument> {
    if a.dim() != eta.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: eta.dim(),
        });
    }
    let d = a.dim();
    let eta_eig = psd_eigh(eta.matrix(), tol)?;
    let ops = a
        .effects()
        .iter()
        .map(|e| {
            let eig = psd_eigh(e.matrix(), tol)?;
            let mut kraus = Vec::new();
            for (i, &alpha) in eig.eigenvalues.iter().enumerate() {
                for (j, &beta) in eta_eig.eigenvalues.iter().enumerate() {
                    let w = alpha * beta;
                    if w <= KRAUS_CUTOFF {
                        continue;
                    }
                    let k = ComplexMatrix::ket_bra(&eta_eig.eigenvector(j), &eig.eigenvector(i));
                    kraus.push(k.scale_real(w.sqrt()));
                }
            }
            if kraus.is_empty() {
                kraus.push(ComplexMatrix::zeros(d, d));
            }
            QuantumOperation::new(kraus, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    Instrument::new(a.labels().to_vec(), ops, tol)
}

/// The unique observable `A^𝓘` with `tr 𝓘_x(ρ) = tr(ρ A^𝓘_x)`.
pub fn induced_observable(inst: &Instrument, tol: &Tolerance) -> Result<Observable> {
    let effects = inst
        .operations
        .iter()
        .map(|op| Effect::new(op.sum_kk.clone(), tol))
        .collect::<Result<Vec<_>>>()?;
    Observable::new(inst.labels.clone(), effects, tol)
}

/// `𝓘` is `A`-compatible iff `Ω_𝓘 = Ω_A` and `A^𝓘 = A`.
pub fn is_compatible_with(inst: &Instrument, a: &Observable, tol: &Tolerance) -> Result<bool> {
    if inst.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: inst.dim(),
        });
    }
    Ok(induced_observable(inst, tol)?.approx_eq(a, tol))
}

/// `𝓘_X(ρ) / tr 𝓘_X(ρ)`.
pub fn conditional_output_state<S: AsRef<str>>(
    inst: &Instrument,
    rho: &State,
    subset: &[S],
    tol: &Tolerance,
) -> Result<State> {
    inst.apply_to_state(subset, rho, tol)?.normalized(tol)
}

/// Which definition of `𝓟_ρ(A_X then B_Y)` to evaluate.
#[derive(Debug, Clone)]
pub enum JointMethod {
    /// `tr[𝓘_X(ρ) B_Y]` for an `A`-compatible instrument.
    Instrument(Instrument),
    /// The instrument definition specialized to the Lüders instrument of `A`.
    Luders,
    /// `tr(ρ A_X ∘ B_Y)`.
    Sequential,
}

impl JointMethod {
    pub fn name(&self) -> &'static str {
        match self {
            JointMethod::Instrument(_) => "instrument",
            JointMethod::Luders => "luders",
            JointMethod::Sequential => "sequential",
        }
    }
}

fn require_nonempty<S>(subset: &[S], what: &'static str) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::Empty(what));
    }
    Ok(())
}

/// `𝓟_ρ(A_X then B_Y)` under the chosen definition.
pub fn joint_probability<S: AsRef<str>, T: AsRef<str>>(
    rho: &State,
    a: &Observable,
    x: &[S],
    b: &Observable,
    y: &[T],
    method: &JointMethod,
    tol: &Tolerance,
) -> Result<f64> {
    require_nonempty(x, "first-outcome subset")?;
    require_nonempty(y, "second-outcome subset")?;
    for d in [a.dim(), b.dim()] {
        if d != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                found: d,
            });
        }
    }
    let by = b.subset_effect(y, tol)?;
    let p = match method {
        JointMethod::Instrument(inst) => {
            if inst.labels() != a.labels() || !is_compatible_with(inst, a, tol)? {
                return Err(Error::IncompatibleInstrument);
            }
            inst.apply_subset(x, rho.matrix())?.trace_product(by.matrix())
        }
        JointMethod::Luders => a
            .subset_indices(x)?
            .into_iter()
            .map(|i| rho.matrix().trace_product(&sandwich(&a.effects()[i], by.matrix())))
            .sum(),
        JointMethod::Sequential => {
            let ax = a.subset_effect(x, tol)?;
            rho.matrix().trace_product(&sandwich(&ax, by.matrix()))
        }
    };
    clamp_probability(p, tol)
}

/// `|P(X1 ∪ X2) − P(X1) − P(X2)|` under `method`, for disjoint `X1`, `X2`.
pub fn additivity_gap_with<S: AsRef<str>>(
    rho: &State,
    a: &Observable,
    x1: &[S],
    x2: &[S],
    b: &Observable,
    y: &[S],
    method: &JointMethod,
    tol: &Tolerance,
) -> Result<f64> {
    if let Some(s) = x1.iter().find(|s| x2.iter().any(|t| t.as_ref() == s.as_ref())) {
        return Err(Error::OverlappingSubsets(s.as_ref().to_string()));
    }
    let union: Vec<&str> = x1.iter().chain(x2).map(AsRef::as_ref).collect();
    let whole = joint_probability(rho, a, &union, b, y, method, tol)?;
    let p1 = joint_probability(rho, a, x1, b, y, method, tol)?;
    let p2 = joint_probability(rho, a, x2, b, y, method, tol)?;
    Ok((whole - p1 - p2).abs())
}

/// Additivity gap of the sequential-product definition, the one expected to
/// fail additivity in the first argument.
pub fn additivity_gap<S: AsRef<str>>(
    rho: &State,
    a: &Observable,
    x1: &[S],
    x2: &[S],
    b: &Observable,
    y: &[S],
    tol: &Tolerance,
) -> Result<f64> {
    additivity_gap_with(rho, a, x1, x2, b, y, &JointMethod::Sequential, tol)
}

/// A concrete instance where the sequential joint probability is not
/// additive: `X1 = {"0"}`, `X2 = {"1"}`, `Y = {"0"}`.
#[derive(Debug, Clone)]
pub struct AdditivityWitness {
    pub restart: usize,
    pub state: State,
    pub a: Observable,
    pub b: Observable,
    pub x1: Vec<String>,
    pub x2: Vec<String>,
    pub y: Vec<String>,
    pub gap: f64,
}

fn random_bloch_effect_in(rng: &mut ChaCha8Rng, alpha: f64) -> [f64; 3] {
    let d = crate::random::direction(rng).components();
    let r = alpha.min(2.0 - alpha) * rng.gen::<f64>();
    [d[0] * r, d[1] * r, d[2] * r]
}

/// Unsharp three-outcome qubit observable `{a, b, I − a − b}` and a two-outcome
/// `{c, I − c}`, all Bloch-parameterized.
fn random_witness_candidate(rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<(Observable, Observable)> {
    let labels = index_labels(3);
    loop {
        let (a1, a2): (f64, f64) = (rng.gen(), rng.gen());
        if a1 + a2 >= 2.0 {
            continue;
        }
        let n1 = random_bloch_effect_in(rng, a1);
        let n2 = random_bloch_effect_in(rng, a2);
        let n3 = [-(n1[0] + n2[0]), -(n1[1] + n2[1]), -(n1[2] + n2[2])];
        let a3 = 2.0 - a1 - a2;
        if (n3[0] * n3[0] + n3[1] * n3[1] + n3[2] * n3[2]).sqrt() > a3.min(2.0 - a3) {
            continue;
        }
        let mats = vec![
            bloch_effect_matrix(a1, n1),
            bloch_effect_matrix(a2, n2),
            bloch_effect_matrix(a3, n3),
        ];
        let obs = match Observable::from_matrices(labels.clone(), mats, tol) {
            Ok(o) => o,
            Err(_) => continue,
        };
        let gamma: f64 = rng.gen();
        let m = random_bloch_effect_in(rng, gamma);
        let c = bloch_effect_matrix(gamma, m);
        let c_comp = &ComplexMatrix::identity(2) - &c;
        let b = Observable::from_matrices(index_labels(2), vec![c, c_comp], tol)?;
        return Ok((obs, b));
    }
}

/// Seeded random search for a large additivity gap of the sequential joint
/// probability. Each restart draws a candidate, forms
/// `D = (a+b)∘c − a∘c − b∘c` and evaluates at the eigenvector of `D` with the
/// largest `|λ|`. Ties keep the earliest restart.
pub fn search_additivity_witness(restarts: usize, seed: u64, tol: &Tolerance) -> Result<AdditivityWitness> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<AdditivityWitness> = None;
    let x1 = vec!["0".to_string()];
    let x2 = vec!["1".to_string()];
    let y = vec!["0".to_string()];
    for restart in 0..restarts.max(1) {
        let (a, b) = random_witness_candidate(&mut rng, tol)?;
        let ea = &a.effects()[0];
        let eb = &a.effects()[1];
        let c = &b.effects()[0];
        let ab = ea.sum(eb, tol)?;
        let delta = &(&sandwich(&ab, c.matrix()) - &sandwich(ea, c.matrix())) - &sandwich(eb, c.matrix());
        let eig = crate::linalg::eigh(&delta.hermitian_part(), tol)?;
        let k = if eig.min().abs() > eig.max().abs() { 0 } else { eig.eigenvalues.len() - 1 };
        let state = State::pure(&eig.eigenvector(k))?;
        let gap = additivity_gap(&state, &a, &x1, &x2, &b, &y, tol)?;
        if best.as_ref().map_or(true, |w| gap > w.gap) {
            best = Some(AdditivityWitness {
                restart,
                state,
                a,
                b,
                x1: x1.clone(),
                x2: x2.clone(),
                y: y.clone(),
                gap,
            });
        }
    }
    Ok(best.expect("at least one restart"))
}
