//! Finite POVM observables and the constructions built from them: sequential
//! products, conditioned observables, distributions and marginals, mixtures
//! and complementary pairs.

use std::collections::HashSet;
use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::effect::{is_compatible, seq_product, Effect};
use crate::error::{Error, Result};
use crate::linalg::{inner, ComplexMatrix, Tolerance, C64};
use crate::random;
use crate::state::{clamp_probability, State};

/// An observable: ordered labels with effects summing to the identity.
#[derive(Debug, Clone)]
pub struct Observable {
    labels: Vec<String>,
    effects: Vec<Effect>,
    sharp: bool,
    atomic: bool,
}

impl Observable {
    pub fn new(labels: Vec<String>, effects: Vec<Effect>, tol: &Tolerance) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::Empty("observable"));
        }
        if labels.len() != effects.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: effects.len(),
            });
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::LabelCollision(l.clone()));
            }
        }
        let dim = effects[0].dim();
        if let Some(e) = effects.iter().find(|e| e.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: e.dim(),
            });
        }
        let total: ComplexMatrix = effects.iter().map(|e| e.matrix().clone()).sum();
        let id = ComplexMatrix::identity(dim);
        if !tol.matrices_close(&total, &id) {
            return Err(Error::NotResolutionOfIdentity(total.distance(&id)));
        }
        let sharp = effects.iter().all(Effect::is_sharp);
        let atomic = effects.iter().all(Effect::is_atom);
        Ok(Self {
            labels,
            effects,
            sharp,
            atomic,
        })
    }

    /// Validates raw matrices as effects first.
    pub fn from_matrices(labels: Vec<String>, matrices: Vec<ComplexMatrix>, tol: &Tolerance) -> Result<Self> {
        let effects = matrices
            .into_iter()
            .map(|m| Effect::new(m, tol))
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels, effects, tol)
    }

    /// Atomic observable `{P_{φ_x}}` from an orthonormal basis.
    pub fn atomic_from_basis(labels: Vec<String>, basis: &[Vec<C64>], tol: &Tolerance) -> Result<Self> {
        let effects = basis
            .iter()
            .map(|v| Effect::atom(v, tol))
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels, effects, tol)
    }

    /// The one-outcome observable `{I}`.
    pub fn trivial(dim: usize, label: &str) -> Self {
        Self {
            labels: vec![label.to_string()],
            effects: vec![Effect::identity(dim)],
            sharp: true,
            atomic: dim == 1,
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn is_sharp(&self) -> bool {
        self.sharp
    }

    pub fn is_atomic(&self) -> bool {
        self.atomic
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn effect(&self, label: &str) -> Result<&Effect> {
        Ok(&self.effects[self.index_of(label)?])
    }

    /// Label indices for a subset, rejecting unknown and repeated labels.
    pub fn subset_indices<S: AsRef<str>>(&self, subset: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(subset.len());
        for s in subset {
            let i = self.index_of(s.as_ref())?;
            if out.contains(&i) {
                return Err(Error::LabelCollision(s.as_ref().to_string()));
            }
            out.push(i);
        }
        Ok(out)
    }

    /// `A_X = Σ_{x ∈ X} A_x`.
    pub fn subset_effect<S: AsRef<str>>(&self, subset: &[S], tol: &Tolerance) -> Result<Effect> {
        let idx = self.subset_indices(subset)?;
        if idx.is_empty() {
            return Ok(Effect::zero(self.dim()));
        }
        let m: ComplexMatrix = idx.iter().map(|&i| self.effects[i].matrix().clone()).sum();
        Effect::new(m, tol)
    }

    /// Every effect is a nonnegative multiple of the identity.
    pub fn is_identity_observable(&self, tol: &Tolerance) -> bool {
        let d = self.dim();
        self.effects.iter().all(|e| {
            let lambda = e.matrix().trace().re / d as f64;
            tol.matrices_close(e.matrix(), &ComplexMatrix::identity(d).scale_real(lambda))
        })
    }

    /// Effect-wise equality with identical label lists.
    pub fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        self.labels == other.labels
            && self
                .effects
                .iter()
                .zip(&other.effects)
                .all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Largest effect-wise Frobenius distance; infinite if sizes differ.
    pub fn max_distance(&self, other: &Self) -> f64 {
        if self.len() != other.len() || self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.effects
            .iter()
            .zip(&other.effects)
            .map(|(a, b)| a.matrix().distance(b.matrix()))
            .fold(0.0, f64::max)
    }

    pub fn relabeled(&self, labels: Vec<String>, tol: &Tolerance) -> Result<Self> {
        Self::new(labels, self.effects.clone(), tol)
    }
}

fn check_dims(a: &Observable, b: &Observable) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

pub fn pair_label(x: &str, y: &str) -> String {
    format!("({x},{y})")
}

/// Splits `"(x,y)"` at its top-level comma; `x` and `y` may themselves be
/// pair labels.
pub fn parse_pair_label(label: &str) -> Result<(&str, &str)> {
    let bad = || Error::MalformedLabels(label.to_string());
    let inner = label
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(bad)?;
    let mut depth = 0i32;
    let mut split = None;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                if split.is_some() {
                    return Err(bad());
                }
                split = Some(i);
            }
            _ => {}
        }
        if depth < 0 {
            return Err(bad());
        }
    }
    let i = split.ok_or_else(bad)?;
    if depth != 0 {
        return Err(bad());
    }
    Ok((&inner[..i], &inner[i + 1..]))
}

/// `A ∘ B` on `Ω_A × Ω_B`, labels `"(x,y)"` with `x` outer and `y` inner.
pub fn seq_product_obs(a: &Observable, b: &Observable, tol: &Tolerance) -> Result<Observable> {
    check_dims(a, b)?;
    let mut labels = Vec::with_capacity(a.len() * b.len());
    let mut effects = Vec::with_capacity(a.len() * b.len());
    for (x, ax) in a.labels.iter().zip(&a.effects) {
        for (y, by) in b.labels.iter().zip(&b.effects) {
            labels.push(pair_label(x, y));
            effects.push(seq_product(ax, by, tol)?);
        }
    }
    Observable::new(labels, effects, tol)
}

/// `(B | A)_y = Σ_x A_x ∘ B_y`.
pub fn condition_obs(b: &Observable, a: &Observable, tol: &Tolerance) -> Result<Observable> {
    check_dims(a, b)?;
    let effects = b
        .effects
        .iter()
        .map(|by| {
            let m: ComplexMatrix = a
                .effects
                .iter()
                .map(|ax| crate::effect::sandwich(ax, by.matrix()))
                .sum();
            Effect::new(m.hermitian_part(), tol)
        })
        .collect::<Result<Vec<_>>>()?;
    Observable::new(b.labels.clone(), effects, tol)
}

/// Every `A_x` commutes with every `B_y`.
pub fn observables_commute(a: &Observable, b: &Observable, tol: &Tolerance) -> Result<bool> {
    check_dims(a, b)?;
    for ax in &a.effects {
        for by in &b.effects {
            if !is_compatible(ax, by, tol)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `max_{x,y} ‖[A_x, B_y]‖_F`.
pub fn max_commutator(a: &Observable, b: &Observable) -> Result<f64> {
    check_dims(a, b)?;
    let mut worst = 0.0f64;
    for ax in &a.effects {
        for by in &b.effects {
            worst = worst.max(ax.matrix().commutator(by.matrix()).frobenius_norm());
        }
    }
    Ok(worst)
}

/// A finite probability distribution over labelled outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDistribution {
    labels: Vec<String>,
    probs: Vec<f64>,
}

impl ProbDistribution {
    pub fn new(labels: Vec<String>, probs: Vec<f64>, tol: &Tolerance) -> Result<Self> {
        if labels.len() != probs.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: probs.len(),
            });
        }
        let probs = probs
            .into_iter()
            .map(|p| clamp_probability(p, tol))
            .collect::<Result<Vec<_>>>()?;
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > tol.eq_tol * (1.0 + probs.len() as f64) {
            return Err(Error::NotResolutionOfIdentity((total - 1.0).abs()));
        }
        Ok(Self { labels, probs })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, label: &str) -> Result<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.probs[i])
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// `Φ(X) = Σ_{x ∈ X} Φ(x)`.
    pub fn subset_prob<S: AsRef<str>>(&self, subset: &[S]) -> Result<f64> {
        subset.iter().map(|s| self.get(s.as_ref())).sum()
    }

    /// Largest pointwise difference; infinite if the label lists differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.labels != other.labels {
            return f64::INFINITY;
        }
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `Φ_A^ρ(x) = tr(ρ A_x)`.
pub fn distribution(rho: &State, a: &Observable, tol: &Tolerance) -> Result<ProbDistribution> {
    if rho.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: rho.dim(),
        });
    }
    let probs = a
        .effects
        .iter()
        .map(|e| rho.matrix().trace_product(e.matrix()))
        .collect();
    ProbDistribution::new(a.labels.clone(), probs, tol)
}

/// Left and right marginals of a distribution over pair labels `"(x,y)"`.
/// Marginal labels keep their order of first appearance.
pub fn marginals(joint: &ProbDistribution, tol: &Tolerance) -> Result<(ProbDistribution, ProbDistribution)> {
    let mut left: Vec<(String, f64)> = Vec::new();
    let mut right: Vec<(String, f64)> = Vec::new();
    fn accumulate(acc: &mut Vec<(String, f64)>, key: &str, p: f64) {
        match acc.iter_mut().find(|(k, _)| k == key) {
            Some((_, v)) => *v += p,
            None => acc.push((key.to_string(), p)),
        }
    }
    for (label, &p) in joint.labels.iter().zip(&joint.probs) {
        let (x, y) = parse_pair_label(label)?;
        accumulate(&mut left, x, p);
        accumulate(&mut right, y, p);
    }
    let build = |v: Vec<(String, f64)>| {
        let (labels, probs) = v.into_iter().unzip();
        ProbDistribution::new(labels, probs, tol)
    };
    Ok((build(left)?, build(right)?))
}

/// Effect-wise convex combination `Σ λ_i A_i` of observables sharing one label list.
pub fn mixture_obs(weights: &[f64], observables: &[Observable], tol: &Tolerance) -> Result<Observable> {
    if weights.is_empty() || weights.len() != observables.len() {
        return Err(Error::WeightInvalid(format!(
            "{} weights for {} observables",
            weights.len(),
            observables.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0)) {
        return Err(Error::WeightInvalid(format!("negative weight {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > tol.eq_tol {
        return Err(Error::WeightInvalid(format!("weights sum to {total}")));
    }
    let first = &observables[0];
    for o in &observables[1..] {
        if o.labels != first.labels {
            return Err(Error::LabelMismatch);
        }
        check_dims(first, o)?;
    }
    let effects = (0..first.len())
        .map(|x| {
            let m: ComplexMatrix = weights
                .iter()
                .zip(observables)
                .map(|(&w, o)| o.effects[x].matrix().scale_real(w))
                .sum();
            Effect::new(m, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    Observable::new(first.labels.clone(), effects, tol)
}

/// `A` and `B` are complementary when `A_x ∘ B_y = A_x / |Ω_B|` and
/// `B_y ∘ A_x = B_y / |Ω_A|` for all outcome pairs.
pub fn is_complementary(a: &Observable, b: &Observable, tol: &Tolerance) -> Result<bool> {
    check_dims(a, b)?;
    let m = a.len() as f64;
    let n = b.len() as f64;
    for ax in &a.effects {
        for by in &b.effects {
            let ab = seq_product(ax, by, tol)?;
            if !tol.matrices_close(ab.matrix(), &ax.matrix().scale_real(1.0 / n)) {
                return Ok(false);
            }
            let ba = seq_product(by, ax, tol)?;
            if !tol.matrices_close(ba.matrix(), &by.matrix().scale_real(1.0 / m)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn index_labels(d: usize) -> Vec<String> {
    (0..d).map(|i| i.to_string()).collect()
}

pub fn standard_basis(d: usize) -> Vec<Vec<C64>> {
    (0..d)
        .map(|i| {
            let mut v = vec![C64::new(0.0, 0.0); d];
            v[i] = C64::new(1.0, 0.0);
            v
        })
        .collect()
}

/// `f_k = d^{-1/2} Σ_j ω^{jk} e_j` with `ω = exp(2πi/d)`.
pub fn fourier_basis(d: usize) -> Vec<Vec<C64>> {
    let s = 1.0 / (d as f64).sqrt();
    (0..d)
        .map(|k| {
            (0..d)
                .map(|j| C64::from_polar(s, 2.0 * PI * ((j * k) % d) as f64 / d as f64))
                .collect()
        })
        .collect()
}

/// Standard-basis and Fourier-basis atomic observables, labelled `0..d`.
pub fn fourier_mub_pair(d: usize, tol: &Tolerance) -> Result<(Observable, Observable)> {
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    let a = Observable::atomic_from_basis(index_labels(d), &standard_basis(d), tol)?;
    let b = Observable::atomic_from_basis(index_labels(d), &fourier_basis(d), tol)?;
    Ok((a, b))
}

/// `max_{i,j} | |⟨u_i, v_j⟩|² − 1/d |` over two bases.
pub fn unbiasedness_defect(u: &[Vec<C64>], v: &[Vec<C64>]) -> f64 {
    let d = u.len() as f64;
    let mut worst = 0.0f64;
    for ui in u {
        for vj in v {
            worst = worst.max((inner(ui, vj).norm_sqr() - 1.0 / d).abs());
        }
    }
    worst
}

/// A pair `(A, B)` where `B` is left unchanged by conditioning on an unsharp
/// `A` without commuting with it.
#[derive(Debug, Clone)]
pub struct ConverseCandidate {
    pub trial: usize,
    pub residual: f64,
    pub commutator: f64,
}

#[derive(Debug, Clone)]
pub struct ConverseSearchReport {
    pub trials: usize,
    pub candidates: Vec<ConverseCandidate>,
    /// Smallest `‖(B|A) − B‖ / max‖[A_x, B_y]‖` seen among noncommuting pairs.
    pub best_ratio: f64,
}

/// Seeded random search for unsharp `A` and `B` with `(B|A) = B` but
/// `[A, B] ≠ 0`. Whether such pairs exist is not settled; this reports
/// whatever it finds and claims nothing.
pub fn search_unsharp_converse(
    dim: usize,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<ConverseSearchReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = Vec::new();
    let mut best_ratio = f64::INFINITY;
    for trial in 0..trials {
        let a = random::observable(&mut rng, dim, 2, tol)?;
        let b = random::observable(&mut rng, dim, 2, tol)?;
        let cond = condition_obs(&b, &a, tol)?;
        let residual = cond.max_distance(&b);
        let commutator = max_commutator(&a, &b)?;
        if commutator > 1e-6 {
            best_ratio = best_ratio.min(residual / commutator);
            if residual <= tol.eq_tol {
                candidates.push(ConverseCandidate {
                    trial,
                    residual,
                    commutator,
                });
            }
        }
    }
    Ok(ConverseSearchReport {
        trials,
        candidates,
        best_ratio,
    })
}
