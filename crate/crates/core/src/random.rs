//! Seeded generators for the property suites.
//!
//! All generators take the caller's RNG so that a single `ChaCha8Rng` seed
//! replays a whole test case.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::effect::Effect;
use crate::error::Result;
use crate::instrument::{Instrument, QuantumOperation};
use crate::linalg::{eigh, psd_inv_sqrt, vector_norm, ComplexMatrix, Tolerance, C64};
use crate::observable::{index_labels, Observable};
use crate::qubit::Direction;
use crate::state::State;

/// Standard complex Gaussian: real and imaginary parts each of variance 1/2.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * h, im * h)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::from_vec(rows, cols, data).expect("nonzero shape")
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    let v = gaussian_vector(rng, n);
    let norm = vector_norm(&v);
    v.into_iter().map(|z| z / norm).collect()
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    gaussian_matrix(rng, d, d).hermitian_part()
}

/// Haar-random unitary by Gram–Schmidt on Gaussian columns.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v = gaussian_vector(rng, d);
        for _ in 0..2 {
            for c in &cols {
                let p = crate::linalg::inner(c, &v);
                for (x, ci) in v.iter_mut().zip(c) {
                    *x -= p * ci;
                }
            }
        }
        let n = vector_norm(&v);
        if n > 1e-6 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_columns(&cols)
}

/// Full-support unsharp effect: eigenvalues of a Gaussian Hermitian matrix
/// pushed through the logistic function.
pub fn effect<R: Rng + ?Sized>(rng: &mut R, d: usize, tol: &Tolerance) -> Result<Effect> {
    let eig = eigh(&hermitian(rng, d), tol)?;
    Effect::new(eig.map(|x| 1.0 / (1.0 + (-x).exp())), tol)
}

/// `V diag(values) V†`.
pub fn diagonal_in(basis: &ComplexMatrix, values: &[f64]) -> ComplexMatrix {
    &(basis * &ComplexMatrix::diag_real(values)) * &basis.adjoint()
}

/// `GG† / tr(GG†)`, full rank almost surely.
pub fn state<R: Rng + ?Sized>(rng: &mut R, d: usize, tol: &Tolerance) -> Result<State> {
    let g = gaussian_matrix(rng, d, d);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    State::new(m.scale_real(1.0 / tr), tol)
}

pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> State {
    State::pure(&unit_vector(rng, d)).expect("nonzero vector")
}

/// Random POVM `A_i = S^{-1/2} G_i S^{-1/2}` with `G_i = W_i W_i†`.
pub fn observable<R: Rng + ?Sized>(rng: &mut R, d: usize, outcomes: usize, tol: &Tolerance) -> Result<Observable> {
    let gs: Vec<ComplexMatrix> = (0..outcomes)
        .map(|_| {
            let w = gaussian_matrix(rng, d, d);
            &w * &w.adjoint()
        })
        .collect();
    let total: ComplexMatrix = gs.iter().cloned().sum();
    let inv = psd_inv_sqrt(&total, tol)?;
    let mats = gs.iter().map(|g| (&(&inv * g) * &inv).hermitian_part()).collect();
    Observable::from_matrices(index_labels(outcomes), mats, tol)
}

/// Sharp observable whose projections partition the columns of a random
/// unitary. Every outcome receives at least one column, so `outcomes ≤ d`.
pub fn sharp_observable<R: Rng + ?Sized>(rng: &mut R, d: usize, outcomes: usize, tol: &Tolerance) -> Result<Observable> {
    assert!(outcomes >= 1 && outcomes <= d, "need 1 ≤ outcomes ≤ d");
    let u = unitary(rng, d);
    let mut owner: Vec<usize> = (0..d).map(|i| if i < outcomes { i } else { rng.gen_range(0..outcomes) }).collect();
    // shuffle assignments so the first columns are not always singletons
    for i in (1..d).rev() {
        let j = rng.gen_range(0..=i);
        owner.swap(i, j);
    }
    let mats = (0..outcomes)
        .map(|x| {
            let vals: Vec<f64> = owner.iter().map(|&o| if o == x { 1.0 } else { 0.0 }).collect();
            diagonal_in(&u, &vals).hermitian_part()
        })
        .collect();
    Observable::from_matrices(index_labels(outcomes), mats, tol)
}

/// Kraus operators `K_i = G_i S^{-1/2}` with `S = Σ G_i† G_i`, grouped by outcome.
fn normalized_kraus<R: Rng + ?Sized>(rng: &mut R, d: usize, counts: &[usize], tol: &Tolerance) -> Result<Vec<Vec<ComplexMatrix>>> {
    let gs: Vec<Vec<ComplexMatrix>> = counts
        .iter()
        .map(|&m| (0..m).map(|_| gaussian_matrix(rng, d, d)).collect())
        .collect();
    let total: ComplexMatrix = gs.iter().flatten().map(|g| &g.adjoint() * g).sum();
    let inv = psd_inv_sqrt(&total.hermitian_part(), tol)?;
    Ok(gs
        .into_iter()
        .map(|group| group.into_iter().map(|g| &g * &inv).collect())
        .collect())
}

/// Random trace-preserving operation with `kraus` Kraus operators.
pub fn channel<R: Rng + ?Sized>(rng: &mut R, d: usize, kraus: usize, tol: &Tolerance) -> Result<QuantumOperation> {
    let mut groups = normalized_kraus(rng, d, &[kraus], tol)?;
    QuantumOperation::new(groups.pop().unwrap(), tol)
}

/// Random instrument with `outcomes` labels and between one and `max_kraus`
/// Kraus operators per outcome.
pub fn instrument<R: Rng + ?Sized>(rng: &mut R, d: usize, outcomes: usize, max_kraus: usize, tol: &Tolerance) -> Result<Instrument> {
    let counts: Vec<usize> = (0..outcomes).map(|_| rng.gen_range(1..=max_kraus)).collect();
    let groups = normalized_kraus(rng, d, &counts, tol)?;
    let ops = groups
        .into_iter()
        .map(|k| QuantumOperation::new(k, tol))
        .collect::<Result<Vec<_>>>()?;
    Instrument::new(index_labels(outcomes), ops, tol)
}

pub fn direction<R: Rng + ?Sized>(rng: &mut R) -> Direction {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 {
            if let Ok(d) = Direction::new([v[0] / n, v[1] / n, v[2] / n]) {
                return d;
            }
        }
    }
}

/// Uniform point of the closed unit ball, as a Bloch vector.
pub fn bloch_vector<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    let d = direction(rng).components();
    let r: f64 = rng.gen::<f64>().cbrt();
    [d[0] * r, d[1] * r, d[2] * r]
}
