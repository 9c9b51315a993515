//! Closed-form qubit constructions: Pauli and Bloch parameterizations, spin
//! component observables and the analytic formulas for their sequential
//! products and conditionings.
//!
//! These formulas never call the generic eigensolver-based paths, which makes
//! them usable as independent oracles for the rest of the crate.

use std::fmt;

use crate::effect::Effect;
use crate::error::{Error, Result};
use crate::linalg::{inner, ComplexMatrix, Tolerance, C64, ONE, ZERO};
use crate::observable::{pair_label, Observable};
use crate::state::State;

const UNIT_TOL: f64 = 1e-12;
const CLI_UNIT_TOL: f64 = 1e-6;
const POLE_TOL: f64 = 1e-12;

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![ZERO, C64::new(0.0, -1.0)], vec![C64::new(0.0, 1.0), ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// `n · σ`.
pub fn pauli_dot(n: [f64; 3]) -> ComplexMatrix {
    let [x, y, z] = n;
    &(&pauli_x().scale_real(x) + &pauli_y().scale_real(y)) + &pauli_z().scale_real(z)
}

/// A unit vector in `R³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction([f64; 3]);

impl Direction {
    /// Accepts `n` if `|‖n‖ − 1| ≤ 1e-12`.
    pub fn new(n: [f64; 3]) -> Result<Self> {
        let norm = norm3(n);
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit(norm));
        }
        Ok(Self(n))
    }

    /// Normalizes vectors within `1e-6` of unit length; rejects the rest.
    pub fn normalized(n: [f64; 3]) -> Result<Self> {
        let norm = norm3(n);
        if (norm - 1.0).abs() > CLI_UNIT_TOL {
            return Err(Error::NotUnit(norm));
        }
        Ok(Self([n[0] / norm, n[1] / norm, n[2] / norm]))
    }

    pub fn x() -> Self {
        Self([1.0, 0.0, 0.0])
    }

    pub fn y() -> Self {
        Self([0.0, 1.0, 0.0])
    }

    pub fn z() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0).map(|(a, b)| a * b).sum()
    }

    pub fn negated(&self) -> Self {
        Self([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    /// Comma-separated triple such as `0,0,1`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected three components, got {s:?}")));
        }
        let mut v = [0.0; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad number {p:?}")))?;
        }
        Self::normalized(v)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0], self.0[1], self.0[2])
    }
}

fn norm3(n: [f64; 3]) -> f64 {
    (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt()
}

/// `½(αI + n·σ)` without validation.
pub fn bloch_effect_matrix(alpha: f64, n: [f64; 3]) -> ComplexMatrix {
    (&ComplexMatrix::identity(2).scale_real(alpha) + &pauli_dot(n)).scale_real(0.5)
}

/// Qubit effect `½(αI + n·σ)`; valid iff `‖n‖ ≤ α ≤ 2 − ‖n‖`.
pub fn bloch_effect(alpha: f64, n: [f64; 3], tol: &Tolerance) -> Result<Effect> {
    Effect::new(bloch_effect_matrix(alpha, n), tol)
}

/// Qubit state `½(I + r·σ)` for `‖r‖ ≤ 1`.
pub fn bloch_state(r: [f64; 3], tol: &Tolerance) -> Result<State> {
    State::new(bloch_effect_matrix(1.0, r), tol)
}

/// Outcome sign of a spin measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn label(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    fn index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

fn spin_labels() -> Vec<String> {
    vec!["+".to_string(), "-".to_string()]
}

/// `S_+^n = ½ [[1+n₃, n₁−in₂], [n₁+in₂, 1−n₃]]`.
pub fn spin_plus_matrix(n: &Direction) -> ComplexMatrix {
    let [x, y, z] = n.components();
    ComplexMatrix::from_rows(&[
        vec![C64::new((1.0 + z) / 2.0, 0.0), C64::new(x / 2.0, -y / 2.0)],
        vec![C64::new(x / 2.0, y / 2.0), C64::new((1.0 - z) / 2.0, 0.0)],
    ])
}

/// `S_±^n = ½(I ± n·σ)`.
pub fn spin_effect_matrix(n: &Direction, sign: Sign) -> ComplexMatrix {
    let [x, y, z] = n.components();
    match sign {
        Sign::Plus => bloch_effect_matrix(1.0, [x, y, z]),
        Sign::Minus => bloch_effect_matrix(1.0, [-x, -y, -z]),
    }
}

/// The spin component observable `S^n = {S_+^n, S_−^n}` with labels `+`, `-`.
pub fn spin_observable(n: &Direction, tol: &Tolerance) -> Result<Observable> {
    Observable::from_matrices(
        spin_labels(),
        Sign::BOTH.iter().map(|&s| spin_effect_matrix(n, s)).collect(),
        tol,
    )
}

/// `(φ_+^n, φ_−^n)`, each with its last nonzero component real positive.
pub fn spin_eigenvectors(n: &Direction) -> ([C64; 2], [C64; 2]) {
    let [x, y, z] = n.components();
    let plus = if (z - 1.0).abs() < POLE_TOL {
        [ONE, ZERO]
    } else {
        let s = 1.0 / (2.0 * (1.0 - z)).sqrt();
        [C64::new(x * s, -y * s), C64::new((1.0 - z) * s, 0.0)]
    };
    // at the south pole S_+ = diag(0, 1), so its null vector is e_0
    let minus = if (z + 1.0).abs() < POLE_TOL {
        [ONE, ZERO]
    } else {
        let s = 1.0 / (2.0 * (1.0 + z)).sqrt();
        [C64::new(-x * s, y * s), C64::new((1.0 + z) * s, 0.0)]
    };
    (plus, minus)
}

fn eigenvector(n: &Direction, s: Sign) -> [C64; 2] {
    let (p, m) = spin_eigenvectors(n);
    match s {
        Sign::Plus => p,
        Sign::Minus => m,
    }
}

/// `|⟨φ_s^m, φ_t^n⟩|²`.
pub fn transition(m: &Direction, s: Sign, n: &Direction, t: Sign) -> f64 {
    inner(&eigenvector(m, s), &eigenvector(n, t)).norm_sqr()
}

/// `S^m ∘ S^n = {|⟨φ_s^m, φ_t^n⟩|² S_s^m}` in `(s, t)` row-major order.
pub fn seq_spin(m: &Direction, n: &Direction, tol: &Tolerance) -> Result<Observable> {
    let mut labels = Vec::with_capacity(4);
    let mut mats = Vec::with_capacity(4);
    for s in Sign::BOTH {
        for t in Sign::BOTH {
            labels.push(pair_label(s.label(), t.label()));
            mats.push(spin_effect_matrix(m, s).scale_real(transition(m, s, n, t)));
        }
    }
    Observable::from_matrices(labels, mats, tol)
}

/// `a = |⟨φ_+^m, φ_+^n⟩|²` and `(S^n | S^m)` from
/// `(S^n|S^m)_+ = (2a−1) S_+^m + (1−a) I`, `(S^n|S^m)_− = (1−2a) S_+^m + a I`.
pub fn conditioned_spin_closed_form(m: &Direction, n: &Direction, tol: &Tolerance) -> Result<(f64, Observable)> {
    let a = transition(m, Sign::Plus, n, Sign::Plus);
    let sp = spin_effect_matrix(m, Sign::Plus);
    let id = ComplexMatrix::identity(2);
    let plus = &sp.scale_real(2.0 * a - 1.0) + &id.scale_real(1.0 - a);
    let minus = &sp.scale_real(1.0 - 2.0 * a) + &id.scale_real(a);
    Ok((a, Observable::from_matrices(spin_labels(), vec![plus, minus], tol)?))
}

/// Coefficients `c_{ust} = |⟨φ_s^n, φ_t^r⟩|² |⟨φ_u^m, φ_s^n⟩|²` for three
/// successive spin measurements along `m`, `n`, `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinCoefficients {
    /// `|⟨φ_+^m, φ_+^n⟩|²`.
    pub a: f64,
    c: [[[f64; 2]; 2]; 2],
}

impl SpinCoefficients {
    pub fn get(&self, u: Sign, s: Sign, t: Sign) -> f64 {
        self.c[u.index()][s.index()][t.index()]
    }

    /// `Σ_{s,t} c_{ust}` for fixed first sign `u`.
    pub fn row_sum(&self, u: Sign) -> f64 {
        self.c[u.index()].iter().flatten().sum()
    }

    /// `(S^n ∘ S^r | S^m)_{(s,t)} = c_{+st} S_+^m + c_{−st} S_−^m`.
    pub fn conditioned_product(&self, m: &Direction, tol: &Tolerance) -> Result<Observable> {
        let sp = spin_effect_matrix(m, Sign::Plus);
        let sm = spin_effect_matrix(m, Sign::Minus);
        let mut labels = Vec::with_capacity(4);
        let mut mats = Vec::with_capacity(4);
        for s in Sign::BOTH {
            for t in Sign::BOTH {
                labels.push(pair_label(s.label(), t.label()));
                mats.push(&sp.scale_real(self.get(Sign::Plus, s, t)) + &sm.scale_real(self.get(Sign::Minus, s, t)));
            }
        }
        Observable::from_matrices(labels, mats, tol)
    }

    /// `((S^r | S^n) | S^m)_t = (Σ_s c_{+st}) S_+^m + (Σ_s c_{−st}) S_−^m`.
    pub fn nested_conditioned(&self, m: &Direction, tol: &Tolerance) -> Result<Observable> {
        let sp = spin_effect_matrix(m, Sign::Plus);
        let sm = spin_effect_matrix(m, Sign::Minus);
        let mats = Sign::BOTH
            .iter()
            .map(|&t| {
                let cp: f64 = Sign::BOTH.iter().map(|&s| self.get(Sign::Plus, s, t)).sum();
                let cm: f64 = Sign::BOTH.iter().map(|&s| self.get(Sign::Minus, s, t)).sum();
                &sp.scale_real(cp) + &sm.scale_real(cm)
            })
            .collect();
        Observable::from_matrices(spin_labels(), mats, tol)
    }

    /// `S^m ∘ (S^n ∘ S^r) = {c_{ust} S_u^m}` in `(u, s, t)` row-major order.
    pub fn triple_product(&self, m: &Direction, tol: &Tolerance) -> Result<Observable> {
        let mut labels = Vec::with_capacity(8);
        let mut mats = Vec::with_capacity(8);
        for u in Sign::BOTH {
            for s in Sign::BOTH {
                for t in Sign::BOTH {
                    labels.push(pair_label(u.label(), &pair_label(s.label(), t.label())));
                    mats.push(spin_effect_matrix(m, u).scale_real(self.get(u, s, t)));
                }
            }
        }
        Observable::from_matrices(labels, mats, tol)
    }
}

pub fn triple_spin_coefficients(m: &Direction, n: &Direction, r: &Direction) -> SpinCoefficients {
    let mut c = [[[0.0; 2]; 2]; 2];
    for u in Sign::BOTH {
        for s in Sign::BOTH {
            for t in Sign::BOTH {
                c[u.index()][s.index()][t.index()] = transition(n, s, r, t) * transition(m, u, n, s);
            }
        }
    }
    SpinCoefficients {
        a: transition(m, Sign::Plus, n, Sign::Plus),
        c,
    }
}

/// `max ‖((S^m∘S^n)∘S^r)_k − (S^m∘(S^n∘S^r))_k‖_F` over the eight outcomes in
/// row-major order. The left grouping is `|⟨φ_u^m,φ_s^n⟩|²|⟨φ_u^m,φ_t^r⟩|² S_u^m`.
pub fn associativity_gap(m: &Direction, n: &Direction, r: &Direction) -> f64 {
    let coeffs = triple_spin_coefficients(m, n, r);
    let mut worst = 0.0f64;
    for u in Sign::BOTH {
        for s in Sign::BOTH {
            for t in Sign::BOTH {
                let left = transition(m, u, n, s) * transition(m, u, r, t);
                let right = coeffs.get(u, s, t);
                // both are multiples of the rank-one S_u^m, whose norm is 1
                worst = worst.max((left - right).abs());
            }
        }
    }
    worst
}
