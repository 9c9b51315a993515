//! Effects `0 ≤ a ≤ I`, their sequential product and the additivity relation.

use crate::error::{Error, Result};
use crate::linalg::{loewner_leq, psd_eigh, vector_norm, ComplexMatrix, Tolerance, C64};

/// A validated effect with its positive square root precomputed.
#[derive(Debug, Clone)]
pub struct Effect {
    matrix: ComplexMatrix,
    sqrt: ComplexMatrix,
    sharp: bool,
    atom: bool,
}

impl Effect {
    /// Validates `m` as an effect. Rejects non-Hermitian input, negative
    /// eigenvalues below `-psd_tol` and eigenvalues above `1 + psd_tol`.
    pub fn new(m: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let eig = psd_eigh(&m, tol)?;
        if eig.max() > 1.0 + tol.psd_tol {
            return Err(Error::ExceedsIdentity(eig.max()));
        }
        let matrix = m.hermitian_part();
        let sharp = tol.matrices_close(&(&matrix * &matrix), &matrix);
        let sqrt = eig.map(|x| x.min(1.0).sqrt());
        let atom = sharp && (matrix.trace().re - 1.0).abs() <= 0.5;
        Ok(Self {
            matrix,
            sqrt,
            sharp,
            atom,
        })
    }

    /// The atom `P_φ̂ = |φ⟩⟨φ| / ‖φ‖²`.
    pub fn atom(phi: &[C64], tol: &Tolerance) -> Result<Self> {
        let norm = vector_norm(phi);
        if norm == 0.0 {
            return Err(Error::Empty("vector"));
        }
        let unit: Vec<C64> = phi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::ket_bra(&unit, &unit), tol)
    }

    pub fn identity(dim: usize) -> Self {
        let id = ComplexMatrix::identity(dim);
        Self {
            matrix: id.clone(),
            sqrt: id,
            sharp: true,
            atom: dim == 1,
        }
    }

    pub fn zero(dim: usize) -> Self {
        let z = ComplexMatrix::zeros(dim, dim);
        Self {
            matrix: z.clone(),
            sqrt: z,
            sharp: true,
            atom: false,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `a^{1/2}`.
    pub fn sqrt(&self) -> &ComplexMatrix {
        &self.sqrt
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Whether the effect is a projection.
    pub fn is_sharp(&self) -> bool {
        self.sharp
    }

    /// Whether the effect is a rank-one projection.
    pub fn is_atom(&self) -> bool {
        self.atom
    }

    /// `I − a`.
    pub fn complement(&self, tol: &Tolerance) -> Result<Self> {
        Self::new(&ComplexMatrix::identity(self.dim()) - &self.matrix, tol)
    }

    pub fn scaled(&self, s: f64, tol: &Tolerance) -> Result<Self> {
        Self::new(self.matrix.scale_real(s), tol)
    }

    /// `a + b`, which must again be an effect.
    pub fn sum(&self, other: &Self, tol: &Tolerance) -> Result<Self> {
        check_dims(self, other)?;
        Self::new(&self.matrix + &other.matrix, tol).map_err(|e| match e {
            Error::ExceedsIdentity(_) => Error::NotOrthogonal,
            other => other,
        })
    }

    pub fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        tol.matrices_close(&self.matrix, &other.matrix)
    }
}

fn check_dims(a: &Effect, b: &Effect) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// `a^{1/2} m a^{1/2}` for any square `m` of matching size, Hermitized when
/// `m` is Hermitian.
pub(crate) fn sandwich(a: &Effect, m: &ComplexMatrix) -> ComplexMatrix {
    &(a.sqrt() * m) * a.sqrt()
}

/// Sequential product `a ∘ b = a^{1/2} b a^{1/2}`.
pub fn seq_product(a: &Effect, b: &Effect, tol: &Tolerance) -> Result<Effect> {
    check_dims(a, b)?;
    Effect::new(sandwich(a, b.matrix()).hermitian_part(), tol)
}

/// `(b | a)`, the effect `b` conditioned on `a`; equal to `a ∘ b`.
pub fn condition_effect(b: &Effect, a: &Effect, tol: &Tolerance) -> Result<Effect> {
    seq_product(a, b, tol)
}

/// `‖ab − ba‖_F ≤ eq_tol·(1 + ‖a‖‖b‖)`.
pub fn is_compatible(a: &Effect, b: &Effect, tol: &Tolerance) -> Result<bool> {
    check_dims(a, b)?;
    let comm = a.matrix().commutator(b.matrix()).frobenius_norm();
    let scale = 1.0 + a.matrix().frobenius_norm() * b.matrix().frobenius_norm();
    Ok(comm <= tol.eq_tol * scale)
}

/// `a ⊥ b`, i.e. `a + b ≤ I`.
pub fn is_perp(a: &Effect, b: &Effect, tol: &Tolerance) -> Result<bool> {
    check_dims(a, b)?;
    loewner_leq(
        &(a.matrix() + b.matrix()),
        &ComplexMatrix::identity(a.dim()),
        tol,
    )
}

/// Outcome of an additivity test `(a, b : c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Additivity {
    pub holds: bool,
    /// `‖(a+b)∘c − a∘c − b∘c‖_F`.
    pub gap: f64,
}

/// Tests whether orthogonal `a` and `b` are additive relative to `c`, in the
/// square-root form `(a+b)^{1/2} c (a+b)^{1/2} = a^{1/2} c a^{1/2} + b^{1/2} c b^{1/2}`.
pub fn additive_relative(a: &Effect, b: &Effect, c: &Effect, tol: &Tolerance) -> Result<Additivity> {
    check_dims(a, b)?;
    check_dims(a, c)?;
    if !is_perp(a, b, tol)? {
        return Err(Error::NotOrthogonal);
    }
    let ab = a.sum(b, tol)?;
    let lhs = sandwich(&ab, c.matrix());
    let rhs = &sandwich(a, c.matrix()) + &sandwich(b, c.matrix());
    let gap = lhs.distance(&rhs);
    Ok(Additivity {
        holds: gap <= tol.eq_tol,
        gap,
    })
}
